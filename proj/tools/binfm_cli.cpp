// binfm command-line tool. Talks to the library exclusively through the C API
// in binfm_c.h.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "binfm/binfm_c.h"

namespace {

// Process exit codes.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDivergence = 3;

struct Failure : std::runtime_error {
  Failure(bfm_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
  bfm_status status;
};

void check(bfm_status s) {
  if (s != BFM_OK) throw Failure(s, bfm_last_error());
}

[[noreturn]] void usage_error(const std::string& msg) { throw Failure(BFM_ERR_USAGE, msg); }

int exit_code(bfm_status s) {
  switch (s) {
    case BFM_OK: return kExitOk;
    case BFM_ERR_USAGE: return kExitUsage;
    case BFM_ERR_DIVERGENCE: return kExitDivergence;
    default: return kExitData;
  }
}

struct DatasetDeleter {
  void operator()(bfm_dataset* d) const noexcept { bfm_dataset_free(d); }
};
struct ModelDeleter {
  void operator()(bfm_model* m) const noexcept { bfm_model_free(m); }
};
using DatasetPtr = std::unique_ptr<bfm_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<bfm_model, ModelDeleter>;

DatasetPtr load_data(const std::string& path, std::uint64_t min_dim) {
  bfm_dataset* raw = nullptr;
  check(bfm_dataset_load_libsvm(path.c_str(), min_dim, &raw));
  return DatasetPtr(raw);
}

DatasetPtr generate(const std::string& kind, std::uint64_t n, double noise, std::uint64_t seed) {
  bfm_dataset* raw = nullptr;
  check(bfm_dataset_generate(kind.c_str(), n, noise, seed, &raw));
  return DatasetPtr(raw);
}

std::pair<DatasetPtr, DatasetPtr> split(const bfm_dataset* ds, double frac, std::uint64_t seed) {
  bfm_dataset* a = nullptr;
  bfm_dataset* b = nullptr;
  check(bfm_dataset_split(ds, frac, seed, &a, &b));
  return {DatasetPtr(a), DatasetPtr(b)};
}

ModelPtr train(const bfm_dataset* ds, const bfm_train_options& opts) {
  bfm_model* raw = nullptr;
  check(bfm_train(ds, &opts, &raw));
  return ModelPtr(raw);
}

ModelPtr load_model(const std::string& path) {
  bfm_model* raw = nullptr;
  check(bfm_model_load(path.c_str(), &raw));
  return ModelPtr(raw);
}

bfm_model_info info_of(const bfm_model* m) {
  bfm_model_info info{};
  check(bfm_model_get_info(m, &info));
  return info;
}

double accuracy(const bfm_model* m, const bfm_dataset* ds) {
  double acc = 0.0;
  check(bfm_model_accuracy(m, ds, &acc));
  return acc;
}

const char* kind_name(std::int32_t k) {
  switch (k) {
    case BFM_MODEL_FM: return "fm";
    case BFM_MODEL_SEFM: return "sefm";
    default: return "binfm";
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Failure(BFM_ERR_IO, "cannot open " + path + " for writing");
  return out;
}

// Flags shared by train and bench.
struct TrainFlags {
  std::string model = "binfm";
  std::uint64_t bins = 30;
  std::string strategy = "quantile";
  std::uint64_t rank = 16;
  double eta = 0.1;
  double lambda1 = 1e-4;
  double lambda2 = 1e-4;
  double eps = 1e-8;
  std::string loss = "logistic";
  std::string optimizer = "adagrad";
  std::uint64_t epochs = 20;
  double tol = 1e-4;
  bool no_scaling = false;
  std::uint64_t seed = 1;
  std::uint64_t jobs = 1;

  void add_to(CLI::App& app, bool with_model) {
    if (with_model)
      app.add_option("--model", model, "Model kind")->check(CLI::IsMember({"fm", "sefm", "binfm"}))->capture_default_str();
    app.add_option("--bins", bins, "Bins per feature (sefm, binfm)")->check(CLI::Range(2, 1 << 20))->capture_default_str();
    app.add_option("--bin-strategy", strategy, "Bin boundaries")
        ->check(CLI::IsMember({"equal", "quantile"}))
        ->capture_default_str();
    app.add_option("--rank", rank, "Factorization rank m")->check(CLI::Range(1, 1 << 16))->capture_default_str();
    app.add_option("--eta", eta, "Learning rate")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--lambda1", lambda1, "L2 weight on w")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--lambda2", lambda2, "L2 weight on V")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--eps", eps, "Adagrad stabilizer")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--loss", loss, "Loss function")
        ->check(CLI::IsMember({"logistic", "hinge", "squared"}))
        ->capture_default_str();
    app.add_option("--optimizer", optimizer, "Proxy optimizer (binfm)")
        ->check(CLI::IsMember({"adagrad", "sgd"}))
        ->capture_default_str();
    app.add_option("--epochs", epochs, "Maximum passes over the data")->check(CLI::Range(1, 1 << 24))->capture_default_str();
    app.add_option("--tol", tol, "Early-stop relative loss improvement (0 = off)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_flag("--no-scaling", no_scaling, "Fix alpha = beta = 1 (binfm)");
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
  }

  [[nodiscard]] bfm_train_options options() const {
    bfm_train_options o;
    bfm_train_options_default(&o);
    o.model_kind = model == "fm" ? BFM_MODEL_FM : model == "sefm" ? BFM_MODEL_SEFM : BFM_MODEL_BINFM;
    o.bins = bins;
    o.bin_strategy = strategy == "equal" ? BFM_BINS_EQUAL_WIDTH : BFM_BINS_QUANTILE;
    o.rank = rank;
    o.eta = eta;
    o.lambda1 = lambda1;
    o.lambda2 = lambda2;
    o.eps = eps;
    o.loss = loss == "logistic" ? BFM_LOSS_LOGISTIC : loss == "hinge" ? BFM_LOSS_HINGE : BFM_LOSS_SQUARED;
    o.optimizer = optimizer == "sgd" ? BFM_OPT_SGD : BFM_OPT_ADAGRAD;
    o.epochs = epochs;
    o.tol = tol;
    o.use_scaling = no_scaling ? 0 : 1;
    o.seed = seed;
    o.jobs = jobs;
    return o;
  }
};

// ---- gen-synth --------------------------------------------------------------

struct GenFlags {
  std::string kind = "circles";
  std::uint64_t n = 5000;
  double noise = 0.1;
  std::uint64_t seed = 1;
  std::string out;
};

int run_gen(const GenFlags& f) {
  auto ds = generate(f.kind, f.n, f.noise, f.seed);
  check(bfm_dataset_save_libsvm(ds.get(), f.out.c_str()));
  std::cout << "wrote " << bfm_dataset_size(ds.get()) << " samples to " << f.out << '\n';
  return kExitOk;
}

// ---- train ------------------------------------------------------------------

struct TrainCmd {
  std::string data;
  std::uint64_t dim = 0;
  std::string out;
  std::string log;
  std::uint64_t cv = 0;
  TrainFlags flags;
};

// K-fold search over rank {16,32,64,128}, bins {10,...,50} and a shared
// lambda in {1e-2,...,1e2}; returns the best options.
bfm_train_options cross_validate(const bfm_dataset* ds, bfm_train_options base, std::uint64_t k) {
  const std::vector<std::uint64_t> ranks = {16, 32, 64, 128};
  std::vector<std::uint64_t> bins = {10, 20, 30, 40, 50};
  if (base.model_kind == BFM_MODEL_FM) bins = {base.bins};
  const std::vector<double> lambdas = {1e-2, 1e-1, 1.0, 1e1, 1e2};

  std::vector<std::pair<DatasetPtr, DatasetPtr>> folds;
  for (std::uint64_t fold = 0; fold < k; ++fold) {
    bfm_dataset* a = nullptr;
    bfm_dataset* b = nullptr;
    check(bfm_dataset_kfold(ds, k, fold, base.seed, &a, &b));
    folds.emplace_back(DatasetPtr(a), DatasetPtr(b));
  }

  bfm_train_options best = base;
  double best_acc = -1.0;
  for (auto r : ranks) {
    for (auto b : bins) {
      for (double l : lambdas) {
        bfm_train_options o = base;
        o.rank = r;
        o.bins = b;
        o.lambda1 = o.lambda2 = l;
        double acc = 0.0;
        for (auto& [tr, held] : folds) {
          auto m = train(tr.get(), o);
          acc += accuracy(m.get(), held.get());
        }
        acc /= static_cast<double>(k);
        std::cerr << "cv rank=" << r << " bins=" << b << " lambda=" << l << " acc=" << acc << '\n';
        if (acc > best_acc) {
          best_acc = acc;
          best = o;
        }
      }
    }
  }
  std::cout << "cv selected rank=" << best.rank << " bins=" << best.bins << " lambda=" << best.lambda1
            << " (cv accuracy " << best_acc << ")\n";
  return best;
}

int run_train(const TrainCmd& c) {
  auto ds = load_data(c.data, c.dim);
  bfm_train_options opts = c.flags.options();
  if (c.cv > 0) opts = cross_validate(ds.get(), opts, c.cv);
  auto model = train(ds.get(), opts);
  const auto info = info_of(model.get());
  check(bfm_model_save(model.get(), c.out.c_str()));

  std::vector<std::vector<double>> histories(info.heads);
  for (std::uint64_t h = 0; h < info.heads; ++h) {
    std::uint64_t len = 0;
    check(bfm_model_loss_history(model.get(), h, nullptr, 0, &len));
    histories[h].resize(len);
    check(bfm_model_loss_history(model.get(), h, histories[h].data(), len, &len));
  }
  if (!c.log.empty()) {
    auto out = open_out(c.log);
    out << std::setprecision(10);
    const bool multi = info.heads > 1;
    out << (multi ? "head,epoch,loss\n" : "epoch,loss\n");
    for (std::uint64_t h = 0; h < info.heads; ++h)
      for (std::size_t e = 1; e < histories[h].size(); ++e) {
        if (multi) out << h << ',';
        out << e << ',' << histories[h][e] << '\n';
      }
  }
  std::cout << "trained " << kind_name(info.kind) << " model: d=" << info.input_dim << " bins=" << info.bins
            << " rank=" << info.rank << " classes=" << info.classes << " heads=" << info.heads << '\n';
  for (std::uint64_t h = 0; h < info.heads; ++h) {
    const auto& hist = histories[h];
    if (hist.empty()) continue;
    std::cout << "head " << h << ": " << hist.size() - 1 << " epochs, loss " << hist.front() << " -> " << hist.back()
              << '\n';
  }
  std::cout << "training accuracy " << accuracy(model.get(), ds.get()) << '\n';
  std::cout << "model written to " << c.out << " (" << info.file_bytes << " bytes)\n";
  return kExitOk;
}

// ---- predict / eval ---------------------------------------------------------

struct PredictCmd {
  std::string model;
  std::string data;
  std::string out;
  std::uint64_t dim = 0;
};

int run_predict(const PredictCmd& c) {
  auto model = load_model(c.model);
  auto ds = load_data(c.data, c.dim);
  std::vector<double> labels(bfm_dataset_size(ds.get()));
  check(bfm_model_predict(model.get(), ds.get(), labels.data()));
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!c.out.empty()) {
    file = open_out(c.out);
    os = &file;
  }
  *os << std::setprecision(17);
  for (double l : labels) *os << l << '\n';
  return kExitOk;
}

void print_memory(std::uint64_t d, std::uint64_t b, std::uint64_t m, std::ostream& os) {
  bfm_memory_row rows[BFM_MEMORY_ROWS];
  check(bfm_memory_report(d, b, m, rows));
  os << "| method | bits | vs FM |\n|---|---:|---:|\n";
  for (const auto& r : rows) {
    os << "| " << r.method << " | " << std::fixed << std::setprecision(0) << r.bits << " | " << std::setprecision(4)
       << r.ratio_to_fm << "x |\n";
    os.unsetf(std::ios::floatfield);
  }
}

int run_eval(const PredictCmd& c) {
  auto model = load_model(c.model);
  auto ds = load_data(c.data, c.dim);
  const auto info = info_of(model.get());
  const auto n = bfm_dataset_size(ds.get());
  std::vector<double> predicted(n);
  const auto t0 = std::chrono::steady_clock::now();
  check(bfm_model_predict(model.get(), ds.get(), predicted.data()));
  const double total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::size_t correct = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    double truth = 0.0;
    check(bfm_dataset_label(ds.get(), i, &truth));
    if (truth == predicted[i]) ++correct;
  }
  std::cout << "model: " << kind_name(info.kind) << " d=" << info.input_dim << " bins=" << info.bins
            << " rank=" << info.rank << " heads=" << info.heads << '\n';
  std::cout << "accuracy: " << std::setprecision(6) << static_cast<double>(correct) / static_cast<double>(n) << " ("
            << correct << "/" << n << ")\n";
  std::cout << "prediction time: total " << total_ms << " ms, per sample " << 1e3 * total_ms / static_cast<double>(n)
            << " us\n";
  std::cout << "model coefficients: " << info.parameter_bits << " bits; file size " << info.file_bytes << " bytes\n";
  std::cout << "memory (per head, d=" << info.input_dim << " b=" << (info.bins ? info.bins : 1) << " m=" << info.rank
            << "):\n";
  print_memory(info.input_dim, info.bins ? info.bins : 1, info.rank, std::cout);
  return kExitOk;
}

// ---- boundary ---------------------------------------------------------------

struct BoundaryCmd {
  std::string model;
  std::vector<double> grid;
  std::string out;
};

int run_boundary(const BoundaryCmd& c) {
  if (c.grid.size() != 5) usage_error("--grid expects xmin,xmax,ymin,ymax,steps");
  const double steps_d = c.grid[4];
  if (!(steps_d >= 1.0) || steps_d != std::floor(steps_d) || steps_d > 1e5) usage_error("grid steps must be a positive integer");
  const auto steps = static_cast<std::size_t>(steps_d);
  for (int i = 0; i < 4; ++i)
    if (!std::isfinite(c.grid[i])) usage_error("grid bounds must be finite");
  auto model = load_model(c.model);
  const auto info = info_of(model.get());
  if (info.input_dim != 2)
    throw Failure(BFM_ERR_DATA, "decision boundaries need a 2-d model, this one has d=" + std::to_string(info.input_dim));

  auto out = open_out(c.out);
  out << std::setprecision(10) << "x,y,score,label\n";
  auto coord = [&](double lo, double hi, std::size_t i) {
    return steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  };
  for (std::size_t iy = 0; iy < steps; ++iy) {
    for (std::size_t ix = 0; ix < steps; ++ix) {
      const double x[2] = {coord(c.grid[0], c.grid[1], ix), coord(c.grid[2], c.grid[3], iy)};
      double score = 0.0;
      double label = 0.0;
      check(bfm_model_score_dense(model.get(), x, 2, &score, &label));
      out << x[0] << ',' << x[1] << ',' << score << ',' << label << '\n';
    }
  }
  std::cout << "wrote " << steps * steps << " grid points to " << c.out << '\n';
  return kExitOk;
}

// ---- bench ------------------------------------------------------------------

struct BenchCmd {
  std::vector<std::string> data;
  std::uint64_t repeats = 10;
  double train_frac = 0.7;
  std::uint64_t n = 5000;
  double noise = 0.1;
  std::string format = "md";
  std::string out;
  TrainFlags flags;
};

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

Stats stats(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  s.std = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
  return s;
}

int run_bench(const BenchCmd& c) {
  const std::vector<std::string> methods = {"fm", "sefm", "binfm"};
  struct Row {
    std::string dataset, method;
    std::uint64_t n, d, classes;
    Stats acc, predict_ms;
    double memory_ratio;
  };
  std::vector<Row> rows;

  for (const std::string& name : c.data) {
    const bool synthetic = name == "circles" || name == "moons" || name == "hetero";
    auto ds = synthetic ? generate(name, c.n, c.noise, c.flags.seed) : load_data(name, 0);
    const auto n = bfm_dataset_size(ds.get());
    const auto d = bfm_dataset_dim(ds.get());
    const auto classes = bfm_dataset_classes(ds.get());
    bfm_memory_row mem[BFM_MEMORY_ROWS];
    check(bfm_memory_report(d, c.flags.bins, c.flags.rank, mem));

    for (const std::string& method : methods) {
      TrainFlags f = c.flags;
      f.model = method;
      f.jobs = 1;
      std::vector<double> accs(c.repeats), times(c.repeats);
      std::vector<std::string> errors(c.repeats);
      std::vector<bfm_status> codes(c.repeats, BFM_OK);
      auto one = [&](std::uint64_t r) {
        try {
          auto [tr, te] = split(ds.get(), c.train_frac, r + 1);
          bfm_train_options o = f.options();
          o.seed = c.flags.seed + r;
          auto model = train(tr.get(), o);
          std::vector<double> pred(bfm_dataset_size(te.get()));
          const auto t0 = std::chrono::steady_clock::now();
          check(bfm_model_predict(model.get(), te.get(), pred.data()));
          times[r] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
          accs[r] = accuracy(model.get(), te.get());
        } catch (const Failure& e) {
          codes[r] = e.status;
          errors[r] = e.what();
        }
      };
      const std::uint64_t jobs = std::min<std::uint64_t>(c.flags.jobs, c.repeats);
      if (jobs <= 1) {
        for (std::uint64_t r = 0; r < c.repeats; ++r) one(r);
      } else {
        std::vector<std::jthread> workers;
        for (std::uint64_t t = 0; t < jobs; ++t)
          workers.emplace_back([&, t] {
            for (std::uint64_t r = t; r < c.repeats; r += jobs) one(r);
          });
      }
      for (std::uint64_t r = 0; r < c.repeats; ++r)
        if (codes[r] != BFM_OK) throw Failure(codes[r], name + "/" + method + ": " + errors[r]);
      const double ratio = method == "fm" ? mem[0].ratio_to_fm : method == "sefm" ? mem[1].ratio_to_fm : mem[3].ratio_to_fm;
      rows.push_back({name, method, n, d, classes, stats(accs), stats(times), ratio});
      std::cerr << name << " " << method << " done\n";
    }
  }

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!c.out.empty()) {
    file = open_out(c.out);
    os = &file;
  }
  if (c.format == "csv") {
    *os << "dataset,n,d,classes,method,acc_mean,acc_std,predict_ms_mean,predict_ms_std,memory_vs_fm\n";
    *os << std::setprecision(8);
    for (const Row& r : rows)
      *os << r.dataset << ',' << r.n << ',' << r.d << ',' << r.classes << ',' << r.method << ',' << r.acc.mean << ','
          << r.acc.std << ',' << r.predict_ms.mean << ',' << r.predict_ms.std << ',' << r.memory_ratio << '\n';
  } else {
    *os << "| dataset (n/d/classes) | method | accuracy (%) | prediction time (ms) | memory vs FM |\n";
    *os << "|---|---|---:|---:|---:|\n";
    for (const Row& r : rows) {
      std::ostringstream line;
      line << std::fixed << "| " << r.dataset << " (" << r.n << "/" << r.d << "/" << r.classes << ") | " << r.method
           << " | " << std::setprecision(2) << 100.0 * r.acc.mean << " ± " << 100.0 * r.acc.std << " | "
           << std::setprecision(3) << r.predict_ms.mean << " | " << std::setprecision(2) << r.memory_ratio << "x |";
      *os << line.str() << '\n';
    }
  }
  return kExitOk;
}

// ---- mem-report -------------------------------------------------------------

struct MemCmd {
  std::uint64_t d = 2;
  std::uint64_t b = 30;
  std::uint64_t m = 16;
  std::string format = "md";
};

int run_mem(const MemCmd& c) {
  if (c.format == "csv") {
    bfm_memory_row rows[BFM_MEMORY_ROWS];
    check(bfm_memory_report(c.d, c.b, c.m, rows));
    std::cout << "method,bits,ratio_to_fm\n" << std::setprecision(10);
    for (const auto& r : rows) std::cout << r.method << ',' << r.bits << ',' << r.ratio_to_fm << '\n';
  } else {
    print_memory(c.d, c.b, c.m, std::cout);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binarized factorization machines: train, evaluate and inspect 1-bit FM classifiers"};
  app.require_subcommand(1);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-synth", "Generate a synthetic 2-class dataset in libsvm format");
  gen_cmd->add_option("--kind", gen.kind, "Dataset shape")
      ->check(CLI::IsMember({"circles", "moons", "hetero"}))
      ->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Number of samples (even)")->check(CLI::Range(2, 1 << 28))->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Noise level")->check(CLI::NonNegativeNumber)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output libsvm file")->required();

  TrainCmd tr;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write it plus a per-epoch loss log");
  train_cmd->add_option("--data", tr.data, "Training data (libsvm)")->required();
  train_cmd->add_option("--dim", tr.dim, "Minimum input dimensionality");
  train_cmd->add_option("--out", tr.out, "Model file to write")->required();
  train_cmd->add_option("--log", tr.log, "CSV file for the per-epoch training loss");
  train_cmd->add_option("--cv", tr.cv, "Select rank/bins/lambda by k-fold cross-validation (0 = off)")
      ->check(CLI::Range(0, 100));
  tr.flags.add_to(*train_cmd, true);

  PredictCmd pr;
  auto* predict_cmd = app.add_subcommand("predict", "Write one predicted label per input line");
  predict_cmd->add_option("--model", pr.model, "Model file")->required();
  predict_cmd->add_option("--data", pr.data, "Input data (libsvm)")->required();
  predict_cmd->add_option("--out", pr.out, "Output file (default stdout)");
  predict_cmd->add_option("--dim", pr.dim, "Minimum input dimensionality");

  PredictCmd ev;
  auto* eval_cmd = app.add_subcommand("eval", "Accuracy, prediction time and memory of a model on labeled data");
  eval_cmd->add_option("--model", ev.model, "Model file")->required();
  eval_cmd->add_option("--data", ev.data, "Labeled data (libsvm)")->required();
  eval_cmd->add_option("--dim", ev.dim, "Minimum input dimensionality");

  BoundaryCmd bd;
  auto* boundary_cmd = app.add_subcommand("boundary", "Score a 2-d lattice and write x,y,score,label CSV");
  boundary_cmd->add_option("--model", bd.model, "Model file")->required();
  boundary_cmd->add_option("--grid", bd.grid, "xmin,xmax,ymin,ymax,steps")->required()->delimiter(',')->expected(5);
  boundary_cmd->add_option("--out", bd.out, "Output CSV")->required();

  BenchCmd be;
  auto* bench_cmd = app.add_subcommand("bench", "Repeated-split comparison of fm, sefm and binfm");
  bench_cmd->add_option("--data", be.data, "Datasets: circles, moons, hetero or libsvm paths")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--repeats", be.repeats, "Random splits per dataset")->check(CLI::Range(1, 1000))->capture_default_str();
  bench_cmd->add_option("--train-frac", be.train_frac, "Training fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  bench_cmd->add_option("--n", be.n, "Samples for synthetic datasets")->check(CLI::Range(2, 1 << 28))->capture_default_str();
  bench_cmd->add_option("--noise", be.noise, "Noise for synthetic datasets")->check(CLI::NonNegativeNumber)->capture_default_str();
  bench_cmd->add_option("--format", be.format, "Output format")->check(CLI::IsMember({"md", "csv"}))->capture_default_str();
  bench_cmd->add_option("--out", be.out, "Output file (default stdout)");
  be.flags.add_to(*bench_cmd, false);

  MemCmd mem;
  auto* mem_cmd = app.add_subcommand("mem-report", "Parameter memory of FM, SEFM, DFM and binarized FM");
  mem_cmd->add_option("--d", mem.d, "Original feature count")->check(CLI::Range(1, 1 << 30))->capture_default_str();
  mem_cmd->add_option("--b", mem.b, "Bins per feature")->check(CLI::Range(1, 1 << 20))->capture_default_str();
  mem_cmd->add_option("--m", mem.m, "Rank")->check(CLI::Range(1, 1 << 20))->capture_default_str();
  mem_cmd->add_option("--format", mem.format, "Output format")->check(CLI::IsMember({"md", "csv"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*train_cmd) return run_train(tr);
    if (*predict_cmd) return run_predict(pr);
    if (*eval_cmd) return run_eval(ev);
    if (*boundary_cmd) return run_boundary(bd);
    if (*bench_cmd) {
      if (!(be.train_frac > 0.0 && be.train_frac < 1.0)) usage_error("--train-frac must lie in (0, 1)");
      return run_bench(be);
    }
    if (*mem_cmd) return run_mem(mem);
  } catch (const Failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.status);
  }
  return kExitUsage;
}
