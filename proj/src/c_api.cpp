#include "binfm/binfm_c.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <string_view>
#include <vector>

#include "binfm/classifier.hpp"
#include "binfm/dataio.hpp"
#include "binfm/error.hpp"
#include "binfm/ovr.hpp"
#include "binfm/packed.hpp"

struct bfm_dataset {
  binfm::Dataset ds;
};

struct bfm_model {
  binfm::Classifier clf;
};

namespace {

thread_local std::string g_last_error;

bfm_status to_status(binfm::ErrorKind kind) {
  switch (kind) {
    case binfm::ErrorKind::usage: return BFM_ERR_USAGE;
    case binfm::ErrorKind::data: return BFM_ERR_DATA;
    case binfm::ErrorKind::divergence: return BFM_ERR_DIVERGENCE;
    case binfm::ErrorKind::io: return BFM_ERR_IO;
    case binfm::ErrorKind::format: return BFM_ERR_FORMAT;
  }
  return BFM_ERR_INTERNAL;
}

bfm_status fail(bfm_status status, std::string msg) {
  g_last_error = std::move(msg);
  return status;
}

template <typename Fn>
bfm_status guarded(Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    fn();
    return BFM_OK;
  } catch (const binfm::Error& e) {
    return fail(to_status(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BFM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BFM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BFM_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw binfm::Error(binfm::ErrorKind::usage, what);
}

bfm_dataset* wrap(binfm::Dataset ds) { return new bfm_dataset{std::move(ds)}; }

binfm::ClassifierOptions convert(const bfm_train_options& o) {
  require(o.model_kind >= 0 && o.model_kind <= 2, "unknown model kind");
  require(o.bin_strategy >= 0 && o.bin_strategy <= 1, "unknown bin strategy");
  require(o.loss >= 0 && o.loss <= 2, "unknown loss");
  require(o.optimizer >= 0 && o.optimizer <= 1, "unknown optimizer");
  binfm::ClassifierOptions c;
  c.kind = static_cast<binfm::ModelKind>(o.model_kind);
  c.bins = o.bins;
  c.strategy = static_cast<binfm::BinStrategy>(o.bin_strategy);
  c.train.rank = o.rank;
  c.train.eta = o.eta;
  c.train.lambda1 = o.lambda1;
  c.train.lambda2 = o.lambda2;
  c.train.eps = o.eps;
  c.train.loss = static_cast<binfm::LossKind>(o.loss);
  c.train.optimizer = static_cast<binfm::Optimizer>(o.optimizer);
  c.train.epochs = o.epochs;
  c.train.tol = o.tol;
  c.train.use_scaling = o.use_scaling != 0;
  c.train.seed = o.seed;
  c.jobs = o.jobs;
  return c;
}

}  // namespace

extern "C" {

const char* bfm_last_error(void) { return g_last_error.c_str(); }

const char* bfm_version(void) { return "1.0.0"; }

bfm_status bfm_dataset_load_libsvm(const char* path, uint64_t min_dim, bfm_dataset** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto ds = binfm::load_libsvm(path, min_dim);
    binfm::validate(ds);
    *out = wrap(std::move(ds));
  });
}

bfm_status bfm_dataset_save_libsvm(const bfm_dataset* ds, const char* path) {
  return guarded([&] {
    require(ds != nullptr && path != nullptr, "null argument");
    binfm::save_libsvm(ds->ds, path);
  });
}

bfm_status bfm_dataset_generate(const char* kind, uint64_t n, double noise, uint64_t seed, bfm_dataset** out) {
  return guarded([&] {
    require(kind != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    const std::string_view k(kind);
    if (k == "circles") {
      *out = wrap(binfm::gen_circles(n, noise, seed));
    } else if (k == "moons") {
      *out = wrap(binfm::gen_moons(n, noise, seed));
    } else if (k == "hetero") {
      *out = wrap(binfm::gen_heterogeneous(n, noise, seed));
    } else {
      throw binfm::Error(binfm::ErrorKind::usage, "unknown synthetic dataset '" + std::string(k) + "'");
    }
  });
}

bfm_status bfm_dataset_split(const bfm_dataset* ds, double train_frac, uint64_t seed, bfm_dataset** train,
                             bfm_dataset** test) {
  return guarded([&] {
    require(ds != nullptr && train != nullptr && test != nullptr, "null argument");
    *train = *test = nullptr;
    auto [a, b] = binfm::split(ds->ds, train_frac, seed);
    auto ta = std::make_unique<bfm_dataset>(bfm_dataset{std::move(a)});
    *test = wrap(std::move(b));
    *train = ta.release();
  });
}

bfm_status bfm_dataset_kfold(const bfm_dataset* ds, uint64_t k, uint64_t fold, uint64_t seed, bfm_dataset** train,
                             bfm_dataset** held_out) {
  return guarded([&] {
    require(ds != nullptr && train != nullptr && held_out != nullptr, "null argument");
    *train = *held_out = nullptr;
    auto [a, b] = binfm::kfold(ds->ds, k, fold, seed);
    auto ta = std::make_unique<bfm_dataset>(bfm_dataset{std::move(a)});
    *held_out = wrap(std::move(b));
    *train = ta.release();
  });
}

uint64_t bfm_dataset_size(const bfm_dataset* ds) { return ds ? ds->ds.size() : 0; }
uint64_t bfm_dataset_dim(const bfm_dataset* ds) { return ds ? ds->ds.dim : 0; }
uint64_t bfm_dataset_classes(const bfm_dataset* ds) { return ds ? ds->ds.classes : 0; }

bfm_status bfm_dataset_label(const bfm_dataset* ds, uint64_t i, double* label) {
  return guarded([&] {
    require(ds != nullptr && label != nullptr, "null argument");
    require(i < ds->ds.size(), "sample index out of range");
    *label = ds->ds.label_values[static_cast<std::size_t>(ds->ds.samples[i].label)];
  });
}

void bfm_dataset_free(bfm_dataset* ds) { delete ds; }

void bfm_train_options_default(bfm_train_options* opts) {
  if (opts == nullptr) return;
  const binfm::ClassifierOptions d;
  opts->model_kind = static_cast<int32_t>(d.kind);
  opts->bins = d.bins;
  opts->bin_strategy = static_cast<int32_t>(d.strategy);
  opts->rank = d.train.rank;
  opts->eta = d.train.eta;
  opts->lambda1 = d.train.lambda1;
  opts->lambda2 = d.train.lambda2;
  opts->eps = d.train.eps;
  opts->loss = static_cast<int32_t>(d.train.loss);
  opts->optimizer = static_cast<int32_t>(d.train.optimizer);
  opts->epochs = d.train.epochs;
  opts->tol = d.train.tol;
  opts->use_scaling = d.train.use_scaling ? 1 : 0;
  opts->seed = d.train.seed;
  opts->jobs = d.jobs;
}

bfm_status bfm_train(const bfm_dataset* train, const bfm_train_options* opts, bfm_model** out) {
  return guarded([&] {
    require(train != nullptr && opts != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new bfm_model{binfm::Classifier::fit(train->ds, convert(*opts))};
  });
}

bfm_status bfm_model_loss_history(const bfm_model* model, uint64_t head, double* out, uint64_t cap, uint64_t* len) {
  return guarded([&] {
    require(model != nullptr && len != nullptr, "null argument");
    const auto& hist = model->clf.loss_histories();
    if (hist.empty()) {
      *len = 0;
      return;
    }
    require(head < hist.size(), "head index out of range");
    const auto& h = hist[head];
    *len = h.size();
    if (out != nullptr) std::copy_n(h.begin(), std::min<std::size_t>(h.size(), cap), out);
  });
}

bfm_status bfm_model_save(const bfm_model* model, const char* path) {
  return guarded([&] {
    require(model != nullptr && path != nullptr, "null argument");
    model->clf.save(path);
  });
}

bfm_status bfm_model_load(const char* path, bfm_model** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new bfm_model{binfm::Classifier::load(path)};
  });
}

bfm_status bfm_model_get_info(const bfm_model* model, bfm_model_info* info) {
  return guarded([&] {
    require(model != nullptr && info != nullptr, "null argument");
    const auto& c = model->clf;
    info->kind = static_cast<int32_t>(c.kind());
    info->input_dim = c.input_dim();
    info->bins = c.bins();
    info->rank = c.rank();
    info->classes = c.classes();
    info->heads = c.head_count();
    info->parameter_bits = c.parameter_bits();
    info->file_bytes = c.serialized_bytes();
  });
}

void bfm_model_free(bfm_model* model) { delete model; }

bfm_status bfm_model_predict(const bfm_model* model, const bfm_dataset* ds, double* out) {
  return guarded([&] {
    require(model != nullptr && ds != nullptr && out != nullptr, "null argument");
    model->clf.check_compatible(ds->ds);
    const auto labels = model->clf.label_values();
    for (std::size_t i = 0; i < ds->ds.size(); ++i)
      out[i] = labels[static_cast<std::size_t>(model->clf.predict(ds->ds.samples[i].features))];
  });
}

bfm_status bfm_model_accuracy(const bfm_model* model, const bfm_dataset* ds, double* accuracy) {
  return guarded([&] {
    require(model != nullptr && ds != nullptr && accuracy != nullptr, "null argument");
    *accuracy = model->clf.accuracy(ds->ds);
  });
}

bfm_status bfm_model_score_dense(const bfm_model* model, const double* x, uint64_t dim, double* score,
                                 double* label) {
  return guarded([&] {
    require(model != nullptr && x != nullptr && score != nullptr && label != nullptr, "null argument");
    require(dim <= model->clf.input_dim(), "point has more features than the model");
    std::vector<binfm::Feature> features;
    for (std::uint32_t j = 0; j < dim; ++j) {
      if (!std::isfinite(x[j])) throw binfm::Error(binfm::ErrorKind::data, "non-finite coordinate");
      if (x[j] != 0.0) features.push_back({j, x[j]});
    }
    const auto scores = model->clf.head_scores(features);
    const std::int32_t cls = binfm::ovr_decide(scores);
    *score = scores.size() == 1 ? scores[0] : scores[static_cast<std::size_t>(cls)];
    *label = model->clf.label_values()[static_cast<std::size_t>(cls)];
  });
}

bfm_status bfm_memory_report(uint64_t d, uint64_t b, uint64_t m, bfm_memory_row* rows) {
  return guarded([&] {
    require(rows != nullptr, "null argument");
    static constexpr const char* kNames[BFM_MEMORY_ROWS] = {"FM", "SEFM", "DFM", "Binarized FM"};
    const auto report = binfm::memory_report(d, b, m);
    for (std::size_t i = 0; i < BFM_MEMORY_ROWS; ++i) rows[i] = {kNames[i], report[i].bits, report[i].ratio_to_fm};
  });
}

}  // extern "C"
