#include "binfm/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "binfm/error.hpp"

namespace binfm {

namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& msg) {
  throw Error(ErrorKind::data, "libsvm line " + std::to_string(line_no) + ": " + msg);
}

double parse_double(std::string_view tok, std::size_t line_no) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) parse_error(line_no, "bad number '" + std::string(tok) + "'");
  if (!std::isfinite(v)) parse_error(line_no, "non-finite value '" + std::string(tok) + "'");
  return v;
}

std::uint64_t parse_index(std::string_view tok, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) parse_error(line_no, "bad index '" + std::string(tok) + "'");
  if (v == 0) parse_error(line_no, "indices are 1-based");
  if (v > std::numeric_limits<std::uint32_t>::max()) parse_error(line_no, "index too large");
  return v;
}

// Shuffles generated 2-d points into a two-class dataset.
Dataset finish_synthetic(std::vector<Sample> samples, std::mt19937_64& rng) {
  std::shuffle(samples.begin(), samples.end(), rng);
  Dataset ds;
  ds.samples = std::move(samples);
  ds.dim = 2;
  ds.classes = 2;
  ds.label_values = {0.0, 1.0};
  return ds;
}

void check_synthetic_args(std::size_t n, double noise) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorKind::usage, "synthetic sample count must be even and >= 2");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw Error(ErrorKind::usage, "noise must be finite and >= 0");
}

}  // namespace

void validate(const Dataset& ds) {
  if (ds.dim < 1) throw Error(ErrorKind::data, "dataset dimensionality must be >= 1");
  if (ds.classes < 1) throw Error(ErrorKind::data, "dataset has no classes");
  if (ds.label_values.size() != ds.classes) throw Error(ErrorKind::data, "label table does not match class count");
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const Sample& s = ds.samples[i];
    if (s.label < 0 || static_cast<std::size_t>(s.label) >= ds.classes)
      throw Error(ErrorKind::data, "sample " + std::to_string(i) + ": label out of range");
    for (std::size_t k = 0; k < s.features.size(); ++k) {
      const Feature& f = s.features[k];
      if (f.index >= ds.dim) throw Error(ErrorKind::data, "sample " + std::to_string(i) + ": index beyond dimensionality");
      if (k > 0 && f.index <= s.features[k - 1].index)
        throw Error(ErrorKind::data, "sample " + std::to_string(i) + ": indices not strictly increasing");
      if (!std::isfinite(f.value)) throw Error(ErrorKind::data, "sample " + std::to_string(i) + ": non-finite value");
    }
  }
}

Dataset parse_libsvm(std::istream& in, std::size_t min_dim) {
  std::vector<Sample> samples;
  std::vector<double> raw_labels;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    raw_labels.push_back(parse_double(tok, line_no));
    Sample s;
    while (tokens >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) parse_error(line_no, "expected <index>:<value>, got '" + tok + "'");
      std::string_view view(tok);
      const auto idx = parse_index(view.substr(0, colon), line_no);
      const double val = parse_double(view.substr(colon + 1), line_no);
      const auto zero_based = static_cast<std::uint32_t>(idx - 1);
      if (!s.features.empty() && zero_based <= s.features.back().index)
        parse_error(line_no, "indices must be strictly increasing");
      s.features.push_back({zero_based, val});
      max_index = std::max<std::size_t>(max_index, idx);
    }
    samples.push_back(std::move(s));
  }
  if (in.bad()) throw Error(ErrorKind::io, "read error while parsing libsvm data");
  if (samples.empty()) throw Error(ErrorKind::data, "libsvm input contains no samples");

  std::vector<double> values = raw_labels;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto it = std::lower_bound(values.begin(), values.end(), raw_labels[i]);
    samples[i].label = static_cast<std::int32_t>(it - values.begin());
  }

  Dataset ds;
  ds.samples = std::move(samples);
  ds.dim = std::max({max_index, min_dim, std::size_t{1}});
  ds.classes = values.size();
  ds.label_values = std::move(values);
  return ds;
}

Dataset load_libsvm(const std::filesystem::path& path, std::size_t min_dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return parse_libsvm(in, min_dim);
}

void write_libsvm(const Dataset& ds, std::ostream& out) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (const Sample& s : ds.samples) {
    out << ds.label_values.at(static_cast<std::size_t>(s.label));
    for (const Feature& f : s.features) out << ' ' << (f.index + 1) << ':' << f.value;
    out << '\n';
  }
  out.precision(old_precision);
}

void save_libsvm(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  write_libsvm(ds, out);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

Dataset gen_circles(std::size_t n, double noise, std::uint64_t seed, double outer, double inner) {
  check_synthetic_args(n, noise);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t half = n / 2;
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::int32_t label = 0; label < 2; ++label) {
    const double radius = label == 0 ? outer : inner;
    for (std::size_t i = 0; i < half; ++i) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(half);
      double x = radius * std::cos(t);
      double y = radius * std::sin(t);
      if (noise > 0.0) {
        x += noise * gauss(rng);
        y += noise * gauss(rng);
      }
      samples.push_back({{{0, x}, {1, y}}, label});
    }
  }
  return finish_synthetic(std::move(samples), rng);
}

Dataset gen_moons(std::size_t n, double noise, std::uint64_t seed) {
  check_synthetic_args(n, noise);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t half = n / 2;
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::int32_t label = 0; label < 2; ++label) {
    for (std::size_t i = 0; i < half; ++i) {
      const double t = half > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(half - 1) : 0.0;
      double x = label == 0 ? std::cos(t) : 1.0 - std::cos(t);
      double y = label == 0 ? std::sin(t) : 0.5 - std::sin(t);
      if (noise > 0.0) {
        x += noise * gauss(rng);
        y += noise * gauss(rng);
      }
      samples.push_back({{{0, x}, {1, y}}, label});
    }
  }
  return finish_synthetic(std::move(samples), rng);
}

Dataset gen_heterogeneous(std::size_t n, double noise, std::uint64_t seed) {
  check_synthetic_args(n, noise);
  if (noise > 0.5) throw Error(ErrorKind::usage, "label flip probability must be <= 0.5");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = unif(rng);
    const double x0 = 1000.0 * u;                        // wide uniform
    const double x1 = std::exp(1.5 * gauss(rng));        // log-normal, heavy right tail
    const double x2 = 0.01 * expo(rng);                  // tiny-scale exponential
    const double x3 = unif(rng) < 0.85 ? 0.0 : 1.0 + unif(rng);  // mostly zero
    const double x4 = -50.0 + 100.0 * unif(rng);         // signed uniform
    const double x5 = gauss(rng);                        // pure noise feature
    const double score = std::sin(2.0 * std::numbers::pi * u) + (std::log(x1) > 0.0 ? 0.6 : -0.6) +
                         (x2 > 0.01 ? 0.5 : -0.5) * (x4 > 0.0 ? 1.0 : -1.0) + (x3 > 0.0 ? 0.8 : 0.0) - 0.1;
    std::int32_t label = score > 0.0 ? 1 : 0;
    if (unif(rng) < noise) label = 1 - label;
    Sample s;
    const double values[] = {x0, x1, x2, x3, x4, x5};
    for (std::uint32_t j = 0; j < 6; ++j)
      if (values[j] != 0.0) s.features.push_back({j, values[j]});
    s.label = label;
    samples.push_back(std::move(s));
  }
  Dataset ds;
  ds.samples = std::move(samples);
  ds.dim = 6;
  ds.classes = 2;
  ds.label_values = {0.0, 1.0};
  return ds;
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices) {
  Dataset out;
  out.dim = ds.dim;
  out.classes = ds.classes;
  out.label_values = ds.label_values;
  out.samples.reserve(indices.size());
  for (std::size_t i : indices) out.samples.push_back(ds.samples.at(i));
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_frac, std::uint64_t seed) {
  if (ds.empty()) throw Error(ErrorKind::data, "cannot split an empty dataset");
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw Error(ErrorKind::usage, "train fraction must lie in (0, 1)");
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  // The small slack keeps e.g. 0.7 * 10 from rounding up to 8.
  const double exact = train_frac * static_cast<double>(ds.size());
  auto n_train = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  n_train = std::min(n_train, ds.size());
  std::span<const std::size_t> all(order);
  return {subset(ds, all.first(n_train)), subset(ds, all.subspan(n_train))};
}

std::pair<Dataset, Dataset> kfold(const Dataset& ds, std::size_t k, std::size_t fold, std::uint64_t seed) {
  if (k < 2 || fold >= k) throw Error(ErrorKind::usage, "k-fold needs k >= 2 and fold < k");
  if (ds.size() < k) throw Error(ErrorKind::data, "fewer samples than folds");
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> held_idx;
  for (std::size_t i = 0; i < order.size(); ++i) (i % k == fold ? held_idx : train_idx).push_back(order[i]);
  return {subset(ds, train_idx), subset(ds, held_idx)};
}

}  // namespace binfm
