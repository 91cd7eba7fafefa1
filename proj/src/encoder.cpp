#include "binfm/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "binfm/error.hpp"

namespace binfm {

BinStrategy parse_bin_strategy(std::string_view name) {
  if (name == "equal" || name == "equal-width" || name == "equal_width") return BinStrategy::equal_width;
  if (name == "quantile") return BinStrategy::quantile;
  throw Error(ErrorKind::usage, "unknown bin strategy '" + std::string(name) + "'");
}

std::string_view to_string(BinStrategy s) noexcept {
  return s == BinStrategy::equal_width ? "equal" : "quantile";
}

std::size_t BinningSpec::bin(std::size_t j, double v) const {
  const auto c = cuts_for(j);
  return static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), v) - c.begin());
}

void validate(const BinningSpec& spec) {
  if (spec.d < 1) throw Error(ErrorKind::format, "binning spec: d must be >= 1");
  if (spec.b < 2) throw Error(ErrorKind::format, "binning spec: b must be >= 2");
  if (spec.strategy != BinStrategy::equal_width && spec.strategy != BinStrategy::quantile)
    throw Error(ErrorKind::format, "binning spec: unknown strategy tag");
  if (spec.cuts.size() != spec.d * (spec.b - 1)) throw Error(ErrorKind::format, "binning spec: wrong number of cut points");
  for (std::size_t j = 0; j < spec.d; ++j) {
    const auto c = spec.cuts_for(j);
    for (double v : c)
      if (!std::isfinite(v)) throw Error(ErrorKind::format, "binning spec: non-finite cut point");
    if (!std::is_sorted(c.begin(), c.end())) throw Error(ErrorKind::format, "binning spec: cut points not sorted");
  }
}

BinningSpec fit_bins(const Dataset& ds, std::size_t b, BinStrategy strategy) {
  if (b < 2) throw Error(ErrorKind::usage, "number of bins must be >= 2");
  if (ds.empty()) throw Error(ErrorKind::data, "cannot fit bins on an empty dataset");

  BinningSpec spec;
  spec.d = ds.dim;
  spec.b = b;
  spec.strategy = strategy;
  spec.cuts.reserve(spec.d * (b - 1));

  const std::size_t n = ds.size();
  std::vector<double> column(n);
  for (std::size_t j = 0; j < spec.d; ++j) {
    std::fill(column.begin(), column.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& fs = ds.samples[i].features;
      auto it = std::lower_bound(fs.begin(), fs.end(), j,
                                 [](const Feature& f, std::size_t idx) { return f.index < idx; });
      if (it != fs.end() && it->index == j) column[i] = it->value;
    }
    if (strategy == BinStrategy::equal_width) {
      const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
      const double width = *hi - *lo;
      for (std::size_t h = 1; h < b; ++h)
        spec.cuts.push_back(*lo + width * static_cast<double>(h) / static_cast<double>(b));
    } else {
      std::sort(column.begin(), column.end());
      for (std::size_t h = 1; h < b; ++h) {
        const std::size_t pos = std::min(n - 1, h * n / b);
        spec.cuts.push_back(column[pos]);
      }
    }
  }
  return spec;
}

void encode_into(const BinningSpec& spec, std::span<const Feature> features, std::span<std::uint32_t> out) {
  if (out.size() != spec.d) throw Error(ErrorKind::usage, "encode: output span must hold d indices");
  auto it = features.begin();
  for (std::size_t j = 0; j < spec.d; ++j) {
    double v = 0.0;
    if (it != features.end() && it->index == j) {
      v = it->value;
      ++it;
    }
    if (!std::isfinite(v)) throw Error(ErrorKind::data, "encode: non-finite feature value");
    out[j] = static_cast<std::uint32_t>(j * spec.b + spec.bin(j, v));
  }
  if (it != features.end()) {
    throw Error(ErrorKind::data, "encode: feature index " + std::to_string(it->index) + " outside the fitted dimensionality " +
                                     std::to_string(spec.d));
  }
}

EncodedSample encode(const BinningSpec& spec, const Sample& s) {
  EncodedSample out;
  out.active.resize(spec.d);
  out.label = s.label;
  encode_into(spec, s.features, out.active);
  return out;
}

EncodedDataset encode_dataset(const BinningSpec& spec, const Dataset& ds) {
  EncodedDataset enc;
  enc.d = spec.d;
  enc.b = spec.b;
  enc.classes = ds.classes;
  enc.active.resize(ds.size() * spec.d);
  enc.labels.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    encode_into(spec, ds.samples[i].features, std::span<std::uint32_t>(enc.active).subspan(i * spec.d, spec.d));
    enc.labels.push_back(ds.samples[i].label);
  }
  return enc;
}

Dataset to_sparse(const EncodedDataset& enc) {
  Dataset ds;
  ds.dim = enc.p();
  ds.classes = enc.classes;
  for (std::size_t k = 0; k < enc.classes; ++k) ds.label_values.push_back(static_cast<double>(k));
  ds.samples.reserve(enc.size());
  for (std::size_t i = 0; i < enc.size(); ++i) {
    Sample s;
    s.label = enc.labels[i];
    s.features.reserve(enc.d);
    for (std::uint32_t idx : enc.row(i)) s.features.push_back({idx, 1.0});
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

std::vector<double> sparsity_report(const BinningSpec& spec, const Dataset& ds) {
  if (ds.empty()) throw Error(ErrorKind::data, "sparsity report needs a nonempty dataset");
  std::vector<double> rate(spec.p(), 0.0);
  std::vector<std::uint32_t> row(spec.d);
  for (const Sample& s : ds.samples) {
    encode_into(spec, s.features, row);
    for (std::uint32_t idx : row) rate[idx] += 1.0;
  }
  for (double& r : rate) r /= static_cast<double>(ds.size());
  return rate;
}

}  // namespace binfm
