#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "binfm/dataio.hpp"

namespace binfm {

enum class BinStrategy : std::uint32_t { equal_width = 0, quantile = 1 };

BinStrategy parse_bin_strategy(std::string_view name);
std::string_view to_string(BinStrategy s) noexcept;

/// Per-feature cut points of the one-hot map. Feature j owns the encoded
/// block [j*b, (j+1)*b); a value v falls into bin #{cuts <= v}, so bins are
/// half-open [cut_{h-1}, cut_h), ties go to the higher bin, and values outside
/// the fitted range clamp to the edge bins.
struct BinningSpec {
  std::size_t d = 0;
  std::size_t b = 0;
  BinStrategy strategy = BinStrategy::quantile;
  std::vector<double> cuts;  // d rows of (b - 1) nondecreasing cut points

  [[nodiscard]] std::size_t p() const noexcept { return d * b; }
  [[nodiscard]] std::span<const double> cuts_for(std::size_t j) const noexcept {
    return std::span<const double>(cuts).subspan(j * (b - 1), b - 1);
  }
  [[nodiscard]] std::size_t bin(std::size_t j, double v) const;

  friend bool operator==(const BinningSpec&, const BinningSpec&) = default;
};

/// Throws Error(format) if the spec's invariants do not hold.
void validate(const BinningSpec& spec);

struct EncodedSample {
  std::vector<std::uint32_t> active;  // one encoded index per original feature
  std::int32_t label = 0;
};

/// A whole dataset in encoded form; row i occupies active[i*d, (i+1)*d).
struct EncodedDataset {
  std::size_t d = 0;
  std::size_t b = 0;
  std::size_t classes = 0;
  std::vector<std::uint32_t> active;
  std::vector<std::int32_t> labels;

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
  [[nodiscard]] std::size_t p() const noexcept { return d * b; }
  [[nodiscard]] std::span<const std::uint32_t> row(std::size_t i) const noexcept {
    return std::span<const std::uint32_t>(active).subspan(i * d, d);
  }
};

BinningSpec fit_bins(const Dataset& ds, std::size_t b, BinStrategy strategy);

/// Writes the d active indices of `features` (dense reading: absent features
/// are 0) into `out`.
void encode_into(const BinningSpec& spec, std::span<const Feature> features, std::span<std::uint32_t> out);
EncodedSample encode(const BinningSpec& spec, const Sample& s);
EncodedDataset encode_dataset(const BinningSpec& spec, const Dataset& ds);

/// One-hot view of an encoded dataset as a sparse Dataset with unit values;
/// this is what the full-precision FM trains on for the subspace-encoded
/// variant.
Dataset to_sparse(const EncodedDataset& enc);

/// Fraction of samples in which each of the p encoded indices is active.
std::vector<double> sparsity_report(const BinningSpec& spec, const Dataset& ds);

}  // namespace binfm
