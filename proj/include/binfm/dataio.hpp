#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace binfm {

/// One nonzero entry of a sparse feature vector; `index` is 0-based.
struct Feature {
  std::uint32_t index = 0;
  double value = 0.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct Sample {
  std::vector<Feature> features;  // strictly increasing indices
  std::int32_t label = 0;         // contiguous class id

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// A labeled sparse dataset.
///
/// Labels are stored as contiguous ids in [0, classes). `label_values[k]` is
/// the original label (as written in the source file) of class id k; ids are
/// assigned in ascending order of the original values so that two files with
/// the same label set map identically.
struct Dataset {
  std::vector<Sample> samples;
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::vector<double> label_values;

  [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
  [[nodiscard]] bool empty() const noexcept { return samples.empty(); }
};

/// Checks every Sample/Dataset invariant, throwing Error(data) on violation.
void validate(const Dataset& ds);

/// Parses libsvm text (`<label> <idx>:<val> ...`, 1-based indices). `min_dim`
/// raises the dimensionality above the largest observed index.
Dataset parse_libsvm(std::istream& in, std::size_t min_dim = 0);
Dataset load_libsvm(const std::filesystem::path& path, std::size_t min_dim = 0);

void write_libsvm(const Dataset& ds, std::ostream& out);
void save_libsvm(const Dataset& ds, const std::filesystem::path& path);

/// Two concentric circles: n/2 points at radius `outer` (class 0) and n/2 at
/// radius `inner` (class 1), isotropic Gaussian noise of std-dev `noise`.
Dataset gen_circles(std::size_t n, double noise, std::uint64_t seed, double outer = 1.0, double inner = 0.5);

/// Two interleaving half circles. Class 0 is the upper arc (cos t, sin t),
/// class 1 the lower arc (1 - cos t, 0.5 - sin t), t in [0, pi].
Dataset gen_moons(std::size_t n, double noise, std::uint64_t seed);

/// Six features with very different scales and skews (uniform, log-normal,
/// exponential, a sparse indicator-like feature, ...) and a label that mixes an
/// additive rule with a pairwise interaction. `noise` is the probability of
/// flipping a label.
Dataset gen_heterogeneous(std::size_t n, double noise, std::uint64_t seed);

/// Copies the samples at `indices`, keeping dim, classes and label_values.
Dataset subset(const Dataset& ds, std::span<const std::size_t> indices);

/// Seeded random partition into ceil(train_frac * n) training samples and the
/// remainder.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_frac, std::uint64_t seed);

/// Fold `fold` of a seeded k-fold partition: (training part, held-out part).
std::pair<Dataset, Dataset> kfold(const Dataset& ds, std::size_t k, std::size_t fold, std::uint64_t seed);

}  // namespace binfm
