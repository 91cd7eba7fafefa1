#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "binfm/dataio.hpp"
#include "binfm/encoder.hpp"
#include "binfm/fm_core.hpp"
#include "binfm/options.hpp"
#include "binfm/packed.hpp"

namespace binfm {

enum class ModelKind : std::uint32_t { fm = 0, sefm = 1, binfm = 2 };

ModelKind parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind k) noexcept;

struct ClassifierOptions {
  ModelKind kind = ModelKind::binfm;
  std::size_t bins = 30;
  BinStrategy strategy = BinStrategy::quantile;
  TrainOptions train;
  std::size_t jobs = 1;
};

void validate(const ClassifierOptions& opts);

/// A trained multiclass model of any of the three kinds, ready for
/// prediction. Binarized heads are kept only in packed form and scored with
/// popcount_predict.
///
/// On disk a classifier is its head records back to back ("BFM1" records for
/// binfm, "FFM1" records for fm/sefm) followed by a "BFML" label table.
class Classifier {
 public:
  static Classifier fit(const Dataset& train, const ClassifierOptions& opts);

  static Classifier load(const std::filesystem::path& path);
  static Classifier read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;

  [[nodiscard]] ModelKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t input_dim() const noexcept { return d_; }
  [[nodiscard]] std::size_t bins() const noexcept { return spec_ ? spec_->b : 0; }
  [[nodiscard]] std::size_t rank() const noexcept;
  [[nodiscard]] std::size_t classes() const noexcept { return label_values_.size(); }
  [[nodiscard]] std::size_t head_count() const noexcept;
  [[nodiscard]] std::span<const double> label_values() const noexcept { return label_values_; }
  [[nodiscard]] const std::optional<BinningSpec>& binning() const noexcept { return spec_; }
  [[nodiscard]] std::span<const FmModel> fm_heads() const noexcept { return fm_heads_; }
  [[nodiscard]] std::span<const PackedModel> packed_heads() const noexcept { return packed_heads_; }
  /// Per-head training loss (entry 0 before training). Empty after load().
  [[nodiscard]] const std::vector<std::vector<double>>& loss_histories() const noexcept { return histories_; }

  /// Raw score of every head.
  [[nodiscard]] std::vector<double> head_scores(std::span<const Feature> x) const;
  /// Predicted class id (index into label_values()).
  [[nodiscard]] std::int32_t predict(std::span<const Feature> x) const;
  /// Fraction of samples whose predicted original label equals theirs.
  [[nodiscard]] double accuracy(const Dataset& ds) const;
  /// Throws Error(data) if `ds` has features beyond this model's input.
  void check_compatible(const Dataset& ds) const;

  /// Bytes write() would produce.
  [[nodiscard]] std::size_t serialized_bytes() const;
  /// Bits of model coefficients: 32 per float for fm/sefm, 1 per sign for binfm.
  [[nodiscard]] std::size_t parameter_bits() const noexcept;

 private:
  ModelKind kind_ = ModelKind::binfm;
  std::size_t d_ = 0;
  std::optional<BinningSpec> spec_;
  std::vector<FmModel> fm_heads_;
  std::vector<PackedModel> packed_heads_;
  std::vector<double> label_values_;
  std::vector<std::vector<double>> histories_;
};

}  // namespace binfm
