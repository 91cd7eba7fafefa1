#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "binfm/encoder.hpp"
#include "binfm/options.hpp"

namespace binfm {

/// Binarized FM under training: full-precision proxies plus their signs and
/// the two scaling factors. The deployable form is PackedModel.
///
/// Invariant: sign_w[j] == quantize_sign(proxy_w[j]) and likewise for V.
struct BinFmModel {
  std::size_t p = 0;
  std::size_t m = 0;
  std::vector<double> proxy_w;       // p
  std::vector<double> proxy_v;       // p x m, row-major
  std::vector<std::int8_t> sign_w;   // p
  std::vector<std::int8_t> sign_v;   // p x m, row-major
  double alpha = 1.0;
  double beta = 1.0;

  BinFmModel() = default;
  /// Zero proxies, all signs +1, alpha = beta = 1.
  BinFmModel(std::size_t p_, std::size_t m_);

  [[nodiscard]] std::size_t vidx(std::size_t j, std::size_t f) const noexcept { return j * m + f; }

  /// Overwrites every sign from its proxy.
  void resync_signs();
};

/// Per-coordinate squared-gradient accumulators.
struct AdagradState {
  std::vector<double> s_w;
  std::vector<double> s_v;
  double eta = 0.1;
  double eps = 1e-8;

  AdagradState() = default;
  AdagradState(std::size_t p, std::size_t m, double eta_, double eps_)
      : s_w(p, 0.0), s_v(p * m, 0.0), eta(eta_), eps(eps_) {}
};

/// +1 for v >= 0, -1 otherwise.
[[nodiscard]] constexpr std::int8_t quantize_sign(double v) noexcept { return v >= 0.0 ? 1 : -1; }
std::vector<std::int8_t> quantize_sign(std::span<const double> v);

struct Scaling {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Smallest value substituted for a zero mean-absolute proxy.
inline constexpr double kScalingFloor = 1e-8;

/// Least-squares optimal scales for the current signs: the mean absolute
/// value of proxy_w and of proxy_V.
Scaling refresh_scaling(const BinFmModel& model);

/// Score of an encoded sample given its active indices. `factor_sums`, when
/// non-empty, must have size m and receives sum_{j active} sign_v(j, f).
double binfm_predict(const BinFmModel& model, std::span<const std::uint32_t> active,
                     std::span<double> factor_sums = {});

/// Straight-through gradient for proxy_w[j] of an active index j. Zero when
/// |proxy_w[j]| > 1.
double ste_grad_w(const BinFmModel& model, double dloss, double lambda1, std::size_t j);

/// Straight-through gradient for proxy_v(j, f) of an active index j, where
/// `cached_sum` is the factor sum computed before any update on this sample.
/// Zero when |proxy_v(j, f)| > 1.
double ste_grad_v(const BinFmModel& model, double dloss, double lambda2, std::size_t j, std::size_t f,
                  double cached_sum);

/// accumulator += grad^2; param -= eta * grad / sqrt(accumulator + eps).
/// Returns the new parameter value.
double adagrad_update(double& param, double& accumulator, double grad, double eta, double eps) noexcept;

/// Mean loss over an encoded dataset.
double binfm_mean_loss(const BinFmModel& model, const EncodedDataset& data, std::span<const std::int8_t> targets,
                       LossKind kind);

struct BinFmTrainResult {
  BinFmModel model;
  std::vector<double> loss_history;  // entry 0 = before training, then one per epoch run
};

/// Straight-through training with Adagrad (or plain SGD).
///
/// Proxy w starts at 0, proxy V uniform in [-0.01, 0.01]. With scaling
/// enabled alpha and beta are set from the proxies before the first epoch and
/// refreshed at the end of every epoch; with scaling disabled both stay 1.
/// For each sample the factor sums are computed once, then every active w
/// coordinate and every active V coordinate is stepped and its sign
/// refreshed.
BinFmTrainResult train(const EncodedDataset& data, std::span<const std::int8_t> targets, const TrainOptions& opts);

/// One-vs-all wrapper around several binarized heads.
struct OvrBinFm {
  std::size_t classes = 0;
  std::vector<BinFmModel> heads;
  std::vector<std::vector<double>> loss_histories;

  [[nodiscard]] std::int32_t predict(std::span<const std::uint32_t> active) const;
};

/// Trains ovr_head_count(classes) heads; head h is seeded with seed + h so the
/// result does not depend on `jobs`.
OvrBinFm train_ovr(const EncodedDataset& data, const TrainOptions& opts, std::size_t jobs = 1);

}  // namespace binfm
