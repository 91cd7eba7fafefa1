#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "binfm/dataio.hpp"
#include "binfm/options.hpp"

namespace binfm {

/// Degree-2 factorization machine without a global bias.
struct FmModel {
  std::size_t p = 0;
  std::size_t m = 0;
  std::vector<double> w;  // p
  std::vector<double> v;  // p x m, row-major

  FmModel() = default;
  FmModel(std::size_t p_, std::size_t m_) : p(p_), m(m_), w(p_, 0.0), v(p_ * m_, 0.0) {}

  [[nodiscard]] double& vf(std::size_t j, std::size_t f) noexcept { return v[j * m + f]; }
  [[nodiscard]] double vf(std::size_t j, std::size_t f) const noexcept { return v[j * m + f]; }

  friend bool operator==(const FmModel&, const FmModel&) = default;
};

struct LossEval {
  double loss = 0.0;
  double dloss = 0.0;  // dL/df (a subgradient for hinge)
};

/// `y` must be -1 or +1.
LossEval loss_and_dloss(LossKind kind, int y, double f);

/// Factorized score, O(m * nnz). `factor_sums`, when non-empty, must have
/// size m and receives sum_j v_jf x_j for each factor.
double fm_predict(const FmModel& model, std::span<const Feature> x, std::span<double> factor_sums = {});

/// Dense gradient of the score with respect to every parameter.
struct FmGradient {
  std::vector<double> w;
  std::vector<double> v;
};
FmGradient fm_score_gradient(const FmModel& model, std::span<const Feature> x);

struct SgdParams {
  double eta = 0.1;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// One SGD step on a single sample; only coordinates of nonzero features
/// move. Returns the loss evaluated before the update.
double fm_sgd_step(FmModel& model, std::span<const Feature> x, int y, const SgdParams& params, LossKind kind);

/// Mean loss of `model` over `ds` against the +-1 `targets`.
double fm_mean_loss(const FmModel& model, const Dataset& ds, std::span<const std::int8_t> targets, LossKind kind);

struct FmTrainResult {
  FmModel model;
  std::vector<double> loss_history;  // entry 0 = before training, then one per epoch run
};

/// Plain SGD over seeded per-epoch shuffles. w starts at 0, V uniform in
/// [-0.01, 0.01]. Throws Error(divergence) on a non-finite loss.
FmTrainResult fm_train(const Dataset& ds, std::span<const std::int8_t> targets, std::size_t p, const TrainOptions& opts);

}  // namespace binfm
