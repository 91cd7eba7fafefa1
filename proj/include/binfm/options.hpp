#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace binfm {

enum class LossKind : std::uint32_t { logistic = 0, hinge = 1, squared = 2 };
enum class Optimizer : std::uint32_t { adagrad = 0, sgd = 1 };

LossKind parse_loss(std::string_view name);
Optimizer parse_optimizer(std::string_view name);
std::string_view to_string(LossKind k) noexcept;
std::string_view to_string(Optimizer o) noexcept;

/// Hyperparameters shared by the full-precision and the binarized trainers.
/// `optimizer` and `use_scaling` only affect the binarized trainer.
struct TrainOptions {
  std::size_t rank = 16;
  double eta = 0.1;
  double lambda1 = 1e-4;
  double lambda2 = 1e-4;
  double eps = 1e-8;
  LossKind loss = LossKind::logistic;
  Optimizer optimizer = Optimizer::adagrad;
  std::size_t epochs = 20;
  // Stop once an epoch improves the mean training loss by less than this
  // relative amount. 0 disables early stopping.
  double tol = 1e-4;
  bool use_scaling = true;
  std::uint64_t seed = 1;
};

/// Throws Error(usage) on out-of-domain values.
void validate(const TrainOptions& opts);

}  // namespace binfm
