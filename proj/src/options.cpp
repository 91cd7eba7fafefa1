#include "binfm/options.hpp"

#include <cmath>
#include <string>

#include "binfm/error.hpp"

namespace binfm {

LossKind parse_loss(std::string_view name) {
  if (name == "logistic" || name == "log") return LossKind::logistic;
  if (name == "hinge") return LossKind::hinge;
  if (name == "squared") return LossKind::squared;
  throw Error(ErrorKind::usage, "unknown loss '" + std::string(name) + "'");
}

Optimizer parse_optimizer(std::string_view name) {
  if (name == "adagrad") return Optimizer::adagrad;
  if (name == "sgd") return Optimizer::sgd;
  throw Error(ErrorKind::usage, "unknown optimizer '" + std::string(name) + "'");
}

std::string_view to_string(LossKind k) noexcept {
  switch (k) {
    case LossKind::logistic: return "logistic";
    case LossKind::hinge: return "hinge";
    case LossKind::squared: return "squared";
  }
  return "?";
}

std::string_view to_string(Optimizer o) noexcept { return o == Optimizer::adagrad ? "adagrad" : "sgd"; }

void validate(const TrainOptions& opts) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw Error(ErrorKind::usage, msg);
  };
  require(opts.rank >= 1, "rank must be >= 1");
  require(std::isfinite(opts.eta) && opts.eta > 0.0, "learning rate must be > 0");
  require(std::isfinite(opts.lambda1) && opts.lambda1 >= 0.0, "lambda1 must be >= 0");
  require(std::isfinite(opts.lambda2) && opts.lambda2 >= 0.0, "lambda2 must be >= 0");
  require(std::isfinite(opts.eps) && opts.eps > 0.0, "eps must be > 0");
  require(opts.epochs >= 1, "epochs must be >= 1");
  require(std::isfinite(opts.tol) && opts.tol >= 0.0, "tolerance must be >= 0");
  require(opts.loss == LossKind::logistic || opts.loss == LossKind::hinge || opts.loss == LossKind::squared,
          "unknown loss");
  require(opts.optimizer == Optimizer::adagrad || opts.optimizer == Optimizer::sgd, "unknown optimizer");
}

}  // namespace binfm
