#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "binfm/error.hpp"

namespace binfm {

inline void check_finite_loss(double loss, std::size_t epoch) {
  if (!std::isfinite(loss)) {
    throw Error(ErrorKind::divergence,
                "training diverged: non-finite loss after epoch " + std::to_string(epoch) + "; lower the learning rate");
  }
}

// history[0] is the loss before training; the rule compares consecutive
// epochs only, so the first epoch always runs to completion.
inline bool converged(const std::vector<double>& history, double tol) {
  if (tol <= 0.0 || history.size() < 3) return false;
  const double prev = history[history.size() - 2];
  const double cur = history.back();
  if (prev <= 0.0) return true;
  return (prev - cur) / prev < tol;
}

}  // namespace binfm
