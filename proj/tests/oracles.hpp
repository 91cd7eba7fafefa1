#pragma once

// Independent reference implementations used by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "binfm/binfm.hpp"
#include "binfm/dataio.hpp"
#include "binfm/fm_core.hpp"

namespace oracle {

// Relative difference with a floor on the denominator so exact zeros compare.
inline double rel_err(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// O(n^2) pairwise FM score straight from the definition.
inline double fm_brute(const binfm::FmModel& model, std::span<const binfm::Feature> x) {
  double s = 0.0;
  for (const auto& e : x) s += model.w[e.index] * e.value;
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t c = a + 1; c < x.size(); ++c) {
      double dot = 0.0;
      for (std::size_t f = 0; f < model.m; ++f) dot += model.vf(x[a].index, f) * model.vf(x[c].index, f);
      s += dot * x[a].value * x[c].value;
    }
  return s;
}

// Binarized score over an active set, pairwise form.
inline double binfm_brute(const binfm::BinFmModel& model, std::span<const std::uint32_t> active) {
  double lin = 0.0;
  for (std::uint32_t j : active) lin += model.sign_w[j];
  double pairs = 0.0;
  for (std::size_t a = 0; a < active.size(); ++a)
    for (std::size_t c = a + 1; c < active.size(); ++c)
      for (std::size_t f = 0; f < model.m; ++f)
        pairs += model.sign_v[model.vidx(active[a], f)] * model.sign_v[model.vidx(active[c], f)];
  return model.alpha * lin + model.beta * model.beta * pairs;
}

// Interaction part of the binarized score with the sign matrix relaxed to
// real values `vb` (p x m row-major).
inline double relaxed_interaction(std::span<const double> vb, std::size_t m, double beta,
                                  std::span<const std::uint32_t> active) {
  double total = 0.0;
  for (std::size_t f = 0; f < m; ++f) {
    double s = 0.0;
    double sq = 0.0;
    for (std::uint32_t j : active) {
      s += vb[j * m + f];
      sq += vb[j * m + f] * vb[j * m + f];
    }
    total += s * s - sq;
  }
  return 0.5 * beta * beta * total;
}

inline std::vector<binfm::Feature> random_sparse(std::mt19937_64& rng, std::size_t p, double density = 0.6) {
  std::bernoulli_distribution keep(density);
  std::normal_distribution<double> val(0.0, 1.0);
  std::vector<binfm::Feature> x;
  for (std::uint32_t j = 0; j < p; ++j)
    if (keep(rng)) x.push_back({j, val(rng)});
  return x;
}

inline binfm::FmModel random_fm(std::mt19937_64& rng, std::size_t p, std::size_t m) {
  std::normal_distribution<double> g(0.0, 0.5);
  binfm::FmModel model(p, m);
  for (double& w : model.w) w = g(rng);
  for (double& v : model.v) v = g(rng);
  return model;
}

// One active index per feature block of width b.
inline std::vector<std::uint32_t> random_active(std::mt19937_64& rng, std::size_t d, std::size_t b) {
  std::uniform_int_distribution<std::size_t> pick(0, b - 1);
  std::vector<std::uint32_t> active(d);
  for (std::size_t j = 0; j < d; ++j) active[j] = static_cast<std::uint32_t>(j * b + pick(rng));
  return active;
}

inline binfm::BinFmModel random_binfm(std::mt19937_64& rng, std::size_t p, std::size_t m) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_real_distribution<double> scale(0.05, 2.0);
  binfm::BinFmModel model(p, m);
  for (double& w : model.proxy_w) w = u(rng);
  for (double& v : model.proxy_v) v = u(rng);
  model.resync_signs();
  model.alpha = scale(rng);
  model.beta = scale(rng);
  return model;
}

}  // namespace oracle
