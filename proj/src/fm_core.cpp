#include "binfm/fm_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "binfm/error.hpp"
#include "training_util.hpp"

namespace binfm {

LossEval loss_and_dloss(LossKind kind, int y, double f) {
  const double yd = static_cast<double>(y);
  switch (kind) {
    case LossKind::logistic: {
      const double z = yd * f;
      // log(1 + exp(-z)) and sigma(-z) without overflow in either direction.
      if (z >= 0.0) {
        const double e = std::exp(-z);
        return {std::log1p(e), -yd * e / (1.0 + e)};
      }
      const double e = std::exp(z);
      return {-z + std::log1p(e), -yd / (1.0 + e)};
    }
    case LossKind::hinge: {
      const double margin = 1.0 - yd * f;
      return margin > 0.0 ? LossEval{margin, -yd} : LossEval{0.0, 0.0};
    }
    case LossKind::squared: {
      const double r = f - yd;
      return {0.5 * r * r, r};
    }
  }
  throw Error(ErrorKind::usage, "unknown loss kind");
}

double fm_predict(const FmModel& model, std::span<const Feature> x, std::span<double> factor_sums) {
  double linear = 0.0;
  for (const Feature& e : x) linear += model.w[e.index] * e.value;
  double interaction = 0.0;
  for (std::size_t f = 0; f < model.m; ++f) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const Feature& e : x) {
      const double t = model.vf(e.index, f) * e.value;
      sum += t;
      sum_sq += t * t;
    }
    if (!factor_sums.empty()) factor_sums[f] = sum;
    interaction += sum * sum - sum_sq;
  }
  return linear + 0.5 * interaction;
}

FmGradient fm_score_gradient(const FmModel& model, std::span<const Feature> x) {
  FmGradient g{std::vector<double>(model.p, 0.0), std::vector<double>(model.p * model.m, 0.0)};
  std::vector<double> sums(model.m);
  fm_predict(model, x, sums);
  for (const Feature& e : x) {
    g.w[e.index] = e.value;
    for (std::size_t f = 0; f < model.m; ++f)
      g.v[e.index * model.m + f] = e.value * sums[f] - model.vf(e.index, f) * e.value * e.value;
  }
  return g;
}

double fm_sgd_step(FmModel& model, std::span<const Feature> x, int y, const SgdParams& params, LossKind kind) {
  std::vector<double> sums(model.m);
  const double score = fm_predict(model, x, sums);
  const LossEval le = loss_and_dloss(kind, y, score);
  for (const Feature& e : x) {
    double& wj = model.w[e.index];
    wj -= params.eta * (le.dloss * e.value + params.lambda1 * wj);
    for (std::size_t f = 0; f < model.m; ++f) {
      double& v = model.vf(e.index, f);
      const double dscore = e.value * sums[f] - v * e.value * e.value;
      v -= params.eta * (le.dloss * dscore + params.lambda2 * v);
    }
  }
  return le.loss;
}

double fm_mean_loss(const FmModel& model, const Dataset& ds, std::span<const std::int8_t> targets, LossKind kind) {
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    total += loss_and_dloss(kind, targets[i], fm_predict(model, ds.samples[i].features)).loss;
  return ds.empty() ? 0.0 : total / static_cast<double>(ds.size());
}

FmTrainResult fm_train(const Dataset& ds, std::span<const std::int8_t> targets, std::size_t p, const TrainOptions& opts) {
  validate(opts);
  if (ds.empty()) throw Error(ErrorKind::data, "cannot train on an empty dataset");
  if (targets.size() != ds.size()) throw Error(ErrorKind::usage, "one target per sample required");
  if (p < ds.dim) throw Error(ErrorKind::usage, "model dimensionality is smaller than the data");

  std::mt19937_64 rng(opts.seed);
  FmTrainResult result{FmModel(p, opts.rank), {}};
  std::uniform_real_distribution<double> init(-0.01, 0.01);
  for (double& v : result.model.v) v = init(rng);

  const SgdParams params{opts.eta, opts.lambda1, opts.lambda2};
  result.loss_history.push_back(fm_mean_loss(result.model, ds, targets, opts.loss));

  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 1; epoch <= opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) fm_sgd_step(result.model, ds.samples[i].features, targets[i], params, opts.loss);
    const double loss = fm_mean_loss(result.model, ds, targets, opts.loss);
    check_finite_loss(loss, epoch);
    result.loss_history.push_back(loss);
    if (converged(result.loss_history, opts.tol)) break;
  }
  return result;
}

}  // namespace binfm
