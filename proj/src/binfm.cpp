#include "binfm/binfm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "binfm/error.hpp"
#include "binfm/fm_core.hpp"
#include "binfm/ovr.hpp"
#include "training_util.hpp"

namespace binfm {

BinFmModel::BinFmModel(std::size_t p_, std::size_t m_)
    : p(p_), m(m_), proxy_w(p_, 0.0), proxy_v(p_ * m_, 0.0), sign_w(p_, 1), sign_v(p_ * m_, 1) {}

void BinFmModel::resync_signs() {
  std::transform(proxy_w.begin(), proxy_w.end(), sign_w.begin(), [](double v) { return quantize_sign(v); });
  std::transform(proxy_v.begin(), proxy_v.end(), sign_v.begin(), [](double v) { return quantize_sign(v); });
}

std::vector<std::int8_t> quantize_sign(std::span<const double> v) {
  std::vector<std::int8_t> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return quantize_sign(x); });
  return out;
}

Scaling refresh_scaling(const BinFmModel& model) {
  auto mean_abs = [](const std::vector<double>& xs) {
    if (xs.empty()) return kScalingFloor;
    double s = 0.0;
    for (double x : xs) s += std::abs(x);
    const double mean = s / static_cast<double>(xs.size());
    return mean > 0.0 ? mean : kScalingFloor;
  };
  return {mean_abs(model.proxy_w), mean_abs(model.proxy_v)};
}

double binfm_predict(const BinFmModel& model, std::span<const std::uint32_t> active, std::span<double> factor_sums) {
  int linear = 0;
  for (std::uint32_t j : active) linear += model.sign_w[j];
  const auto d = static_cast<long>(active.size());
  long interaction = 0;
  for (std::size_t f = 0; f < model.m; ++f) {
    long s = 0;
    for (std::uint32_t j : active) s += model.sign_v[model.vidx(j, f)];
    if (!factor_sums.empty()) factor_sums[f] = static_cast<double>(s);
    interaction += s * s - d;
  }
  return model.alpha * linear + 0.5 * model.beta * model.beta * static_cast<double>(interaction);
}

double ste_grad_w(const BinFmModel& model, double dloss, double lambda1, std::size_t j) {
  if (std::abs(model.proxy_w[j]) > 1.0) return 0.0;
  return dloss * model.alpha + lambda1 * model.alpha * model.sign_w[j];
}

double ste_grad_v(const BinFmModel& model, double dloss, double lambda2, std::size_t j, std::size_t f,
                  double cached_sum) {
  const std::size_t k = model.vidx(j, f);
  if (std::abs(model.proxy_v[k]) > 1.0) return 0.0;
  const double vb = model.sign_v[k];
  const double beta2 = model.beta * model.beta;
  return dloss * beta2 * (cached_sum - vb) + lambda2 * model.beta * vb;
}

double adagrad_update(double& param, double& accumulator, double grad, double eta, double eps) noexcept {
  accumulator += grad * grad;
  param -= eta * grad / std::sqrt(accumulator + eps);
  return param;
}

double binfm_mean_loss(const BinFmModel& model, const EncodedDataset& data, std::span<const std::int8_t> targets,
                       LossKind kind) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    total += loss_and_dloss(kind, targets[i], binfm_predict(model, data.row(i))).loss;
  return data.size() == 0 ? 0.0 : total / static_cast<double>(data.size());
}

BinFmTrainResult train(const EncodedDataset& data, std::span<const std::int8_t> targets, const TrainOptions& opts) {
  validate(opts);
  if (data.size() == 0) throw Error(ErrorKind::data, "cannot train on an empty dataset");
  if (targets.size() != data.size()) throw Error(ErrorKind::usage, "one target per sample required");

  const std::size_t p = data.p();
  const std::size_t m = opts.rank;
  std::mt19937_64 rng(opts.seed);

  BinFmTrainResult result{BinFmModel(p, m), {}};
  BinFmModel& model = result.model;
  // Zero-initialized V proxies would receive identical gradients in every
  // factor column and never separate.
  std::uniform_real_distribution<double> init(-0.01, 0.01);
  for (double& v : model.proxy_v) v = init(rng);
  model.resync_signs();
  // With scaling on, the scales start from the initial proxies: alpha sits at
  // the floor until w moves, beta at the mean |V| of the random start.
  if (opts.use_scaling) {
    const Scaling sc = refresh_scaling(model);
    model.alpha = sc.alpha;
    model.beta = sc.beta;
  }

  AdagradState state(p, m, opts.eta, opts.eps);
  const bool adagrad = opts.optimizer == Optimizer::adagrad;
  auto step = [&](double& param, double& acc, double grad) {
    if (adagrad) {
      adagrad_update(param, acc, grad, state.eta, state.eps);
    } else {
      param -= state.eta * grad;
    }
  };

  result.loss_history.push_back(binfm_mean_loss(model, data, targets, opts.loss));

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> sums(m);
  for (std::size_t epoch = 1; epoch <= opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      const auto active = data.row(i);
      const double score = binfm_predict(model, active, sums);
      const double dloss = loss_and_dloss(opts.loss, targets[i], score).dloss;
      for (std::uint32_t j : active) {
        step(model.proxy_w[j], state.s_w[j], ste_grad_w(model, dloss, opts.lambda1, j));
        model.sign_w[j] = quantize_sign(model.proxy_w[j]);
      }
      for (std::size_t f = 0; f < m; ++f) {
        for (std::uint32_t j : active) {
          const std::size_t k = model.vidx(j, f);
          step(model.proxy_v[k], state.s_v[k], ste_grad_v(model, dloss, opts.lambda2, j, f, sums[f]));
          model.sign_v[k] = quantize_sign(model.proxy_v[k]);
        }
      }
    }
    if (opts.use_scaling) {
      const Scaling sc = refresh_scaling(model);
      model.alpha = sc.alpha;
      model.beta = sc.beta;
    }
    const double loss = binfm_mean_loss(model, data, targets, opts.loss);
    check_finite_loss(loss, epoch);
    result.loss_history.push_back(loss);
    if (converged(result.loss_history, opts.tol)) break;
  }
  return result;
}

std::int32_t OvrBinFm::predict(std::span<const std::uint32_t> active) const {
  std::vector<double> scores;
  scores.reserve(heads.size());
  for (const BinFmModel& h : heads) scores.push_back(binfm_predict(h, active));
  return ovr_decide(scores);
}

OvrBinFm train_ovr(const EncodedDataset& data, const TrainOptions& opts, std::size_t jobs) {
  validate(opts);
  require_all_classes(data.labels, data.classes);
  const std::size_t heads = ovr_head_count(data.classes);
  OvrBinFm out;
  out.classes = data.classes;
  out.heads.resize(heads);
  out.loss_histories.resize(heads);
  for_each_head(heads, jobs, [&](std::size_t h) {
    TrainOptions head_opts = opts;
    head_opts.seed = opts.seed + h;
    const auto targets = ovr_targets(data.labels, data.classes, h);
    auto r = train(data, targets, head_opts);
    out.heads[h] = std::move(r.model);
    out.loss_histories[h] = std::move(r.loss_history);
  });
  return out;
}

}  // namespace binfm
