#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "binfm/dataio.hpp"
#include "binfm/error.hpp"
#include "binfm/fm_core.hpp"
#include "binfm/ovr.hpp"
#include "oracles.hpp"

using namespace binfm;

TEST(FmPredict, ZeroModelScoresZero) {
  const FmModel model(5, 3);
  const std::vector<Feature> x = {{0, 1.0}, {2, -3.0}, {4, 0.5}};
  EXPECT_EQ(fm_predict(model, x), 0.0);
}

TEST(FmPredict, HandWorkedExample) {
  FmModel model(2, 1);
  model.w = {0.1, 0.2};
  model.v = {1.0, 3.0};
  const std::vector<Feature> x = {{0, 1.0}, {1, 2.0}};
  EXPECT_NEAR(fm_predict(model, x), 6.5, 1e-12);
  EXPECT_NEAR(oracle::fm_brute(model, x), 6.5, 1e-12);
}

TEST(FmPredict, FactorizedEqualsPairwiseSum) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> pdist(1, 12), mdist(1, 6);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t p = pdist(rng);
    const FmModel model = oracle::random_fm(rng, p, mdist(rng));
    const auto x = oracle::random_sparse(rng, p);
    EXPECT_LE(oracle::rel_err(fm_predict(model, x), oracle::fm_brute(model, x)), 1e-9) << "instance " << t;
  }
}

TEST(FmPredict, FactorSumsAreReported) {
  std::mt19937_64 rng(5);
  const FmModel model = oracle::random_fm(rng, 8, 3);
  const auto x = oracle::random_sparse(rng, 8, 1.0);
  std::vector<double> sums(3);
  fm_predict(model, x, sums);
  for (std::size_t f = 0; f < 3; ++f) {
    double s = 0.0;
    for (const Feature& e : x) s += model.vf(e.index, f) * e.value;
    EXPECT_NEAR(sums[f], s, 1e-12);
  }
}

TEST(Loss, ReferencePoints) {
  const auto lg = loss_and_dloss(LossKind::logistic, 1, 0.0);
  EXPECT_NEAR(lg.loss, std::log(2.0), 1e-15);
  EXPECT_NEAR(lg.dloss, -0.5, 1e-15);
  const auto hg = loss_and_dloss(LossKind::hinge, 1, 2.0);
  EXPECT_EQ(hg.loss, 0.0);
  EXPECT_EQ(hg.dloss, 0.0);
  const auto sq = loss_and_dloss(LossKind::squared, -1, 0.0);
  EXPECT_EQ(sq.loss, 0.5);
  EXPECT_EQ(sq.dloss, 1.0);
}

TEST(Loss, LogisticIsStableForLargeMargins) {
  for (double f : {-800.0, -40.0, 40.0, 800.0}) {
    for (int y : {-1, 1}) {
      const auto le = loss_and_dloss(LossKind::logistic, y, f);
      EXPECT_TRUE(std::isfinite(le.loss));
      EXPECT_TRUE(std::isfinite(le.dloss));
      EXPECT_GE(le.loss, 0.0);
    }
  }
  EXPECT_NEAR(loss_and_dloss(LossKind::logistic, 1, -800.0).loss, 800.0, 1e-9);
}

TEST(Loss, DerivativesMatchFiniteDifferences) {
  const double h = 1e-5;
  for (auto kind : {LossKind::logistic, LossKind::squared, LossKind::hinge}) {
    for (double f : {-2.3, -0.4, 0.3, 1.7}) {
      for (int y : {-1, 1}) {
        const double fd = (loss_and_dloss(kind, y, f + h).loss - loss_and_dloss(kind, y, f - h).loss) / (2 * h);
        EXPECT_NEAR(loss_and_dloss(kind, y, f).dloss, fd, 1e-6);
      }
    }
  }
}

TEST(FmGradient, MatchesCentralFiniteDifferences) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> pdist(2, 10), mdist(1, 5);
  const double h = 1e-4;
  for (int t = 0; t < 100; ++t) {
    const std::size_t p = pdist(rng);
    FmModel model = oracle::random_fm(rng, p, mdist(rng));
    const auto x = oracle::random_sparse(rng, p, 0.8);
    const FmGradient g = fm_score_gradient(model, x);
    for (std::size_t j = 0; j < p; ++j) {
      const double keep = model.w[j];
      model.w[j] = keep + h;
      const double up = fm_predict(model, x);
      model.w[j] = keep - h;
      const double down = fm_predict(model, x);
      model.w[j] = keep;
      EXPECT_LE(oracle::rel_err(g.w[j], (up - down) / (2 * h), 1e-6), 1e-5);
    }
    for (std::size_t k = 0; k < model.v.size(); ++k) {
      const double keep = model.v[k];
      model.v[k] = keep + h;
      const double up = fm_predict(model, x);
      model.v[k] = keep - h;
      const double down = fm_predict(model, x);
      model.v[k] = keep;
      EXPECT_LE(oracle::rel_err(g.v[k], (up - down) / (2 * h), 1e-6), 1e-5) << "instance " << t << " v[" << k << "]";
    }
  }
}

TEST(FmSgd, StepEqualsLossGradientStep) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    FmModel model = oracle::random_fm(rng, 6, 3);
    const auto x = oracle::random_sparse(rng, 6, 0.7);
    const int y = t % 2 == 0 ? 1 : -1;
    const SgdParams params{0.05, 0.01, 0.02};
    const FmModel before = model;
    const double dloss = loss_and_dloss(LossKind::logistic, y, fm_predict(before, x)).dloss;
    const FmGradient g = fm_score_gradient(before, x);
    fm_sgd_step(model, x, y, params, LossKind::logistic);
    std::vector<bool> active(6, false);
    for (const Feature& e : x) active[e.index] = true;
    for (std::size_t j = 0; j < 6; ++j) {
      const double expect_w = active[j] ? before.w[j] - 0.05 * (dloss * g.w[j] + 0.01 * before.w[j]) : before.w[j];
      EXPECT_NEAR(model.w[j], expect_w, 1e-12);
      for (std::size_t f = 0; f < 3; ++f) {
        const double v0 = before.vf(j, f);
        const double expect_v = active[j] ? v0 - 0.05 * (dloss * g.v[j * 3 + f] + 0.02 * v0) : v0;
        EXPECT_NEAR(model.vf(j, f), expect_v, 1e-12);
      }
    }
  }
}

TEST(FmSgd, ZeroLossDerivativeWithoutRegularizationLeavesModelUnchanged) {
  FmModel model(3, 2);
  model.w = {2.0, 0.0, 1.0};
  model.v = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const FmModel before = model;
  const std::vector<Feature> x = {{0, 1.0}, {2, 1.0}};
  // Hinge with margin >= 1 has zero derivative.
  fm_sgd_step(model, x, 1, {0.5, 0.0, 0.0}, LossKind::hinge);
  EXPECT_EQ(model, before);
}

TEST(FmSgd, SingleFeatureHasNoSelfInteraction) {
  FmModel model(1, 1);
  model.w = {0.3};
  model.v = {0.7};
  const std::vector<Feature> x = {{0, 2.0}};
  fm_sgd_step(model, x, -1, {0.1, 0.0, 0.0}, LossKind::logistic);
  EXPECT_EQ(model.v[0], 0.7);
  EXPECT_NE(model.w[0], 0.3);
}

TEST(FmTrain, ZeroEpochsWithZeroFactorsScoresZero) {
  // fm_train always draws V; a fresh zero model is the zero-epoch state.
  const FmModel model(4, 3);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) EXPECT_EQ(fm_predict(model, oracle::random_sparse(rng, 4, 1.0)), 0.0);
}

TEST(FmTrain, LossDecreasesAndIsDeterministic) {
  const Dataset ds = gen_moons(400, 0.1, 2);
  std::vector<std::int32_t> labels;
  for (const Sample& s : ds.samples) labels.push_back(s.label);
  const auto targets = ovr_targets(labels, 2, 0);
  TrainOptions opts;
  opts.rank = 4;
  opts.epochs = 10;
  opts.tol = 0.0;
  const FmTrainResult a = fm_train(ds, targets, ds.dim, opts);
  const FmTrainResult b = fm_train(ds, targets, ds.dim, opts);
  ASSERT_EQ(a.loss_history.size(), 11U);
  EXPECT_LT(a.loss_history.back(), a.loss_history.front());
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.loss_history, b.loss_history);
}

TEST(FmTrain, NonFiniteLossIsReportedAsDivergence) {
  const Dataset ds = gen_heterogeneous(300, 0.0, 1);
  std::vector<std::int32_t> labels;
  for (const Sample& s : ds.samples) labels.push_back(s.label);
  const auto targets = ovr_targets(labels, 2, 0);
  TrainOptions opts;
  opts.eta = 1e3;
  opts.loss = LossKind::squared;
  opts.epochs = 50;
  try {
    fm_train(ds, targets, ds.dim, opts);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::divergence);
  }
}
