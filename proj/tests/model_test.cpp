/*
 * Copyright 2026 The fairpen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <numeric>

#include "fairpen/metrics.hpp"
#include "fairpen/model.hpp"
#include "fairpen/simulate.hpp"
#include "test_util.hpp"

namespace fairpen {
namespace {

using ::testing::HasSubstr;
using namespace fairpen::testing;

std::vector<double> Ones(std::size_t n) { return std::vector<double>(n, 1.0); }

// Parameter comparisons at 1e-8 need the optimum resolved past the default
// stopping rule.
SolverConfig Tight() {
  SolverConfig cfg;
  cfg.gradient_tolerance = 1e-13;
  return cfg;
}

Indicator Labels(const Dataset& d) { return {d.outcomes().begin(), d.outcomes().end()}; }

Eigen::VectorXd RandomParams(std::mt19937_64& gen, Eigen::Index size, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(size);
  for (auto& x : v) x = normal(gen);
  return v;
}

// Largest lambda multiplier keeping every positive row's penalty factor in
// [-1, 1], where the penalized loss is provably convex.
double ConvexScale(const Dataset& d, const std::vector<double>& unit) {
  const auto costs = OracleReductionCosts(d, unit);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (d.outcomes()[i]) worst = std::max(worst, std::abs(costs.c1[i]));
  }
  return worst > 0.0 ? 1.0 / worst : 1.0;
}

TEST(PenaltyWeights, Validation) {
  EXPECT_EQ(CodeOf([] { PenaltyWeights({0.1, -0.2}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { PenaltyWeights({std::nan("")}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { PenaltyWeights({INFINITY}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(PenaltyWeights::Zero(3).values(), (std::vector<double>{0, 0, 0}));
}

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  cfg.gradient_tolerance = 0.0;
  EXPECT_ANY_THROW(cfg.Validate());
  cfg = SolverConfig{};
  cfg.max_iterations = 0;
  EXPECT_ANY_THROW(cfg.Validate());
  cfg = SolverConfig{};
  cfg.ridge = -1.0;
  EXPECT_ANY_THROW(cfg.Validate());
  EXPECT_NO_THROW(SolverConfig{}.Validate());
}

TEST(PenalizedLoss, ZeroLambdaIsCrossEntropy) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 50; ++t) {
    const Dataset d = RandomDataset(gen, 30, 3, 2);
    const Eigen::VectorXd params = RandomParams(gen, 4);
    EXPECT_NEAR(PenalizedLoss(params, d, PenaltyWeights::Zero(2)),
                OraclePenalizedLoss(d, params, {0.0, 0.0}), 1e-12);
  }
}

TEST(PenalizedLoss, ZeroParamsGiveNLog2) {
  std::mt19937_64 gen(12);
  const Dataset d = RandomDataset(gen, 40, 2, 3);
  const double expected = 40.0 * std::log(2.0);
  EXPECT_NEAR(PenalizedLoss(Eigen::VectorXd::Zero(3), d, PenaltyWeights({0.3, 2.0, 7.0})),
              expected, 1e-12);
}

TEST(PenalizedLoss, MatchesLiteralFormula) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> lam(0.0, 3.0);
  for (int t = 0; t < 500; ++t) {
    const Dataset d = RandomDataset(gen, 20, 3, 2);
    const Eigen::VectorXd params = RandomParams(gen, 4);
    const std::vector<double> l = {lam(gen), lam(gen)};
    ASSERT_NEAR(PenalizedLoss(params, d, PenaltyWeights(l)), OraclePenalizedLoss(d, params, l),
                1e-12);
  }
}

TEST(PenalizedLoss, UndefinedDenominators) {
  const Dataset d = MakeDataset({1, 0, 1}, {{0, 1, 0}});
  EXPECT_EQ(CodeOf([&] { PenalizedLoss(Eigen::VectorXd::Zero(2), d, PenaltyWeights({1.0})); }),
            ErrorCode::kUndefinedMetric);
  EXPECT_EQ(CodeOf([&] { PenalizedLoss(Eigen::VectorXd::Zero(2), d, PenaltyWeights({1.0, 1.0})); }),
            ErrorCode::kInvalidArgument);
}

TEST(PenalizedGradient, ZeroLambdaIsLogisticGradient) {
  std::mt19937_64 gen(14);
  for (int t = 0; t < 50; ++t) {
    const Dataset d = RandomDataset(gen, 30, 3, 2);
    const Eigen::VectorXd params = RandomParams(gen, 4);
    const auto p = OracleProbabilities(d, params);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(4);
    for (std::size_t i = 0; i < d.rows(); ++i) {
      const double r = p[i] - d.outcomes()[i];
      expected[0] += r;
      for (Eigen::Index j = 0; j < 3; ++j) {
        expected[j + 1] += r * d.features()(static_cast<Eigen::Index>(i), j);
      }
    }
    const Eigen::VectorXd got = PenalizedGradient(params, d, PenaltyWeights::Zero(2));
    EXPECT_LT((got - expected).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

// Central differences of the literal loss. Relative error uses a floor of
// 1e-2 on the denominator so coordinates that are nearly zero do not turn
// rounding noise into large ratios.
TEST(PenalizedGradient, MatchesFiniteDifferences) {
  std::mt19937_64 gen(15);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  const double h = 1e-6;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Dataset d = RandomDataset(gen, 50, 4, 2);
    const Eigen::VectorXd params = RandomParams(gen, 5, 0.5);
    const std::vector<double> l = {lam(gen), lam(gen)};
    const Eigen::VectorXd grad = PenalizedGradient(params, d, PenaltyWeights(l));
    for (Eigen::Index j = 0; j < params.size(); ++j) {
      Eigen::VectorXd up = params, down = params;
      up[j] += h;
      down[j] -= h;
      const double fd =
          (OraclePenalizedLoss(d, up, l) - OraclePenalizedLoss(d, down, l)) / (2.0 * h);
      worst = std::max(worst, std::abs(grad[j] - fd) / std::max(std::abs(fd), 1e-2));
    }
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(PenalizedLoss, ConvexAlongSegmentsForSmallWeights) {
  std::mt19937_64 gen(16);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const Dataset d = RandomDataset(gen, 40, 3, 2);
    std::vector<double> l = {unit(gen), unit(gen)};
    const double scale = ConvexScale(d, l);
    for (auto& v : l) v *= scale;
    const PenaltyWeights w(l);
    const Eigen::VectorXd a = RandomParams(gen, 4, 2.0), b = RandomParams(gen, 4, 2.0);
    const double fa = PenalizedLoss(a, d, w), fb = PenalizedLoss(b, d, w);
    for (int k = 1; k < 20; ++k) {
      const double s = k / 20.0;
      const double f = PenalizedLoss((1.0 - s) * a + s * b, d, w);
      ASSERT_LE(f, (1.0 - s) * fa + s * fb + 1e-9);
    }
  }
}

TEST(FitWeightedLogistic, UnitWeightsMatchUnweightedFit) {
  std::mt19937_64 gen(21);
  for (int t = 0; t < 10; ++t) {
    const Dataset d = RandomDataset(gen, 200, 3, 1);
    const auto y = Labels(d);
    const FittedModel m =
        FitWeightedLogistic(d.features(), y, Ones(d.rows()), Tight(), d.feature_names());
    const Eigen::VectorXd oracle = OracleLogisticFit(d.features(), y, Ones(d.rows()));
    EXPECT_LT((m.Parameters() - oracle).lpNorm<Eigen::Infinity>(), 1e-8);
  }
}

TEST(FitWeightedLogistic, DuplicateRowEqualsWeightTwo) {
  std::mt19937_64 gen(22);
  for (int t = 0; t < 10; ++t) {
    const Dataset d = RandomDataset(gen, 100, 2, 1);
    const auto y = Labels(d);
    std::vector<double> w = Ones(d.rows());
    w[7] = 2.0;
    const FittedModel weighted =
        FitWeightedLogistic(d.features(), y, w, Tight(), d.feature_names());
    std::vector<std::size_t> rows(d.rows());
    std::iota(rows.begin(), rows.end(), 0);
    rows.push_back(7);
    const Dataset dup = d.Subset(rows);
    const FittedModel duplicated = FitWeightedLogistic(dup.features(), Labels(dup),
                                                       Ones(dup.rows()), Tight(),
                                                       dup.feature_names());
    EXPECT_LT((weighted.Parameters() - duplicated.Parameters()).lpNorm<Eigen::Infinity>(), 1e-8);
  }
}

TEST(FitWeightedLogistic, InvariantToScalingAndPermutation) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> unit(0.1, 3.0);
  for (int t = 0; t < 10; ++t) {
    const Dataset d = RandomDataset(gen, 150, 3, 1);
    const auto y = Labels(d);
    std::vector<double> w(d.rows());
    for (auto& v : w) v = unit(gen);
    const Eigen::VectorXd base =
        FitWeightedLogistic(d.features(), y, w, Tight(), d.feature_names()).Parameters();

    std::vector<double> scaled = w;
    for (auto& v : scaled) v *= 37.5;
    EXPECT_LT((FitWeightedLogistic(d.features(), y, scaled, Tight(), d.feature_names())
                   .Parameters() -
               base)
                  .lpNorm<Eigen::Infinity>(),
              1e-8);

    std::vector<std::size_t> perm(d.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    const Dataset shuffled = d.Subset(perm);
    std::vector<double> w_shuffled(d.rows());
    for (std::size_t i = 0; i < perm.size(); ++i) w_shuffled[i] = w[perm[i]];
    EXPECT_LT((FitWeightedLogistic(shuffled.features(), Labels(shuffled), w_shuffled,
                                   Tight(), d.feature_names())
                   .Parameters() -
               base)
                  .lpNorm<Eigen::Infinity>(),
              1e-8);
  }
}

TEST(FitWeightedLogistic, ZeroWeightRowsAreIgnored) {
  std::mt19937_64 gen(24);
  const Dataset d = RandomDataset(gen, 120, 2, 1);
  const auto y = Labels(d);
  std::vector<double> w = Ones(d.rows());
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (i % 3 == 0) {
      w[i] = 0.0;
    } else {
      kept.push_back(i);
    }
  }
  const Dataset sub = d.Subset(kept);
  const auto a = FitWeightedLogistic(d.features(), y, w, Tight(), d.feature_names());
  const auto b = FitWeightedLogistic(sub.features(), Labels(sub), Ones(sub.rows()),
                                     Tight(), sub.feature_names());
  EXPECT_LT((a.Parameters() - b.Parameters()).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(FitWeightedLogistic, RecoversKnownParameters) {
  std::mt19937_64 gen(25);
  Eigen::VectorXd truth(4);
  truth << -0.5, 1.0, -2.0, 0.25;
  const Dataset d = LogisticData(gen, 10000, truth);
  const auto y = Labels(d);
  const FittedModel m =
      FitWeightedLogistic(d.features(), y, Ones(d.rows()), SolverConfig{}, d.feature_names());
  const Eigen::VectorXd est = m.Parameters();
  // Standard errors from the observed information at the estimate.
  Eigen::MatrixXd design(d.rows(), 4);
  design.col(0).setOnes();
  design.rightCols(3) = d.features();
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(4, 4);
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    const double p = OracleSigmoid(design.row(i).dot(est));
    info += p * (1.0 - p) * design.row(i).transpose() * design.row(i);
  }
  const Eigen::VectorXd se = info.inverse().diagonal().cwiseSqrt();
  for (Eigen::Index j = 0; j < 4; ++j) {
    EXPECT_LT(std::abs(est[j] - truth[j]), 3.0 * se[j]) << "parameter " << j;
  }
}

TEST(FitWeightedLogistic, GradientDescentAgreesWithNewton) {
  std::mt19937_64 gen(26);
  const Dataset d = RandomDataset(gen, 200, 2, 1);
  const auto y = Labels(d);
  SolverConfig gd;
  gd.step_rule = StepRule::kGradientDescent;
  gd.gradient_tolerance = 1e-10;
  gd.max_iterations = 100000;
  const auto a = FitWeightedLogistic(d.features(), y, Ones(d.rows()), gd, d.feature_names());
  const auto b =
      FitWeightedLogistic(d.features(), y, Ones(d.rows()), SolverConfig{}, d.feature_names());
  EXPECT_LT((a.Parameters() - b.Parameters()).lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST(FitWeightedLogistic, Errors) {
  std::mt19937_64 gen(27);
  const Dataset d = RandomDataset(gen, 60, 2, 1);
  const auto y = Labels(d);

  SolverConfig one;
  one.max_iterations = 1;
  const std::string msg = MessageOf(
      [&] { FitWeightedLogistic(d.features(), y, Ones(d.rows()), one, d.feature_names()); });
  EXPECT_THAT(msg, HasSubstr("no convergence"));
  EXPECT_THAT(msg, HasSubstr("gradient max-norm"));

  const Indicator all_ones(d.rows(), 1);
  EXPECT_EQ(CodeOf([&] {
              FitWeightedLogistic(d.features(), all_ones, Ones(d.rows()), SolverConfig{},
                                  d.feature_names());
            }),
            ErrorCode::kData);

  std::vector<double> negative = Ones(d.rows());
  negative[0] = -1.0;
  EXPECT_EQ(CodeOf([&] {
              FitWeightedLogistic(d.features(), y, negative, SolverConfig{}, d.feature_names());
            }),
            ErrorCode::kInvalidArgument);
}

TEST(FitWeightedLogistic, SeparationDetectedAndRidgeRecovers) {
  Eigen::MatrixXd x(20, 1);
  Indicator y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = i - 9.5;
    y[static_cast<std::size_t>(i)] = i >= 10;
  }
  const std::string msg =
      MessageOf([&] { FitWeightedLogistic(x, y, Ones(20), SolverConfig{}, {"x"}); });
  EXPECT_THAT(msg, HasSubstr("separation"));
  EXPECT_EQ(CodeOf([&] { FitWeightedLogistic(x, y, Ones(20), SolverConfig{}, {"x"}); }),
            ErrorCode::kSeparation);
  SolverConfig ridge;
  ridge.ridge = 1e-3;
  EXPECT_NO_THROW(FitWeightedLogistic(x, y, Ones(20), ridge, {"x"}));
}

TEST(FittedModel, PredictUsesInclusiveThreshold) {
  FittedModel m;
  m.intercept = 0.0;
  m.coefficients = Eigen::VectorXd::Ones(1);
  m.threshold = 0.5;
  Eigen::MatrixXd x(3, 1);
  x << -1.0, 0.0, 1.0;
  EXPECT_EQ(m.Predict(x), (Indicator{0, 1, 1}));
  const Eigen::VectorXd p = m.PredictProba(x);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  EXPECT_NEAR(p[2], OracleSigmoid(1.0), 1e-15);
}

TEST(FitPenalizedDirect, ZeroLambdaMatchesWeightedFit) {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 10; ++t) {
    const Dataset d = RandomDataset(gen, 300, 3, 2);
    const auto direct = FitPenalizedDirect(d, PenaltyWeights::Zero(2), SolverConfig{});
    const auto weighted = FitWeightedLogistic(d.features(), Labels(d), Ones(d.rows()),
                                              SolverConfig{}, d.feature_names());
    EXPECT_LT((direct.Parameters() - weighted.Parameters()).lpNorm<Eigen::Infinity>(), 1e-6);
  }
}

TEST(FitPenalizedDirect, StationaryAtZeroLambdaOptimum) {
  std::mt19937_64 gen(32);
  const Dataset d = RandomDataset(gen, 500, 3, 2);
  SolverConfig cfg;
  const auto m = FitPenalizedDirect(d, PenaltyWeights::Zero(2), cfg);
  const Eigen::VectorXd g = PenalizedGradient(m.Parameters(), d, PenaltyWeights::Zero(2));
  EXPECT_LE(g.lpNorm<Eigen::Infinity>() / static_cast<double>(d.rows()), cfg.gradient_tolerance);
}

Dataset SimulatedSetting1(std::size_t n, std::uint64_t seed) {
  SimSetting s;
  s.c = NamedSettingC(1);
  s.n = n;
  s.seed = seed;
  return Generate(s);
}

TEST(FitPenalizedDirect, GroupWeightLowersTrainingUnfairness) {
  const Dataset d = SimulatedSetting1(5000, 41);
  double previous = INFINITY;
  for (double lambda : {0.0, 0.02, 0.05, 0.1, 0.2}) {
    const auto m = FitPenalizedDirect(d, PenaltyWeights({lambda, 0.0, 0.0}), SolverConfig{});
    const Eigen::VectorXd p = m.PredictProba(d.features());
    const std::vector<double> probs(p.data(), p.data() + p.size());
    const double u = UnfairnessEop(probs, 0, d);
    EXPECT_LE(u, previous + 1e-9) << "lambda " << lambda;
    previous = u;
  }
}

TEST(FitPenalizedDirect, LargeWeightsRaiseGroupTprs) {
  const Dataset d = SimulatedSetting1(5000, 42);
  const auto base = FitPenalizedDirect(d, PenaltyWeights::Zero(3), SolverConfig{});
  // Large enough that the reference-positive cost 1 - s flips sign.
  const GroupStats stats = ComputeGroupStats(d);
  double per_unit = 0.0;
  for (auto n : stats.group_sizes) per_unit += static_cast<double>(n);
  const double lambda = 1.5 * static_cast<double>(stats.reference_positive_count) / per_unit;
  const auto fair = FitPenalizedDirect(d, PenaltyWeights({lambda, lambda, lambda}), SolverConfig{});
  const auto u_base = UnfairnessEoAll(base.Predict(d.features()), d);
  const auto u_fair = UnfairnessEoAll(fair.Predict(d.features()), d);
  for (std::size_t g = 0; g < 3; ++g) EXPECT_LT(u_fair[g], u_base[g]) << "group " << g;
}

}  // namespace
}  // namespace fairpen
