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
#include "test_util.hpp"

namespace fairpen {
namespace {

using ::testing::HasSubstr;
using namespace fairpen::testing;

GroupStats Sizes(std::vector<std::int64_t> sizes) {
  GroupStats s;
  s.group_sizes = std::move(sizes);
  s.group_positive_counts.assign(s.group_sizes.size(), 1);
  return s;
}

TEST(UnfairnessEo, PerfectPredictionsGiveZero) {
  std::mt19937_64 gen(1);
  const Dataset d = RandomDataset(gen, 20, 1, 2);
  const Indicator y(d.outcomes().begin(), d.outcomes().end());
  EXPECT_EQ(UnfairnessEo(y, 0, d), 0.0);
  EXPECT_EQ(UnfairnessEo(y, 1, d), 0.0);
}

TEST(UnfairnessEo, DirectArithmetic) {
  // Rows 0-1 reference positives, rows 2-3 group positives, row 4 a negative.
  const Dataset d = MakeDataset({1, 1, 1, 1, 0}, {{0, 0, 1, 1, 1}});
  EXPECT_DOUBLE_EQ(UnfairnessEo(Indicator{1, 1, 1, 0, 1}, 0, d), 0.5);
}

TEST(UnfairnessEo, UndefinedDenominatorNamesGroup) {
  const Dataset d = Dataset::Create(Eigen::MatrixXd::Zero(3, 1), {"x"}, {1, 0, 1},
                                    {{0, 1, 0}}, {"Hispanic"});
  const std::string msg = MessageOf([&] { UnfairnessEo(Indicator{1, 1, 1}, 0, d); });
  EXPECT_THAT(msg, HasSubstr("undefined unfairness denominator"));
  EXPECT_THAT(msg, HasSubstr("Hispanic"));
  EXPECT_EQ(CodeOf([&] { UnfairnessEo(Indicator{1, 1, 1}, 0, d); }), ErrorCode::kUndefinedMetric);
  const Dataset no_ref = MakeDataset({0, 1}, {{0, 1}});
  EXPECT_THAT(MessageOf([&] { UnfairnessEo(Indicator{1, 1}, 0, no_ref); }),
              HasSubstr("reference"));
}

TEST(UnfairnessEop, ConstantProbabilitiesGiveZero) {
  std::mt19937_64 gen(2);
  const Dataset d = RandomDataset(gen, 25, 1, 3);
  const std::vector<double> p(d.rows(), 0.37);
  for (std::size_t g = 0; g < 3; ++g) EXPECT_NEAR(UnfairnessEop(p, g, d), 0.0, 1e-15);
}

TEST(UnfairnessEop, DirectArithmetic) {
  const Dataset d = MakeDataset({1, 1, 1, 0}, {{0, 0, 1, 1}});
  EXPECT_NEAR(UnfairnessEop(std::vector<double>{0.8, 0.6, 0.5, 0.9}, 0, d), 0.2, 1e-15);
}

TEST(UnfairnessEop, RejectsOutOfRangeProbability) {
  const Dataset d = MakeDataset({1, 1}, {{0, 1}});
  EXPECT_EQ(CodeOf([&] { UnfairnessEop(std::vector<double>{0.5, 1.2}, 0, d); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { UnfairnessEop(std::vector<double>{-0.1, 0.5}, 0, d); }),
            ErrorCode::kInvalidArgument);
}

TEST(Synthesize, Examples) {
  const double u1[] = {0.2, 0.4};
  auto s = Synthesize(u1, Sizes({10, 30}));
  EXPECT_DOUBLE_EQ(s.population_weighted, 0.35);
  EXPECT_DOUBLE_EQ(s.group_weighted, 0.3);
  EXPECT_DOUBLE_EQ(s.maximum, 0.4);

  const double u2[] = {0.123};
  s = Synthesize(u2, Sizes({7}));
  EXPECT_EQ(s.population_weighted, 0.123);
  EXPECT_EQ(s.group_weighted, 0.123);
  EXPECT_EQ(s.maximum, 0.123);

  const double u3[] = {-0.1, 0.3};
  s = Synthesize(u3, Sizes({50, 50}));
  EXPECT_DOUBLE_EQ(s.population_weighted, 0.1);
  EXPECT_DOUBLE_EQ(s.maximum, 0.3);

  EXPECT_EQ(CodeOf([] { Synthesize(std::span<const double>(), GroupStats{}); }),
            ErrorCode::kInvalidArgument);
}

TEST(Synthesize, AllEqual) {
  const double u[] = {0.25, 0.25, 0.25};
  const auto s = Synthesize(u, Sizes({3, 9, 100}));
  EXPECT_DOUBLE_EQ(s.population_weighted, 0.25);
  EXPECT_DOUBLE_EQ(s.group_weighted, 0.25);
  EXPECT_DOUBLE_EQ(s.maximum, 0.25);
  EXPECT_EQ(s.Get(Synthesis::kMaximum), s.maximum);
}

TEST(Synthesize, MaximumDominatesWhenNonnegative) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 100);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> values(4);
    std::vector<std::int64_t> sizes(4);
    for (auto& v : values) v = u(gen);
    for (auto& n : sizes) n = size(gen);
    const auto s = Synthesize(values, Sizes(sizes));
    EXPECT_GE(s.maximum, s.population_weighted);
    EXPECT_GE(s.maximum, s.group_weighted);
  }
}

TEST(SynthesisNames, RoundTrip) {
  for (auto s : {Synthesis::kPopulationWeighted, Synthesis::kGroupWeighted, Synthesis::kMaximum}) {
    EXPECT_EQ(ParseSynthesis(SynthesisName(s)), s);
  }
  EXPECT_EQ(CodeOf([] { ParseSynthesis("median"); }), ErrorCode::kConfig);
}

TEST(ClassificationMetrics, Examples) {
  auto m = ComputeClassificationMetrics(Indicator{1, 0, 1, 0}, Indicator{1, 0, 0, 0});
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_DOUBLE_EQ(*m.sensitivity, 0.5);
  EXPECT_DOUBLE_EQ(*m.specificity, 1.0);

  m = ComputeClassificationMetrics(Indicator{1, 0, 1}, Indicator{1, 0, 1});
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(*m.sensitivity, 1.0);
  EXPECT_EQ(*m.specificity, 1.0);

  m = ComputeClassificationMetrics(Indicator{1, 1, 0, 0}, Indicator{0, 0, 0, 0});
  EXPECT_EQ(m.accuracy, 0.5);
  EXPECT_EQ(*m.sensitivity, 0.0);
  EXPECT_EQ(*m.specificity, 1.0);
}

TEST(ClassificationMetrics, UndefinedRatesAreMarked) {
  auto m = ComputeClassificationMetrics(Indicator{0, 0}, Indicator{1, 0});
  EXPECT_FALSE(m.sensitivity.has_value());
  EXPECT_DOUBLE_EQ(*m.specificity, 0.5);
  m = ComputeClassificationMetrics(Indicator{1, 1}, Indicator{1, 0});
  EXPECT_FALSE(m.specificity.has_value());
  EXPECT_EQ(CodeOf([] { ComputeClassificationMetrics(Indicator{}, Indicator{}); }),
            ErrorCode::kInvalidArgument);
}

TEST(ThresholdPredictions, Examples) {
  EXPECT_EQ(ThresholdPredictions(std::vector<double>{0.14, 0.15, 0.9}, 0.15),
            (Indicator{0, 1, 1}));
  EXPECT_EQ(ThresholdPredictions(std::vector<double>{0.49, 0.51}, 0.5), (Indicator{0, 1}));
  for (double t : {0.001, 0.5, 0.999}) {
    EXPECT_EQ(ThresholdPredictions(std::vector<double>{0.0, 0.0, 0.0}, t), (Indicator{0, 0, 0}));
  }
  for (double t : {0.0, 1.0, -1.0, std::nan("")}) {
    EXPECT_EQ(CodeOf([t] { ThresholdPredictions(std::vector<double>{0.3}, t); }),
              ErrorCode::kInvalidArgument);
  }
}

TEST(Metrics, EoEqualsEopOnBinaryScores) {
  std::mt19937_64 gen(8);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 100; ++t) {
    const Dataset d = RandomDataset(gen, 25, 1, 2);
    Indicator yhat(d.rows());
    for (auto& v : yhat) v = coin(gen);
    for (std::size_t g = 0; g < 2; ++g) {
      EXPECT_EQ(UnfairnessEo(yhat, g, d), UnfairnessEop(ToDouble(yhat), g, d));
    }
  }
}

TEST(Metrics, EoPermutationInvariantAndBounded) {
  std::mt19937_64 gen(9);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 100; ++t) {
    const Dataset d = RandomDataset(gen, 30, 1, 2);
    Indicator yhat(d.rows());
    for (auto& v : yhat) v = coin(gen);
    std::vector<std::size_t> perm(d.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    const Dataset shuffled = d.Subset(perm);
    Indicator yhat_shuffled(d.rows());
    for (std::size_t i = 0; i < perm.size(); ++i) yhat_shuffled[i] = yhat[perm[i]];
    for (std::size_t g = 0; g < 2; ++g) {
      const double u = UnfairnessEo(yhat, g, d);
      EXPECT_NEAR(UnfairnessEo(yhat_shuffled, g, shuffled), u, 1e-15);
      EXPECT_LE(std::abs(u), 1.0);
    }
  }
}

// Every metric against the loop oracles on 1,000 random instances.
TEST(Metrics, OracleEquivalence) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> rows(4, 30), groups(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const RawInstance r = RandomRaw(gen, rows(gen), 1, groups(gen));
    const Dataset d = ToDataset(r);
    Indicator yhat(d.rows());
    std::vector<double> prob(d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i) {
      prob[i] = unit(gen);
      yhat[i] = unit(gen) < 0.5;
    }
    std::vector<double> per_group, sizes;
    for (std::size_t g = 0; g < d.num_groups(); ++g) {
      const double eo = OracleUnfairness(ToDouble(yhat), r.y, r.groups[g], r.reference);
      const double eop = OracleUnfairness(prob, r.y, r.groups[g], r.reference);
      ASSERT_NEAR(UnfairnessEo(yhat, g, d), eo, 1e-12);
      ASSERT_NEAR(UnfairnessEop(prob, g, d), eop, 1e-12);
      per_group.push_back(eo);
      sizes.push_back(static_cast<double>(std::count(r.groups[g].begin(), r.groups[g].end(), 1)));
    }
    const auto synth = Synthesize(per_group, ComputeGroupStats(d));
    const auto oracle = OracleSynthesize(per_group, sizes);
    ASSERT_NEAR(synth.population_weighted, oracle.pw, 1e-12);
    ASSERT_NEAR(synth.group_weighted, oracle.gw, 1e-12);
    ASSERT_NEAR(synth.maximum, oracle.max, 1e-12);
    EXPECT_EQ(UnfairnessEoAll(yhat, d), per_group);

    const auto m = ComputeClassificationMetrics(r.y, yhat);
    const auto om = OracleMetrics(r.y, yhat);
    ASSERT_NEAR(m.accuracy, om.accuracy, 1e-12);
    ASSERT_EQ(m.sensitivity.has_value(), !std::isnan(om.sensitivity));
    ASSERT_EQ(m.specificity.has_value(), !std::isnan(om.specificity));
    if (m.sensitivity) ASSERT_NEAR(*m.sensitivity, om.sensitivity, 1e-12);
    if (m.specificity) ASSERT_NEAR(*m.specificity, om.specificity, 1e-12);
    ASSERT_EQ(m.true_positives + m.true_negatives + m.false_positives + m.false_negatives,
              static_cast<std::int64_t>(d.rows()));
    ASSERT_EQ(m.accuracy, static_cast<double>(m.true_positives + m.true_negatives) /
                              static_cast<double>(d.rows()));
  }
}

}  // namespace
}  // namespace fairpen
