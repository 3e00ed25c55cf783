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

// Three-group simulation study: synthetic data with overlapping groups whose
// outcome mechanisms differ from the reference group, replicated searches,
// and percentile / frontier summaries of the results.

#ifndef FAIRPEN_SIMULATE_HPP_
#define FAIRPEN_SIMULATE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairpen/data.hpp"
#include "fairpen/search.hpp"

namespace fairpen {

struct SimSetting {
  // c0..c2 scale each group's base membership probability, c3..c5 the X6 term.
  std::array<double, 6> c{0.2, 0.2, 0.2, 0.02, 0.02, 0.02};
  std::size_t n = 100000;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Settings 1 (moderate groups), 2 (small group A) and 3 (all groups small).
std::array<double, 6> NamedSettingC(int setting);

// Features X1..X9, groups A, B, C; the reference group is every row in no
// group.
//
//   X1, X2 ~ N(30, 15);  X3, X4 ~ Poisson(15);  X5..X9 ~ Bern(.2,.4,.6,.8,.95)
//   A ~ Bern(clamp(c0 (X9 + 0.1) + c3 X6 + N(0, 0.02)))
//   B ~ Bern(clamp(c1 (X7 + 0.05) + c4 X6 + N(0, 0.02)))
//   C ~ Bern(clamp(c2 (X8 + 0.4) + c5 X6 + N(0, 0.02)))
//   Y ~ Bern(clamp(Phi(X1/30 - X2/15 + 3 X3/50 - X4/25
//                      + (2^(X5+X6) + 6 X7 + 10 X8 X9 + 8 X3 A + 6 X4 B
//                         + C N(60, 2)) / 100 + N(0, 1))))
//
// Normal parameters are (mean, standard deviation); Phi is the standard
// normal CDF.
Dataset Generate(const SimSetting& setting);

struct OutcomeMetrics {
  double accuracy = 0.0;
  double population_weighted = 0.0;
  double group_weighted = 0.0;
  double maximum = 0.0;
};

struct VariantOutcome {
  ScoreConfig config;
  OutcomeMetrics metrics;
  PenaltyWeights lambdas;
};

struct ReplicationSummary {
  std::size_t replication = 0;
  std::vector<VariantOutcome> per_variant;
  OutcomeMetrics baseline;
};

struct ReplicationOptions {
  std::size_t replications = 1;
  // Feature to leave out of every fit (misspecification runs).
  std::optional<std::string> drop_column;
  // Threshold for the unpenalized comparison model.
  double baseline_threshold = 0.5;
};

// Replication r trains on a fresh draw keyed by (seed, r), searches with a
// seed keyed by (seed, r), and evaluates every selected model and the
// baseline on an independent draw of the same size.
std::vector<ReplicationSummary> RunReplications(const SimSetting& setting,
                                                const ReplicationOptions& options,
                                                const SearchConfig& search,
                                                const SolverConfig& solver, int threads = 1);

// Signed U_EO synthesized three ways, plus accuracy, on hard predictions.
OutcomeMetrics EvaluateOutcome(const FittedModel& model, const Dataset& d);

// Linear-interpolation percentile (q in [0, 1]) of unsorted values.
double Percentile(std::vector<double> values, double q);

struct QuantileRow {
  std::string variant;  // ScoreConfig::Name() or "baseline"
  std::string metric;   // accuracy, U_PW, U_GW, U_Max, lambda_<group>
  double p25 = 0.0;
  double median = 0.0;
  double p75 = 0.0;
};

std::vector<QuantileRow> Summarize(const std::vector<ReplicationSummary>& reps,
                                   const std::vector<std::string>& group_names);

struct FrontierPoint {
  double accuracy = 0.0;
  double unfairness = 0.0;
};

// Indices of the points no other point beats on both axes (higher accuracy,
// lower unfairness), in input order. Exact duplicates are all kept.
std::vector<std::size_t> ParetoFrontier(const std::vector<FrontierPoint>& points);

}  // namespace fairpen

#endif  // FAIRPEN_SIMULATE_HPP_
