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

#include "fairpen/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "fairpen/error.hpp"

namespace fairpen {
namespace {

// Positive-outcome-weighted mean of `score` over rows where `member` is set.
template <typename T>
double PositiveRate(std::span<const T> score, std::span<const std::uint8_t> member,
                    std::span<const std::uint8_t> y, const std::string& who) {
  double numerator = 0.0;
  std::int64_t positives = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (member[i] && y[i]) {
      numerator += static_cast<double>(score[i]);
      ++positives;
    }
  }
  if (positives == 0) {
    Fail(ErrorCode::kUndefinedMetric,
         "undefined unfairness denominator: no positive outcomes in " + who);
  }
  return numerator / static_cast<double>(positives);
}

template <typename T>
double Unfairness(std::span<const T> score, std::size_t group, const Dataset& d) {
  if (group >= d.num_groups()) Fail(ErrorCode::kInvalidArgument, "group index out of range");
  if (score.size() != d.rows()) {
    Fail(ErrorCode::kInvalidArgument, "prediction length does not match dataset rows");
  }
  const double ref = PositiveRate(score, d.reference(), d.outcomes(), "reference group");
  const double grp =
      PositiveRate(score, d.group(group), d.outcomes(), "group '" + d.group_names()[group] + "'");
  return ref - grp;
}

}  // namespace

std::string_view SynthesisName(Synthesis s) {
  switch (s) {
    case Synthesis::kPopulationWeighted:
      return "population_weighted";
    case Synthesis::kGroupWeighted:
      return "group_weighted";
    case Synthesis::kMaximum:
      return "maximum";
  }
  return "unknown";
}

Synthesis ParseSynthesis(std::string_view name) {
  for (auto s : {Synthesis::kPopulationWeighted, Synthesis::kGroupWeighted, Synthesis::kMaximum}) {
    if (SynthesisName(s) == name) return s;
  }
  Fail(ErrorCode::kConfig, "unknown synthesis '" + std::string(name) + "'");
}

double SynthesizedUnfairness::Get(Synthesis s) const {
  switch (s) {
    case Synthesis::kPopulationWeighted:
      return population_weighted;
    case Synthesis::kGroupWeighted:
      return group_weighted;
    case Synthesis::kMaximum:
      return maximum;
  }
  return 0.0;
}

double UnfairnessEo(std::span<const std::uint8_t> predictions, std::size_t group,
                    const Dataset& d) {
  for (auto v : predictions) {
    if (v > 1) Fail(ErrorCode::kInvalidArgument, "predictions must be 0 or 1");
  }
  return Unfairness(predictions, group, d);
}

double UnfairnessEop(std::span<const double> probabilities, std::size_t group,
                     const Dataset& d) {
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument, "probability outside [0, 1]");
    }
  }
  return Unfairness(probabilities, group, d);
}

std::vector<double> UnfairnessEoAll(std::span<const std::uint8_t> predictions,
                                    const Dataset& d) {
  std::vector<double> out(d.num_groups());
  for (std::size_t g = 0; g < d.num_groups(); ++g) out[g] = UnfairnessEo(predictions, g, d);
  return out;
}

SynthesizedUnfairness Synthesize(std::span<const double> per_group, const GroupStats& stats) {
  if (per_group.empty()) Fail(ErrorCode::kInvalidArgument, "empty group list");
  if (per_group.size() != stats.group_sizes.size()) {
    Fail(ErrorCode::kInvalidArgument, "per-group unfairness length does not match group count");
  }
  double weighted = 0.0, sum = 0.0, total = 0.0;
  double maximum = per_group[0];
  for (std::size_t g = 0; g < per_group.size(); ++g) {
    const auto size = static_cast<double>(stats.group_sizes[g]);
    weighted += size * per_group[g];
    total += size;
    sum += per_group[g];
    maximum = std::max(maximum, per_group[g]);
  }
  if (total <= 0.0) Fail(ErrorCode::kUndefinedMetric, "all groups are empty");
  return {weighted / total, sum / static_cast<double>(per_group.size()), maximum};
}

ClassificationMetrics ComputeClassificationMetrics(std::span<const std::uint8_t> outcomes,
                                                   std::span<const std::uint8_t> predictions) {
  if (outcomes.empty()) Fail(ErrorCode::kInvalidArgument, "no rows to evaluate");
  if (outcomes.size() != predictions.size()) {
    Fail(ErrorCode::kInvalidArgument, "outcome and prediction lengths differ");
  }
  ClassificationMetrics m;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const bool y = outcomes[i] != 0, yhat = predictions[i] != 0;
    if (y && yhat) ++m.true_positives;
    else if (y) ++m.false_negatives;
    else if (yhat) ++m.false_positives;
    else ++m.true_negatives;
  }
  const auto n = static_cast<double>(outcomes.size());
  m.accuracy = static_cast<double>(m.true_positives + m.true_negatives) / n;
  if (const auto pos = m.true_positives + m.false_negatives; pos > 0) {
    m.sensitivity = static_cast<double>(m.true_positives) / static_cast<double>(pos);
  }
  if (const auto neg = m.true_negatives + m.false_positives; neg > 0) {
    m.specificity = static_cast<double>(m.true_negatives) / static_cast<double>(neg);
  }
  return m;
}

Indicator ThresholdPredictions(std::span<const double> probabilities, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
  }
  Indicator out(probabilities.size());
  std::transform(probabilities.begin(), probabilities.end(), out.begin(),
                 [threshold](double p) { return static_cast<std::uint8_t>(p >= threshold); });
  return out;
}

}  // namespace fairpen
