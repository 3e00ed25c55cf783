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

// Equal-opportunity unfairness of a group relative to the reference group,
// its synthesis across groups, and confusion-matrix metrics.
//
// Unfairness is signed: reference TPR minus group TPR. Positive values mean
// the group's positives are recognized less often than the reference's.

#ifndef FAIRPEN_METRICS_HPP_
#define FAIRPEN_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairpen/data.hpp"

namespace fairpen {

enum class Synthesis { kPopulationWeighted, kGroupWeighted, kMaximum };

std::string_view SynthesisName(Synthesis s);
// Accepts the names returned by SynthesisName; throws kConfig otherwise.
Synthesis ParseSynthesis(std::string_view name);

struct SynthesizedUnfairness {
  double population_weighted = 0.0;
  double group_weighted = 0.0;
  double maximum = 0.0;

  double Get(Synthesis s) const;
};

struct ClassificationMetrics {
  double accuracy = 0.0;
  // Empty when the outcome vector has no positives (resp. negatives).
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::int64_t true_positives = 0;
  std::int64_t true_negatives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
};

// Reference TPR minus TPR of `group`, on hard predictions. Throws
// kUndefinedMetric when the group or the reference has no positive outcome.
double UnfairnessEo(std::span<const std::uint8_t> predictions, std::size_t group,
                    const Dataset& d);

// Same with predicted probabilities in place of hard predictions.
double UnfairnessEop(std::span<const double> probabilities, std::size_t group,
                     const Dataset& d);

// UnfairnessEo for every group, in group order.
std::vector<double> UnfairnessEoAll(std::span<const std::uint8_t> predictions,
                                    const Dataset& d);

SynthesizedUnfairness Synthesize(std::span<const double> per_group, const GroupStats& stats);

ClassificationMetrics ComputeClassificationMetrics(std::span<const std::uint8_t> outcomes,
                                                   std::span<const std::uint8_t> predictions);

// 1 iff probability >= threshold. Threshold must lie strictly inside (0, 1).
Indicator ThresholdPredictions(std::span<const double> probabilities, double threshold);

}  // namespace fairpen

#endif  // FAIRPEN_METRICS_HPP_
