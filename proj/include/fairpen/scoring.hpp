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

// Candidate score: s = -(alpha * U_RS + (1 - alpha) * A_RS), where accuracy
// and clamped, synthesized TPR disparity are both rescaled against the
// unpenalized model evaluated on the same rows. Higher is better.

#ifndef FAIRPEN_SCORING_HPP_
#define FAIRPEN_SCORING_HPP_

#include <span>
#include <string>
#include <vector>

#include "fairpen/data.hpp"
#include "fairpen/metrics.hpp"

namespace fairpen {

struct ScoreConfig {
  double alpha = 0.5;
  Synthesis synthesis = Synthesis::kPopulationWeighted;
  double threshold = 0.5;

  void Validate() const;
  // Stable label, e.g. "population_weighted@0.5".
  std::string Name() const;

  friend bool operator==(const ScoreConfig&, const ScoreConfig&) = default;
};

// What the score needs to know about a model's hard predictions on some rows.
struct ModelEvaluation {
  double accuracy = 0.0;
  std::vector<double> per_group_unfairness;  // signed U_EO
  GroupStats stats;
};

ModelEvaluation EvaluatePredictions(std::span<const std::uint8_t> predictions, const Dataset& d);

struct ScoreResult {
  double score = 0.0;
  double rescaled_accuracy = 0.0;
  double rescaled_unfairness = 0.0;
  double raw_accuracy = 0.0;
  std::vector<double> per_group_unfairness;  // clamped at 0
  // Baseline had zero clamped unfairness, so U_RS was set by convention.
  bool degenerate_baseline = false;
};

// (A_UP - A) / (A_UP - 0.5). Throws kConfig when baseline <= 0.5.
double RescaledAccuracy(double candidate_accuracy, double baseline_accuracy);

// Ratio of clamped, synthesized unfairness of candidate over baseline. A
// zero denominator gives 0 when the candidate is also fully fair, else 1.
double RescaledUnfairness(std::span<const double> candidate, std::span<const double> baseline,
                          const GroupStats& stats, Synthesis synthesis,
                          bool* degenerate = nullptr);

ScoreResult Score(const ModelEvaluation& candidate, const ModelEvaluation& baseline,
                  const ScoreConfig& cfg);

}  // namespace fairpen

#endif  // FAIRPEN_SCORING_HPP_
