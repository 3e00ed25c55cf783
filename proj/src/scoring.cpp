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

#include "fairpen/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "fairpen/error.hpp"
#include "format.hpp"

namespace fairpen {
namespace {

std::vector<double> Clamped(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v = std::max(v, 0.0);
  return out;
}

}  // namespace

void ScoreConfig::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) Fail(ErrorCode::kConfig, "alpha must lie in [0, 1]");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    Fail(ErrorCode::kConfig, "threshold must lie in (0, 1)");
  }
}

std::string ScoreConfig::Name() const {
  std::string name = std::string(SynthesisName(synthesis)) + "@" + FormatDouble(alpha);
  if (threshold != 0.5) name += "#t" + FormatDouble(threshold);
  return name;
}

ModelEvaluation EvaluatePredictions(std::span<const std::uint8_t> predictions,
                                    const Dataset& d) {
  ModelEvaluation e;
  e.accuracy = ComputeClassificationMetrics(d.outcomes(), predictions).accuracy;
  e.per_group_unfairness = UnfairnessEoAll(predictions, d);
  e.stats = ComputeGroupStats(d);
  return e;
}

double RescaledAccuracy(double candidate_accuracy, double baseline_accuracy) {
  if (!(baseline_accuracy > 0.5)) {
    Fail(ErrorCode::kConfig,
         "baseline accuracy must exceed 0.5 for accuracy rescaling (got " +
             FormatDouble(baseline_accuracy) + ")");
  }
  return (baseline_accuracy - candidate_accuracy) / (baseline_accuracy - 0.5);
}

double RescaledUnfairness(std::span<const double> candidate, std::span<const double> baseline,
                          const GroupStats& stats, Synthesis synthesis, bool* degenerate) {
  if (candidate.size() != baseline.size()) {
    Fail(ErrorCode::kInvalidArgument, "candidate and baseline group counts differ");
  }
  const double numerator = Synthesize(Clamped(candidate), stats).Get(synthesis);
  const double denominator = Synthesize(Clamped(baseline), stats).Get(synthesis);
  if (degenerate) *degenerate = denominator == 0.0;
  if (denominator == 0.0) return numerator == 0.0 ? 0.0 : 1.0;
  return numerator / denominator;
}

ScoreResult Score(const ModelEvaluation& candidate, const ModelEvaluation& baseline,
                  const ScoreConfig& cfg) {
  cfg.Validate();
  ScoreResult r;
  r.raw_accuracy = candidate.accuracy;
  r.rescaled_accuracy = RescaledAccuracy(candidate.accuracy, baseline.accuracy);
  r.rescaled_unfairness =
      RescaledUnfairness(candidate.per_group_unfairness, baseline.per_group_unfairness,
                         candidate.stats, cfg.synthesis, &r.degenerate_baseline);
  r.per_group_unfairness = Clamped(candidate.per_group_unfairness);
  r.score = -(cfg.alpha * r.rescaled_unfairness + (1.0 - cfg.alpha) * r.rescaled_accuracy);
  return r;
}

}  // namespace fairpen
