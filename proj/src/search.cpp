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

#include "fairpen/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "fairpen/error.hpp"
#include "fairpen/parallel.hpp"
#include "fairpen/random.hpp"
#include "fairpen/reduction.hpp"

namespace fairpen {
namespace {

void Shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.Below(i)]);
  }
}

struct FoldData {
  Dataset train;
  Dataset valid;
  FittedModel baseline;
  std::vector<ModelEvaluation> baseline_eval;  // per distinct threshold
};

void CheckSplit(const Dataset& split, std::size_t fold, const char* which) {
  const GroupStats stats = ComputeGroupStats(split);
  auto fail = [&](const std::string& who) {
    Fail(ErrorCode::kData, "fold " + std::to_string(fold) + ": " + who +
                               " has no positive outcomes in the " + which +
                               " split; enable stratification or use fewer folds");
  };
  if (stats.reference_positive_count == 0) fail("reference group");
  for (std::size_t g = 0; g < split.num_groups(); ++g) {
    if (stats.group_positive_counts[g] == 0) fail("group '" + split.group_names()[g] + "'");
  }
}

std::vector<ModelEvaluation> EvaluateAt(const Eigen::VectorXd& probabilities,
                                        const std::vector<double>& thresholds,
                                        const Dataset& valid) {
  std::vector<ModelEvaluation> out;
  const std::span<const double> probs(probabilities.data(),
                                      static_cast<std::size_t>(probabilities.size()));
  for (double t : thresholds) out.push_back(EvaluatePredictions(ThresholdPredictions(probs, t), valid));
  return out;
}

}  // namespace

void SearchConfig::Validate() const {
  if (num_candidates <= 0) Fail(ErrorCode::kConfig, "search.num_candidates must be positive");
  if (!(log10_lower < log10_upper)) {
    Fail(ErrorCode::kConfig, "search.log10_lower must be below search.log10_upper");
  }
  if (!std::isfinite(log10_lower) || !std::isfinite(log10_upper)) {
    Fail(ErrorCode::kConfig, "search bounds must be finite");
  }
  if (folds < 2) Fail(ErrorCode::kConfig, "search.folds must be at least 2");
  for (const auto& v : score_variants) v.Validate();
}

std::vector<ScoreConfig> DefaultScoreGrid(double threshold) {
  std::vector<ScoreConfig> grid;
  const double alphas[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
  for (auto s : {Synthesis::kPopulationWeighted, Synthesis::kGroupWeighted, Synthesis::kMaximum}) {
    for (double a : alphas) grid.push_back({a, s, threshold});
  }
  return grid;
}

std::vector<PenaltyWeights> DrawCandidates(const SearchConfig& cfg, std::size_t num_groups) {
  Rng rng(cfg.seed, {static_cast<std::uint64_t>(StreamTag::kCandidates)});
  std::vector<PenaltyWeights> out;
  out.reserve(static_cast<std::size_t>(cfg.num_candidates));
  for (int c = 0; c < cfg.num_candidates; ++c) {
    std::vector<double> lambdas(num_groups);
    for (double& l : lambdas) l = std::pow(10.0, rng.Uniform(cfg.log10_lower, cfg.log10_upper));
    out.emplace_back(std::move(lambdas));
  }
  return out;
}

std::vector<std::vector<std::size_t>> MakeFolds(std::span<const std::uint8_t> outcomes,
                                                int folds, std::uint64_t seed, bool stratify) {
  if (folds < 2) Fail(ErrorCode::kInvalidArgument, "need at least 2 folds");
  if (static_cast<std::size_t>(folds) > outcomes.size()) {
    Fail(ErrorCode::kInvalidArgument, "more folds (" + std::to_string(folds) + ") than rows (" +
                                          std::to_string(outcomes.size()) + ")");
  }
  Rng rng(seed, {static_cast<std::uint64_t>(StreamTag::kFolds)});
  std::vector<std::vector<std::size_t>> strata(stratify ? 2 : 1);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    strata[stratify ? outcomes[i] : 0].push_back(i);
  }
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(folds));
  // The deal position carries across strata so fold sizes differ by at most one.
  std::size_t position = 0;
  for (auto& stratum : strata) {
    Shuffle(stratum, rng);
    for (std::size_t i : stratum) out[position++ % out.size()].push_back(i);
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

SearchResult RunSearch(const Dataset& d, const SearchConfig& cfg_in, const SolverConfig& solver,
                       int threads) {
  SearchConfig cfg = cfg_in;
  if (cfg.score_variants.empty()) cfg.score_variants = DefaultScoreGrid();
  cfg.Validate();
  solver.Validate();

  std::vector<double> thresholds;
  std::vector<std::size_t> threshold_of(cfg.score_variants.size());
  for (std::size_t v = 0; v < cfg.score_variants.size(); ++v) {
    const double t = cfg.score_variants[v].threshold;
    auto it = std::find(thresholds.begin(), thresholds.end(), t);
    threshold_of[v] = static_cast<std::size_t>(it - thresholds.begin());
    if (it == thresholds.end()) thresholds.push_back(t);
  }

  const auto validation = MakeFolds(d.outcomes(), cfg.folds, cfg.seed, cfg.stratify);
  const std::size_t k = validation.size();
  const PenaltyWeights zero = PenaltyWeights::Zero(d.num_groups());

  std::vector<std::optional<FoldData>> folds(k);
  ParallelFor(k, threads, [&](std::size_t f) {
    std::vector<std::size_t> train_rows;
    train_rows.reserve(d.rows() - validation[f].size());
    for (std::size_t j = 0; j < k; ++j) {
      if (j != f) train_rows.insert(train_rows.end(), validation[j].begin(), validation[j].end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    Dataset train = d.Subset(train_rows);
    Dataset valid = d.Subset(validation[f]);
    CheckSplit(train, f, "training");
    CheckSplit(valid, f, "validation");
    FittedModel baseline = FitViaReduction(train, zero, solver);
    auto eval = EvaluateAt(baseline.PredictProba(valid.features()), thresholds, valid);
    folds[f] = FoldData{std::move(train), std::move(valid), std::move(baseline), std::move(eval)};
  });

  const auto candidates = DrawCandidates(cfg, d.num_groups());
  const std::size_t num_candidates = candidates.size();
  // evaluations[c * k + f][threshold]
  std::vector<std::vector<ModelEvaluation>> evaluations(num_candidates * k);
  std::vector<std::optional<std::string>> failures(num_candidates * k);
  ParallelFor(num_candidates * k, threads, [&](std::size_t task) {
    const std::size_t c = task / k, f = task % k;
    const FoldData& fold = *folds[f];
    try {
      const FittedModel model = FitViaReduction(fold.train, candidates[c], solver, 0.5,
                                                fold.baseline.Parameters());
      evaluations[task] = EvaluateAt(model.PredictProba(fold.valid.features()), thresholds,
                                     fold.valid);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kConvergence && e.code() != ErrorCode::kSeparation &&
          e.code() != ErrorCode::kData) {
        throw;
      }
      failures[task] = "fold " + std::to_string(f) + ": " + e.what();
    }
  });

  SearchResult result;
  for (const auto& fold : folds) {
    const auto& e = fold->baseline_eval.front();
    result.baseline_folds.push_back({e.accuracy, e.per_group_unfairness});
  }
  const std::size_t num_variants = cfg.score_variants.size();
  const double kFailed = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < num_candidates; ++c) {
    CandidateRecord rec;
    rec.lambdas = candidates[c];
    rec.mean_scores.assign(num_variants, 0.0);
    for (std::size_t f = 0; f < k && !rec.failure; ++f) rec.failure = failures[c * k + f];
    if (rec.failure) {
      rec.mean_scores.assign(num_variants, kFailed);
    } else {
      for (std::size_t f = 0; f < k; ++f) {
        const auto& e = evaluations[c * k + f].front();
        rec.folds.push_back({e.accuracy, e.per_group_unfairness});
      }
      for (std::size_t v = 0; v < num_variants; ++v) {
        double total = 0.0;
        for (std::size_t f = 0; f < k; ++f) {
          const std::size_t t = threshold_of[v];
          total += Score(evaluations[c * k + f][t], folds[f]->baseline_eval[t],
                         cfg.score_variants[v])
                       .score;
        }
        rec.mean_scores[v] = total / static_cast<double>(k);
      }
    }
    result.all_candidates.push_back(std::move(rec));
  }

  std::vector<std::size_t> best(num_variants, 0);
  for (std::size_t v = 0; v < num_variants; ++v) {
    for (std::size_t c = 1; c < num_candidates; ++c) {
      if (result.all_candidates[c].mean_scores[v] > result.all_candidates[best[v]].mean_scores[v]) {
        best[v] = c;
      }
    }
    if (result.all_candidates[best[v]].mean_scores[v] == kFailed) {
      Fail(ErrorCode::kConvergence,
           "every penalty candidate failed to fit; first failure: candidate 0, " +
               *result.all_candidates[0].failure);
    }
  }

  result.baseline_model = FitViaReduction(d, zero, solver);
  // One full-data refit per distinct selected candidate.
  std::vector<std::size_t> distinct(best.begin(), best.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<FittedModel> refits(distinct.size());
  const Eigen::VectorXd warm = result.baseline_model.Parameters();
  ParallelFor(distinct.size(), threads, [&](std::size_t i) {
    refits[i] = FitViaReduction(d, candidates[distinct[i]], solver, 0.5, warm);
  });
  for (std::size_t v = 0; v < num_variants; ++v) {
    const std::size_t c = best[v];
    VariantResult vr;
    vr.config = cfg.score_variants[v];
    vr.best_lambdas = candidates[c];
    vr.best_score = result.all_candidates[c].mean_scores[v];
    vr.candidate_index = c;
    vr.model = refits[static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), c) - distinct.begin())];
    vr.model.threshold = vr.config.threshold;
    result.per_variant.push_back(std::move(vr));
  }
  result.baseline_model.threshold = cfg.score_variants.front().threshold;
  return result;
}

}  // namespace fairpen
