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

// Random search over penalty-weight vectors with k-fold cross-validation.
// Every score variant is evaluated on the same candidates and folds, so one
// search selects a penalty vector for each variant at once.

#ifndef FAIRPEN_SEARCH_HPP_
#define FAIRPEN_SEARCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairpen/data.hpp"
#include "fairpen/model.hpp"
#include "fairpen/scoring.hpp"

namespace fairpen {

struct SearchConfig {
  int num_candidates = 40;
  double log10_lower = -3.0;
  double log10_upper = 1.0;
  int folds = 3;
  std::uint64_t seed = 0;
  bool stratify = true;
  std::vector<ScoreConfig> score_variants;

  void Validate() const;
};

// alpha in {0.1, ..., 0.9, 0.99} crossed with the three syntheses.
std::vector<ScoreConfig> DefaultScoreGrid(double threshold = 0.5);

// num_candidates vectors with lambda_g = 10^u, u ~ U(log10_lower, log10_upper)
// independently per group and candidate.
std::vector<PenaltyWeights> DrawCandidates(const SearchConfig& cfg, std::size_t num_groups);

// Validation index sets of a k-fold partition, each sorted ascending. With
// `stratify` the positive and negative rows are dealt out separately so each
// fold keeps the overall outcome prevalence.
std::vector<std::vector<std::size_t>> MakeFolds(std::span<const std::uint8_t> outcomes,
                                                int folds, std::uint64_t seed,
                                                bool stratify = true);

struct FoldEvaluation {
  double accuracy = 0.0;
  std::vector<double> per_group_unfairness;
};

struct CandidateRecord {
  PenaltyWeights lambdas;
  // Mean CV score per variant, in variant order. -inf when the fit failed.
  std::vector<double> mean_scores;
  // Fold diagnostics at the first variant's threshold.
  std::vector<FoldEvaluation> folds;
  std::optional<std::string> failure;
};

struct VariantResult {
  ScoreConfig config;
  PenaltyWeights best_lambdas;
  double best_score = 0.0;
  std::size_t candidate_index = 0;
  FittedModel model;  // refit on the full data
};

struct SearchResult {
  std::vector<VariantResult> per_variant;
  std::vector<CandidateRecord> all_candidates;
  std::vector<FoldEvaluation> baseline_folds;
  FittedModel baseline_model;  // unpenalized, full data
};

SearchResult RunSearch(const Dataset& d, const SearchConfig& cfg, const SolverConfig& solver,
                       int threads = 1);

}  // namespace fairpen

#endif  // FAIRPEN_SEARCH_HPP_
