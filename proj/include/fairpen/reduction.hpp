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

// Rewrites the TPR-disparity penalized problem as cost-sensitive
// classification and then as weighted classification with modified labels.
//
// With s_i = sum_g lambda_g n_g (I_ri / sum_r Y - I_gi / sum_g Y), row i has
// positive-classification cost C1_i = 1 - Y_i + Y_i s_i, negative cost
// C0_i = Y_i, weight W_i = |C0_i - C1_i| and label Y'_i = [C0_i > C1_i].
// Reference rows collect the reference term of every group's penalty; a row
// in several groups collects each group's term.

#ifndef FAIRPEN_REDUCTION_HPP_
#define FAIRPEN_REDUCTION_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairpen/data.hpp"
#include "fairpen/model.hpp"

namespace fairpen {

struct ReducedProblem {
  std::vector<double> sample_weights;
  Indicator modified_outcomes;
  std::vector<double> positive_costs;
  std::vector<double> negative_costs;
};

// Throws kUndefinedMetric when the reference or a group has no positive
// outcome and kInvalidArgument on a weight-count mismatch.
ReducedProblem Reduce(const Dataset& d, const PenaltyWeights& lambdas);

// Production fitting path: Reduce() followed by a weighted logistic fit.
FittedModel FitViaReduction(const Dataset& d, const PenaltyWeights& lambdas,
                            const SolverConfig& cfg, double threshold = 0.5,
                            const std::optional<Eigen::VectorXd>& warm_start = std::nullopt,
                            FitInfo* info = nullptr);

// Audit dump with columns row,W,Y_prime,C1,C0.
std::string ReducedProblemCsv(const ReducedProblem& problem);

}  // namespace fairpen

#endif  // FAIRPEN_REDUCTION_HPP_
