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

#include "fairpen/reduction.hpp"

#include <cmath>
#include <sstream>

#include "fairpen/error.hpp"
#include "format.hpp"

namespace fairpen {

ReducedProblem Reduce(const Dataset& d, const PenaltyWeights& lambdas) {
  if (lambdas.size() != d.num_groups()) {
    Fail(ErrorCode::kInvalidArgument, "penalty weight count does not match group count");
  }
  const GroupStats stats = ComputeGroupStats(d);
  if (stats.reference_positive_count == 0) {
    Fail(ErrorCode::kUndefinedMetric,
         "undefined unfairness denominator: no positive outcomes in reference group");
  }
  // Per-group coefficient lambda_g n_g / sum_{j in g} Y_j, and the summed
  // reference coefficient sum_g lambda_g n_g / sum_{k in r} Y_k.
  std::vector<double> group_coef(d.num_groups());
  double reference_coef = 0.0;
  for (std::size_t g = 0; g < d.num_groups(); ++g) {
    if (stats.group_positive_counts[g] == 0) {
      Fail(ErrorCode::kUndefinedMetric,
           "undefined unfairness denominator: no positive outcomes in group '" +
               d.group_names()[g] + "'");
    }
    const double scaled = lambdas[g] * static_cast<double>(stats.group_sizes[g]);
    group_coef[g] = scaled / static_cast<double>(stats.group_positive_counts[g]);
    reference_coef += scaled / static_cast<double>(stats.reference_positive_count);
  }

  const std::size_t n = d.rows();
  ReducedProblem out;
  out.sample_weights.resize(n);
  out.modified_outcomes.resize(n);
  out.positive_costs.resize(n);
  out.negative_costs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = d.outcomes()[i];
    double s = d.reference()[i] ? reference_coef : 0.0;
    for (std::size_t g = 0; g < d.num_groups(); ++g) {
      if (d.group(g)[i]) s -= group_coef[g];
    }
    const double c1 = 1.0 - y + y * s;
    const double c0 = y;
    out.positive_costs[i] = c1;
    out.negative_costs[i] = c0;
    out.sample_weights[i] = std::abs(c0 - c1);
    out.modified_outcomes[i] = c0 > c1;
  }
  return out;
}

FittedModel FitViaReduction(const Dataset& d, const PenaltyWeights& lambdas,
                            const SolverConfig& cfg, double threshold,
                            const std::optional<Eigen::VectorXd>& warm_start, FitInfo* info) {
  const ReducedProblem problem = Reduce(d, lambdas);
  FittedModel model = FitWeightedLogistic(d.features(), problem.modified_outcomes,
                                          problem.sample_weights, cfg, d.feature_names(),
                                          warm_start, info);
  model.threshold = threshold;
  return model;
}

std::string ReducedProblemCsv(const ReducedProblem& problem) {
  std::ostringstream os;
  os << "row,W,Y_prime,C1,C0\n";
  for (std::size_t i = 0; i < problem.sample_weights.size(); ++i) {
    os << i << ',' << FormatDouble(problem.sample_weights[i]) << ','
       << int{problem.modified_outcomes[i]} << ',' << FormatDouble(problem.positive_costs[i])
       << ',' << FormatDouble(problem.negative_costs[i]) << '\n';
  }
  return os.str();
}

}  // namespace fairpen
