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

// Logistic models: weighted maximum likelihood (the production fitting path
// once the fairness penalty has been reduced to sample weights) and direct
// minimization of the TPR-disparity penalized cross-entropy, kept as a
// reference solver.
//
// Parameter vectors passed to PenalizedLoss/PenalizedGradient are laid out
// as [intercept, beta_1, ..., beta_p]. The intercept never enters a penalty.

#ifndef FAIRPEN_MODEL_HPP_
#define FAIRPEN_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairpen/data.hpp"

namespace fairpen {

class PenaltyWeights {
 public:
  PenaltyWeights() = default;
  // Throws kInvalidArgument on a negative or non-finite weight.
  explicit PenaltyWeights(std::vector<double> lambdas);

  static PenaltyWeights Zero(std::size_t num_groups) {
    return PenaltyWeights(std::vector<double>(num_groups, 0.0));
  }

  std::size_t size() const { return lambdas_.size(); }
  double operator[](std::size_t g) const { return lambdas_[g]; }
  const std::vector<double>& values() const { return lambdas_; }

  friend bool operator==(const PenaltyWeights&, const PenaltyWeights&) = default;

 private:
  std::vector<double> lambdas_;
};

enum class StepRule {
  // Damped Newton: Hessian step (shifted toward the gradient when the Hessian
  // is not positive definite) with Armijo backtracking.
  kNewton,
  // Steepest descent with Armijo backtracking.
  kGradientDescent,
};

struct SolverConfig {
  int max_iterations = 10000;
  // Convergence when the max-norm of the per-row mean gradient is at or
  // below this value.
  double gradient_tolerance = 1e-8;
  StepRule step_rule = StepRule::kNewton;
  // Optional L2 penalty on the slopes (never the intercept).
  double ridge = 0.0;

  void Validate() const;
};

struct FittedModel {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double threshold = 0.5;
  std::vector<std::string> feature_names;

  // [intercept, coefficients...]
  Eigen::VectorXd Parameters() const;

  Eigen::VectorXd PredictProba(const Eigen::MatrixXd& features) const;
  Indicator Predict(const Eigen::MatrixXd& features) const;
};

struct FitInfo {
  int iterations = 0;
  double gradient_norm = 0.0;
};

// Minimizes sum_i w_i * CE(labels_i, sigmoid(intercept + x_i . beta)).
// Rows with zero weight are ignored. Throws kData when one label class has
// no positive weight, kConvergence when max_iterations is exhausted and
// kSeparation when the data are (quasi-)separable.
FittedModel FitWeightedLogistic(const Eigen::MatrixXd& features,
                                std::span<const std::uint8_t> labels,
                                std::span<const double> weights, const SolverConfig& cfg,
                                const std::vector<std::string>& feature_names,
                                const std::optional<Eigen::VectorXd>& warm_start = std::nullopt,
                                FitInfo* info = nullptr);

// Binary cross-entropy plus sum_g lambda_g n_g (mean_{r,Y=1} P - mean_{g,Y=1} P).
double PenalizedLoss(const Eigen::VectorXd& params, const Dataset& d,
                     const PenaltyWeights& lambdas);

// Exact derivative of PenalizedLoss with respect to params.
Eigen::VectorXd PenalizedGradient(const Eigen::VectorXd& params, const Dataset& d,
                                  const PenaltyWeights& lambdas);

// Minimizes PenalizedLoss directly.
FittedModel FitPenalizedDirect(const Dataset& d, const PenaltyWeights& lambdas,
                               const SolverConfig& cfg, double threshold = 0.5,
                               FitInfo* info = nullptr);

}  // namespace fairpen

#endif  // FAIRPEN_MODEL_HPP_
