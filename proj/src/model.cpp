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

#include "fairpen/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fairpen/error.hpp"

namespace fairpen {
namespace {

constexpr double kProbFloor = 1e-12;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;
// Any parameter beyond this magnitude means the likelihood has no finite
// maximizer.
constexpr double kDivergenceBound = 1e8;

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double CrossEntropy(bool y, double p) {
  return y ? -std::log(std::clamp(p, kProbFloor, 1.0 - kProbFloor))
           : -std::log(std::clamp(1.0 - p, kProbFloor, 1.0 - kProbFloor));
}

Eigen::MatrixXd WithIntercept(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd design(x.rows(), x.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(x.cols()) = x;
  return design;
}

Eigen::VectorXd Probabilities(const Eigen::MatrixXd& design, const Eigen::VectorXd& params) {
  Eigen::VectorXd z = design * params;
  return z.unaryExpr(&Sigmoid);
}

std::string FormatNorm(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Objective interface used by Minimize():
//   double Value(const VectorXd&)
//   void Derivatives(const VectorXd&, VectorXd* grad, MatrixXd* hess)  hess may be null
template <typename Objective>
Eigen::VectorXd Minimize(Objective& obj, Eigen::VectorXd params, const SolverConfig& cfg,
                         FitInfo* info) {
  const bool newton = cfg.step_rule == StepRule::kNewton;
  const Eigen::Index dim = params.size();
  Eigen::VectorXd grad(dim);
  Eigen::MatrixXd hess(dim, dim);
  double step = 1.0;
  double gnorm = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    const double f = obj.Value(params);
    obj.Derivatives(params, &grad, newton ? &hess : nullptr);
    gnorm = grad.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(f) || !std::isfinite(gnorm)) {
      Fail(ErrorCode::kConvergence, "objective became non-finite at iteration " +
                                        std::to_string(iter));
    }
    if (gnorm <= cfg.gradient_tolerance) {
      if (info) *info = {iter, gnorm};
      return params;
    }
    if (params.lpNorm<Eigen::Infinity>() > kDivergenceBound) {
      Fail(ErrorCode::kSeparation,
           "coefficients diverged (perfect separation); add a ridge penalty or review the data");
    }

    Eigen::VectorXd direction;
    if (newton) {
      // Shift the Hessian until it is positive definite.
      const double scale = std::max(hess.diagonal().cwiseAbs().maxCoeff(), 1e-300);
      double shift = 0.0;
      for (int attempt = 0; attempt < 40; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(hess + shift * Eigen::MatrixXd::Identity(dim, dim));
        if (llt.info() == Eigen::Success) {
          direction = -llt.solve(grad);
          if (direction.allFinite() && grad.dot(direction) < 0.0) break;
        }
        direction.resize(0);
        shift = shift == 0.0 ? 1e-10 * scale : shift * 10.0;
      }
      if (direction.size() == 0) direction = -grad;
      step = 1.0;
    } else {
      direction = -grad;
      step = std::min(1.0, step * 2.0);
    }

    const double slope = grad.dot(direction);
    // Once the predicted decrease is below the rounding level of the
    // objective, Armijo comparisons are noise: take the step unsearched.
    const bool at_resolution =
        -slope <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f));
    if (!at_resolution) {
      bool accepted = false;
      for (int h = 0; h < kMaxHalvings; ++h) {
        const double trial = obj.Value(params + step * direction);
        if (trial <= f + kArmijo * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        Fail(ErrorCode::kConvergence, "line search failed; gradient max-norm " + FormatNorm(gnorm));
      }
    }
    params += step * direction;
  }
  Fail(ErrorCode::kConvergence, "no convergence within " + std::to_string(cfg.max_iterations) +
                                    " iterations; final gradient max-norm " + FormatNorm(gnorm));
}

class WeightedLogisticObjective {
 public:
  WeightedLogisticObjective(const Eigen::MatrixXd& design, std::span<const std::uint8_t> labels,
                            std::span<const double> weights, double ridge)
      : design_(design), ridge_(ridge), inv_n_(1.0 / static_cast<double>(labels.size())) {
    labels_.resize(static_cast<Eigen::Index>(labels.size()));
    weights_.resize(labels_.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      labels_[static_cast<Eigen::Index>(i)] = labels[i];
      weights_[static_cast<Eigen::Index>(i)] = weights[i];
    }
  }

  double Value(const Eigen::VectorXd& params) const {
    const Eigen::VectorXd p = Probabilities(design_, params);
    double total = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (weights_[i] != 0.0) total += weights_[i] * CrossEntropy(labels_[i] > 0.5, p[i]);
    }
    return total * inv_n_ + 0.5 * ridge_ * params.tail(params.size() - 1).squaredNorm();
  }

  void Derivatives(const Eigen::VectorXd& params, Eigen::VectorXd* grad,
                   Eigen::MatrixXd* hess) const {
    const Eigen::VectorXd p = Probabilities(design_, params);
    const Eigen::VectorXd residual = weights_.cwiseProduct(p - labels_);
    *grad = design_.transpose() * residual * inv_n_;
    grad->tail(params.size() - 1) += ridge_ * params.tail(params.size() - 1);
    if (hess) {
      const Eigen::VectorXd curvature =
          weights_.array() * p.array() * (1.0 - p.array()) * inv_n_;
      hess->noalias() = design_.transpose() * (design_.array().colwise() * curvature.array()).matrix();
      hess->diagonal().tail(params.size() - 1).array() += ridge_;
    }
  }

  const Eigen::VectorXd& labels() const { return labels_; }
  const Eigen::VectorXd& weights() const { return weights_; }

 private:
  const Eigen::MatrixXd& design_;
  Eigen::VectorXd labels_;
  Eigen::VectorXd weights_;
  double ridge_;
  double inv_n_;
};

struct PenaltyParts {
  double reference_positives = 0.0;
  std::vector<double> group_positives;
  std::vector<double> group_sizes;
};

PenaltyParts CheckPenaltyInputs(const Dataset& d, const PenaltyWeights& lambdas) {
  if (lambdas.size() != d.num_groups()) {
    Fail(ErrorCode::kInvalidArgument, "penalty weight count does not match group count");
  }
  const GroupStats stats = ComputeGroupStats(d);
  if (stats.reference_positive_count == 0) {
    Fail(ErrorCode::kUndefinedMetric,
         "undefined unfairness denominator: no positive outcomes in reference group");
  }
  PenaltyParts parts;
  parts.reference_positives = static_cast<double>(stats.reference_positive_count);
  for (std::size_t g = 0; g < d.num_groups(); ++g) {
    if (stats.group_positive_counts[g] == 0) {
      Fail(ErrorCode::kUndefinedMetric,
           "undefined unfairness denominator: no positive outcomes in group '" +
               d.group_names()[g] + "'");
    }
    parts.group_positives.push_back(static_cast<double>(stats.group_positive_counts[g]));
    parts.group_sizes.push_back(static_cast<double>(stats.group_sizes[g]));
  }
  return parts;
}

// Direct objective scaled by 1/n so tolerances are comparable with the
// weighted path.
class PenalizedObjective {
 public:
  PenalizedObjective(const Dataset& d, const PenaltyWeights& lambdas, double ridge)
      : d_(d), lambdas_(lambdas), ridge_(ridge), inv_n_(1.0 / static_cast<double>(d.rows())) {
    const PenaltyParts parts = CheckPenaltyInputs(d, lambdas);
    design_ = WithIntercept(d.features());
    // d(penalty)/dP_i for every row; used only for the Hessian.
    row_factor_.setZero(static_cast<Eigen::Index>(d.rows()));
    double reference_weight = 0.0;
    for (std::size_t g = 0; g < d.num_groups(); ++g) {
      reference_weight += lambdas[g] * parts.group_sizes[g];
    }
    for (std::size_t i = 0; i < d.rows(); ++i) {
      if (!d.outcomes()[i]) continue;
      double f = d.reference()[i] ? reference_weight / parts.reference_positives : 0.0;
      for (std::size_t g = 0; g < d.num_groups(); ++g) {
        if (d.group(g)[i]) f -= lambdas[g] * parts.group_sizes[g] / parts.group_positives[g];
      }
      row_factor_[static_cast<Eigen::Index>(i)] = f;
    }
  }

  const Eigen::MatrixXd& design() const { return design_; }

  double Value(const Eigen::VectorXd& params) const {
    return PenalizedLoss(params, d_, lambdas_) * inv_n_ +
           0.5 * ridge_ * params.tail(params.size() - 1).squaredNorm();
  }

  void Derivatives(const Eigen::VectorXd& params, Eigen::VectorXd* grad,
                   Eigen::MatrixXd* hess) const {
    *grad = PenalizedGradient(params, d_, lambdas_) * inv_n_;
    grad->tail(params.size() - 1) += ridge_ * params.tail(params.size() - 1);
    if (hess) {
      const Eigen::ArrayXd p = Probabilities(design_, params).array();
      const Eigen::ArrayXd curvature =
          p * (1.0 - p) * (1.0 + row_factor_.array() * (1.0 - 2.0 * p)) * inv_n_;
      hess->noalias() = design_.transpose() * (design_.array().colwise() * curvature).matrix();
      hess->diagonal().tail(params.size() - 1).array() += ridge_;
    }
  }

 private:
  const Dataset& d_;
  const PenaltyWeights& lambdas_;
  double ridge_;
  double inv_n_;
  Eigen::MatrixXd design_;
  Eigen::VectorXd row_factor_;
};

FittedModel ToModel(const Eigen::VectorXd& params, std::vector<std::string> names,
                    double threshold) {
  FittedModel m;
  m.intercept = params[0];
  m.coefficients = params.tail(params.size() - 1);
  m.threshold = threshold;
  m.feature_names = std::move(names);
  return m;
}

}  // namespace

PenaltyWeights::PenaltyWeights(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  for (double v : lambdas_) {
    if (!std::isfinite(v) || v < 0.0) {
      Fail(ErrorCode::kInvalidArgument, "penalty weights must be finite and nonnegative");
    }
  }
}

void SolverConfig::Validate() const {
  if (max_iterations <= 0) Fail(ErrorCode::kConfig, "solver.max_iterations must be positive");
  if (!(gradient_tolerance > 0.0)) {
    Fail(ErrorCode::kConfig, "solver.gradient_tolerance must be positive");
  }
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    Fail(ErrorCode::kConfig, "solver.ridge must be finite and nonnegative");
  }
}

Eigen::VectorXd FittedModel::Parameters() const {
  Eigen::VectorXd params(coefficients.size() + 1);
  params[0] = intercept;
  params.tail(coefficients.size()) = coefficients;
  return params;
}

Eigen::VectorXd FittedModel::PredictProba(const Eigen::MatrixXd& features) const {
  if (features.cols() != coefficients.size()) {
    Fail(ErrorCode::kInvalidArgument, "model expects " + std::to_string(coefficients.size()) +
                                          " features, got " + std::to_string(features.cols()));
  }
  Eigen::VectorXd z = (features * coefficients).array() + intercept;
  return z.unaryExpr(&Sigmoid);
}

Indicator FittedModel::Predict(const Eigen::MatrixXd& features) const {
  const Eigen::VectorXd p = PredictProba(features);
  Indicator out(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = p[i] >= threshold;
  return out;
}

FittedModel FitWeightedLogistic(const Eigen::MatrixXd& features,
                                std::span<const std::uint8_t> labels,
                                std::span<const double> weights, const SolverConfig& cfg,
                                const std::vector<std::string>& feature_names,
                                const std::optional<Eigen::VectorXd>& warm_start,
                                FitInfo* info) {
  cfg.Validate();
  const auto n = static_cast<std::size_t>(features.rows());
  if (n == 0 || labels.size() != n || weights.size() != n) {
    Fail(ErrorCode::kInvalidArgument, "features, labels and weights must have equal, nonzero length");
  }
  if (feature_names.size() != static_cast<std::size_t>(features.cols())) {
    Fail(ErrorCode::kInvalidArgument, "feature name count does not match feature columns");
  }
  double weight_pos = 0.0, weight_neg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      Fail(ErrorCode::kInvalidArgument, "sample weights must be finite and nonnegative");
    }
    if (labels[i] > 1) Fail(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    (labels[i] ? weight_pos : weight_neg) += weights[i];
  }
  if (weight_pos <= 0.0 || weight_neg <= 0.0) {
    Fail(ErrorCode::kData, "weighted fit needs positive weight on both label classes");
  }

  const Eigen::MatrixXd design = WithIntercept(features);
  WeightedLogisticObjective obj(design, labels, weights, cfg.ridge);
  Eigen::VectorXd start = Eigen::VectorXd::Zero(design.cols());
  if (warm_start && warm_start->size() == start.size() && warm_start->allFinite()) {
    start = *warm_start;
  }
  Eigen::VectorXd params = Minimize(obj, start, cfg, info);

  if (cfg.ridge == 0.0) {
    // Every weighted row fitted to its label means the maximizer is at
    // infinity and the "converged" point is an artifact of the tolerance.
    const Eigen::VectorXd p = Probabilities(design, params);
    bool perfect = true;
    for (Eigen::Index i = 0; i < p.size() && perfect; ++i) {
      if (obj.weights()[i] > 0.0 && std::abs(p[i] - obj.labels()[i]) > 1e-6) perfect = false;
    }
    if (perfect) {
      Fail(ErrorCode::kSeparation,
           "perfect separation: coefficients diverge; add a ridge penalty or review the data");
    }
  }
  return ToModel(params, feature_names, 0.5);
}

double PenalizedLoss(const Eigen::VectorXd& params, const Dataset& d,
                     const PenaltyWeights& lambdas) {
  if (params.size() != static_cast<Eigen::Index>(d.cols() + 1)) {
    Fail(ErrorCode::kInvalidArgument, "parameter vector must have p + 1 entries");
  }
  const PenaltyParts parts = CheckPenaltyInputs(d, lambdas);
  const Eigen::VectorXd p = Probabilities(WithIntercept(d.features()), params);
  const auto y = d.outcomes();

  double loss = 0.0, reference_sum = 0.0;
  std::vector<double> group_sum(d.num_groups(), 0.0);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const double pi = p[static_cast<Eigen::Index>(i)];
    loss += CrossEntropy(y[i] != 0, pi);
    if (!y[i]) continue;
    if (d.reference()[i]) reference_sum += pi;
    for (std::size_t g = 0; g < d.num_groups(); ++g) {
      if (d.group(g)[i]) group_sum[g] += pi;
    }
  }
  const double reference_mean = reference_sum / parts.reference_positives;
  for (std::size_t g = 0; g < d.num_groups(); ++g) {
    loss += lambdas[g] * parts.group_sizes[g] *
            (reference_mean - group_sum[g] / parts.group_positives[g]);
  }
  return loss;
}

Eigen::VectorXd PenalizedGradient(const Eigen::VectorXd& params, const Dataset& d,
                                  const PenaltyWeights& lambdas) {
  if (params.size() != static_cast<Eigen::Index>(d.cols() + 1)) {
    Fail(ErrorCode::kInvalidArgument, "parameter vector must have p + 1 entries");
  }
  const PenaltyParts parts = CheckPenaltyInputs(d, lambdas);
  const Eigen::MatrixXd design = WithIntercept(d.features());
  const Eigen::VectorXd p = Probabilities(design, params);
  const auto y = d.outcomes();
  const Eigen::Index dim = params.size();

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd reference_sum = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd group_sum = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(d.num_groups()));
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double pi = p[r];
    grad -= (static_cast<double>(y[i]) - pi) * design.row(r).transpose();
    if (!y[i]) continue;
    // Y_k multiplies the reference sum: the derivative of the loss as written.
    const double dp = pi * (1.0 - pi);
    if (d.reference()[i]) reference_sum += dp * design.row(r).transpose();
    for (std::size_t g = 0; g < d.num_groups(); ++g) {
      if (d.group(g)[i]) group_sum.col(static_cast<Eigen::Index>(g)) += dp * design.row(r).transpose();
    }
  }
  for (std::size_t g = 0; g < d.num_groups(); ++g) {
    grad += lambdas[g] * parts.group_sizes[g] *
            (reference_sum / parts.reference_positives -
             group_sum.col(static_cast<Eigen::Index>(g)) / parts.group_positives[g]);
  }
  return grad;
}

FittedModel FitPenalizedDirect(const Dataset& d, const PenaltyWeights& lambdas,
                               const SolverConfig& cfg, double threshold, FitInfo* info) {
  cfg.Validate();
  PenalizedObjective obj(d, lambdas, cfg.ridge);
  const Eigen::VectorXd params =
      Minimize(obj, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.cols() + 1)), cfg, info);
  return ToModel(params, d.feature_names(), threshold);
}

}  // namespace fairpen
