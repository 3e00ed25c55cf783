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

// Test helpers: small dataset builders, random instances and brute-force
// oracles. The oracles are written from the formulas with plain loops over
// rows and share no code with the library.

#ifndef FAIRPEN_TESTS_TEST_UTIL_HPP_
#define FAIRPEN_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairpen/data.hpp"
#include "fairpen/error.hpp"

namespace fairpen::testing {

inline std::vector<std::string> Names(const std::string& prefix, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

// One feature column of zeros; handy when only memberships matter.
inline Dataset MakeDataset(const Indicator& y, const std::vector<Indicator>& groups,
                           std::optional<Indicator> reference = std::nullopt) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(y.size()), 1);
  return Dataset::Create(std::move(x), {"x"}, y, groups, Names("g", groups.size()),
                         std::move(reference));
}

struct RawInstance {
  Eigen::MatrixXd x;
  Indicator y;
  std::vector<Indicator> groups;
  Indicator reference;
};

inline bool HasPositive(const Indicator& y, const Indicator& member) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] && member[i]) return true;
  }
  return false;
}

// Random instance where every group and the reference (complement of the
// groups) contain at least one positive outcome. Groups may overlap.
inline RawInstance RandomRaw(std::mt19937_64& gen, std::size_t n, std::size_t p, std::size_t g,
                             double feature_scale = 1.0) {
  std::normal_distribution<double> normal(0.0, feature_scale);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution member(0.3);
  for (;;) {
    RawInstance r;
    r.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < r.x.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.x.cols(); ++j) r.x(i, j) = normal(gen);
    }
    r.y.resize(n);
    for (auto& v : r.y) v = coin(gen);
    r.groups.assign(g, Indicator(n));
    for (auto& col : r.groups) {
      for (auto& v : col) v = member(gen);
    }
    r.reference.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& col : r.groups) {
        if (col[i]) r.reference[i] = 0;
      }
    }
    bool ok = HasPositive(r.y, r.reference);
    for (const auto& col : r.groups) ok = ok && HasPositive(r.y, col);
    if (ok) return r;
  }
}

inline Dataset ToDataset(const RawInstance& r) {
  return Dataset::Create(r.x, Names("X", static_cast<std::size_t>(r.x.cols())), r.y, r.groups,
                         Names("g", r.groups.size()));
}

inline Dataset RandomDataset(std::mt19937_64& gen, std::size_t n, std::size_t p, std::size_t g,
                             double feature_scale = 1.0) {
  return ToDataset(RandomRaw(gen, n, p, g, feature_scale));
}

// Logistic data from known parameters [intercept, beta...].
inline Dataset LogisticData(std::mt19937_64& gen, std::size_t n, const Eigen::VectorXd& params,
                            std::size_t num_groups = 1) {
  const auto p = static_cast<std::size_t>(params.size() - 1);
  for (;;) {
    RawInstance r = RandomRaw(gen, n, p, num_groups);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      double eta = params[0];
      for (std::size_t j = 0; j < p; ++j) {
        eta += params[static_cast<Eigen::Index>(j + 1)] *
               r.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      r.y[i] = u(gen) < 1.0 / (1.0 + std::exp(-eta));
    }
    bool ok = HasPositive(r.y, r.reference);
    for (const auto& col : r.groups) ok = ok && HasPositive(r.y, col);
    if (ok) return ToDataset(r);
  }
}

inline std::filesystem::path TempPath(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "fairpen_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

inline std::filesystem::path WriteText(const std::string& name, const std::string& text) {
  const auto path = TempPath(name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

// ---- oracles --------------------------------------------------------------

// TPR of `score` over positive rows selected by `member`.
inline double OracleTpr(const std::vector<double>& score, const Indicator& y,
                        const Indicator& member) {
  double hits = 0.0;
  int positives = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (member[i] == 1 && y[i] == 1) {
      positives += 1;
      hits += score[i];
    }
  }
  return hits / positives;
}

inline double OracleUnfairness(const std::vector<double>& score, const Indicator& y,
                               const Indicator& group, const Indicator& reference) {
  return OracleTpr(score, y, reference) - OracleTpr(score, y, group);
}

struct OracleSynth {
  double pw, gw, max;
};

inline OracleSynth OracleSynthesize(const std::vector<double>& u, const std::vector<double>& sizes) {
  double num = 0.0, den = 0.0, sum = 0.0, mx = -1e300;
  for (std::size_t g = 0; g < u.size(); ++g) {
    num += sizes[g] * u[g];
    den += sizes[g];
    sum += u[g];
    if (u[g] > mx) mx = u[g];
  }
  return {num / den, sum / static_cast<double>(u.size()), mx};
}

struct OracleConfusion {
  double accuracy;
  double sensitivity;  // NaN when undefined
  double specificity;  // NaN when undefined
};

inline OracleConfusion OracleMetrics(const Indicator& y, const Indicator& yhat) {
  int tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 1 && yhat[i] == 1) ++tp;
    if (y[i] == 0 && yhat[i] == 0) ++tn;
    if (y[i] == 0 && yhat[i] == 1) ++fp;
    if (y[i] == 1 && yhat[i] == 0) ++fn;
  }
  const double nan = std::nan("");
  return {static_cast<double>(tp + tn) / static_cast<double>(y.size()),
          tp + fn ? static_cast<double>(tp) / (tp + fn) : nan,
          tn + fp ? static_cast<double>(tn) / (tn + fp) : nan};
}

inline double OracleSigmoid(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

inline std::vector<double> OracleProbabilities(const Dataset& d, const Eigen::VectorXd& params) {
  std::vector<double> p(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    double eta = params[0];
    for (std::size_t j = 0; j < d.cols(); ++j) {
      eta += params[static_cast<Eigen::Index>(j + 1)] *
             d.features()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    p[i] = OracleSigmoid(eta);
  }
  return p;
}

// Cross-entropy plus sum_g lambda_g n_g (reference mean - group mean of P over
// positives), written out term by term.
inline double OraclePenalizedLoss(const Dataset& d, const Eigen::VectorXd& params,
                                  const std::vector<double>& lambdas) {
  const auto p = OracleProbabilities(d, params);
  double ce = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const double pi = std::clamp(p[i], 1e-12, 1.0 - 1e-12);
    ce -= d.outcomes()[i] ? std::log(pi) : std::log(1.0 - pi);
  }
  double ref_num = 0.0, ref_den = 0.0;
  for (std::size_t k = 0; k < d.rows(); ++k) {
    if (d.reference()[k]) {
      ref_num += d.outcomes()[k] * p[k];
      ref_den += d.outcomes()[k];
    }
  }
  double penalty = 0.0;
  for (std::size_t g = 0; g < d.num_groups(); ++g) {
    double num = 0.0, den = 0.0, size = 0.0;
    for (std::size_t j = 0; j < d.rows(); ++j) {
      if (d.group(g)[j]) {
        num += d.outcomes()[j] * p[j];
        den += d.outcomes()[j];
        size += 1.0;
      }
    }
    penalty += lambdas[g] * size * (ref_num / ref_den - num / den);
  }
  return ce + penalty;
}

struct OracleCosts {
  std::vector<double> c1, c0;
};

inline OracleCosts OracleReductionCosts(const Dataset& d, const std::vector<double>& lambdas) {
  OracleCosts out;
  double ref_pos = 0.0;
  for (std::size_t k = 0; k < d.rows(); ++k) ref_pos += d.reference()[k] * d.outcomes()[k];
  std::vector<double> group_pos(d.num_groups(), 0.0), group_size(d.num_groups(), 0.0);
  for (std::size_t g = 0; g < d.num_groups(); ++g) {
    for (std::size_t j = 0; j < d.rows(); ++j) {
      group_pos[g] += d.group(g)[j] * d.outcomes()[j];
      group_size[g] += d.group(g)[j];
    }
  }
  for (std::size_t i = 0; i < d.rows(); ++i) {
    double s = 0.0;
    for (std::size_t g = 0; g < d.num_groups(); ++g) {
      s += lambdas[g] * group_size[g] *
           (d.reference()[i] / ref_pos - d.group(g)[i] / group_pos[g]);
    }
    const double y = d.outcomes()[i];
    out.c1.push_back(1.0 - y + y * s);
    out.c0.push_back(y);
  }
  return out;
}

// Weighted logistic maximum likelihood by undamped Newton iterations, enough
// for the well-conditioned instances used in tests. Returns [intercept, beta].
inline Eigen::VectorXd OracleLogisticFit(const Eigen::MatrixXd& x, const Indicator& y,
                                         const std::vector<double>& w) {
  const Eigen::Index n = x.rows(), p = x.cols() + 1;
  Eigen::MatrixXd design(n, p);
  design.col(0).setOnes();
  design.rightCols(p - 1) = x;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double pi = OracleSigmoid(design.row(i).dot(theta));
      const double wi = w[static_cast<std::size_t>(i)];
      grad += wi * (pi - y[static_cast<std::size_t>(i)]) * design.row(i).transpose();
      hess += wi * pi * (1.0 - pi) * design.row(i).transpose() * design.row(i);
    }
    const Eigen::VectorXd step = hess.ldlt().solve(grad);
    theta -= step;
    if (step.lpNorm<Eigen::Infinity>() < 1e-14) break;
  }
  return theta;
}

inline std::vector<double> ToDouble(const Indicator& v) { return {v.begin(), v.end()}; }

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

template <typename F>
std::string MessageOf(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace fairpen::testing

#endif  // FAIRPEN_TESTS_TEST_UTIL_HPP_
