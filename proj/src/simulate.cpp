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

#include "fairpen/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "fairpen/error.hpp"
#include "fairpen/metrics.hpp"
#include "fairpen/parallel.hpp"
#include "fairpen/random.hpp"

namespace fairpen {
namespace {

constexpr std::size_t kFeatures = 9;
constexpr double kBinaryRates[] = {0.2, 0.4, 0.6, 0.8, 0.95};

double Clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

void SimSetting::Validate() const {
  for (double v : c) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      Fail(ErrorCode::kConfig, "simulation c-vector entries must be finite and nonnegative");
    }
  }
  if (n == 0) Fail(ErrorCode::kConfig, "simulation n must be positive");
}

std::array<double, 6> NamedSettingC(int setting) {
  switch (setting) {
    case 1:
      return {0.2, 0.2, 0.2, 0.02, 0.02, 0.02};
    case 2:
      return {0.02, 0.2, 0.2, 0.002, 0.02, 0.02};
    case 3:
      return {0.02, 0.02, 0.02, 0.002, 0.002, 0.002};
    default:
      Fail(ErrorCode::kConfig, "unknown simulation setting " + std::to_string(setting) +
                                   " (expected 1, 2 or 3)");
  }
}

Dataset Generate(const SimSetting& setting) {
  setting.Validate();
  const auto& c = setting.c;
  const std::size_t n = setting.n;
  Rng rng(setting.seed, {static_cast<std::uint64_t>(StreamTag::kGenerate)});

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kFeatures));
  Indicator y(n);
  std::vector<Indicator> groups(3, Indicator(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double x1 = rng.Normal(30.0, 15.0);
    const double x2 = rng.Normal(30.0, 15.0);
    const auto x3 = static_cast<double>(rng.Poisson(15.0));
    const auto x4 = static_cast<double>(rng.Poisson(15.0));
    double b[5];
    for (int k = 0; k < 5; ++k) b[k] = rng.Bernoulli(kBinaryRates[k]) ? 1.0 : 0.0;
    const double x5 = b[0], x6 = b[1], x7 = b[2], x8 = b[3], x9 = b[4];

    const bool in_a = rng.Bernoulli(Clamp01(c[0] * (x9 + 0.1) + c[3] * x6 + rng.Normal(0.0, 0.02)));
    const bool in_b = rng.Bernoulli(Clamp01(c[1] * (x7 + 0.05) + c[4] * x6 + rng.Normal(0.0, 0.02)));
    const bool in_c = rng.Bernoulli(Clamp01(c[2] * (x8 + 0.4) + c[5] * x6 + rng.Normal(0.0, 0.02)));
    const double a = in_a, bb = in_b, cc = in_c;

    const double c_noise = rng.Normal(60.0, 2.0);
    const double z = x1 / 30.0 - x2 / 15.0 + 3.0 * x3 / 50.0 - x4 / 25.0 +
                     (std::exp2(x5 + x6) + 6.0 * x7 + 10.0 * x8 * x9 + 8.0 * x3 * a +
                      6.0 * x4 * bb + cc * c_noise) /
                         100.0 +
                     rng.Normal(0.0, 1.0);
    y[i] = rng.Bernoulli(Clamp01(NormalCdf(z)));

    x.row(r) << x1, x2, x3, x4, x5, x6, x7, x8, x9;
    groups[0][i] = in_a;
    groups[1][i] = in_b;
    groups[2][i] = in_c;
  }
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= kFeatures; ++k) names.push_back("X" + std::to_string(k));
  return Dataset::Create(std::move(x), std::move(names), std::move(y), std::move(groups),
                         {"A", "B", "C"});
}

OutcomeMetrics EvaluateOutcome(const FittedModel& model, const Dataset& d) {
  const Indicator predictions = model.Predict(d.features());
  OutcomeMetrics m;
  m.accuracy = ComputeClassificationMetrics(d.outcomes(), predictions).accuracy;
  const auto synth = Synthesize(UnfairnessEoAll(predictions, d), ComputeGroupStats(d));
  m.population_weighted = synth.population_weighted;
  m.group_weighted = synth.group_weighted;
  m.maximum = synth.maximum;
  return m;
}

std::vector<ReplicationSummary> RunReplications(const SimSetting& setting,
                                                const ReplicationOptions& options,
                                                const SearchConfig& search,
                                                const SolverConfig& solver, int threads) {
  setting.Validate();
  if (options.replications == 0) Fail(ErrorCode::kConfig, "replications must be at least 1");
  const std::size_t reps = options.replications;
  // Parallelize across replications when there are enough of them, else
  // inside each search. Output does not depend on the split.
  const int outer = reps >= static_cast<std::size_t>(std::max(1, threads)) ? threads : 1;
  const int inner = outer == 1 ? threads : 1;

  std::vector<ReplicationSummary> out(reps);
  ParallelFor(reps, outer, [&](std::size_t r) {
    SimSetting train_setting = setting;
    train_setting.seed = DeriveSeed(setting.seed, {static_cast<std::uint64_t>(StreamTag::kSimulationTrain), r});
    SimSetting eval_setting = setting;
    eval_setting.seed = DeriveSeed(setting.seed, {static_cast<std::uint64_t>(StreamTag::kSimulationEval), r});
    Dataset train = Generate(train_setting);
    Dataset eval = Generate(eval_setting);
    if (options.drop_column) {
      train = train.DropFeature(*options.drop_column);
      eval = eval.DropFeature(*options.drop_column);
    }
    SearchConfig cfg = search;
    cfg.seed = DeriveSeed(setting.seed, {static_cast<std::uint64_t>(StreamTag::kSimulationSearch), r});
    SearchResult result = RunSearch(train, cfg, solver, inner);

    ReplicationSummary summary;
    summary.replication = r;
    FittedModel baseline = result.baseline_model;
    baseline.threshold = options.baseline_threshold;
    summary.baseline = EvaluateOutcome(baseline, eval);
    for (const auto& v : result.per_variant) {
      summary.per_variant.push_back({v.config, EvaluateOutcome(v.model, eval), v.best_lambdas});
    }
    out[r] = std::move(summary);
  });
  return out;
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) Fail(ErrorCode::kInvalidArgument, "percentile of empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<QuantileRow> Summarize(const std::vector<ReplicationSummary>& reps,
                                   const std::vector<std::string>& group_names) {
  if (reps.empty()) Fail(ErrorCode::kInvalidArgument, "no replications to summarize");
  std::vector<QuantileRow> rows;
  auto add = [&rows](const std::string& variant, const std::string& metric,
                     const std::vector<double>& values) {
    rows.push_back({variant, metric, Percentile(values, 0.25), Percentile(values, 0.5),
                    Percentile(values, 0.75)});
  };
  auto add_metrics = [&](const std::string& variant, auto&& get) {
    std::vector<double> acc, pw, gw, mx;
    for (const auto& r : reps) {
      const OutcomeMetrics& m = get(r);
      acc.push_back(m.accuracy);
      pw.push_back(m.population_weighted);
      gw.push_back(m.group_weighted);
      mx.push_back(m.maximum);
    }
    add(variant, "accuracy", acc);
    add(variant, "U_PW", pw);
    add(variant, "U_GW", gw);
    add(variant, "U_Max", mx);
  };

  add_metrics("baseline", [](const ReplicationSummary& r) -> const OutcomeMetrics& {
    return r.baseline;
  });
  for (std::size_t v = 0; v < reps.front().per_variant.size(); ++v) {
    const std::string name = reps.front().per_variant[v].config.Name();
    add_metrics(name, [v](const ReplicationSummary& r) -> const OutcomeMetrics& {
      return r.per_variant[v].metrics;
    });
    for (std::size_t g = 0; g < group_names.size(); ++g) {
      std::vector<double> lambdas;
      for (const auto& r : reps) lambdas.push_back(r.per_variant[v].lambdas[g]);
      add(name, "lambda_" + group_names[g], lambdas);
    }
  }
  return rows;
}

std::vector<std::size_t> ParetoFrontier(const std::vector<FrontierPoint>& points) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      const auto& p = points[i];
      const auto& q = points[j];
      dominated = q.accuracy >= p.accuracy && q.unfairness <= p.unfairness &&
                  (q.accuracy > p.accuracy || q.unfairness < p.unfairness);
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

}  // namespace fairpen
