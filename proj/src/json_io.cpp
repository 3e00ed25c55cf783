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

#include "fairpen/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fairpen/error.hpp"
#include "format.hpp"

namespace fairpen {
namespace {

[[noreturn]] void BadKey(const std::string& key, const std::string& what) {
  Fail(ErrorCode::kConfig, "config key '" + key + "': " + what);
}

void RequireObject(const Json& j, const std::string& key) {
  if (!j.is_object()) BadKey(key, "expected an object");
}

void RejectUnknown(const Json& j, const std::string& prefix, std::set<std::string> known) {
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) BadKey(prefix + k, "unknown key");
  }
}

template <typename T>
T Get(const Json& j, const std::string& prefix, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const Json& v = j.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) BadKey(prefix + key, "expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) BadKey(prefix + key, "expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) {
        BadKey(prefix + key, "expected a nonnegative integer");
      }
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) BadKey(prefix + key, "expected a number");
  } else {
    if (!v.is_string()) BadKey(prefix + key, "expected a string");
  }
  return v.get<T>();
}

std::vector<std::string> GetStrings(const Json& j, const std::string& prefix, const char* key,
                                    bool required) {
  if (!j.contains(key)) {
    if (required) BadKey(prefix + key, "missing");
    return {};
  }
  const Json& v = j.at(key);
  if (!v.is_array()) BadKey(prefix + key, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) BadKey(prefix + key, "expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> GetNumbers(const Json& j, const std::string& prefix, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_array()) BadKey(prefix + key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) BadKey(prefix + key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Json Nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json MetricsJson(const OutcomeMetrics& m) {
  return {{"accuracy", m.accuracy},
          {"U_PW", m.population_weighted},
          {"U_GW", m.group_weighted},
          {"U_Max", m.maximum}};
}

Json LambdaJson(const PenaltyWeights& w, const std::vector<std::string>& names) {
  Json out = Json::object();
  for (std::size_t g = 0; g < w.size(); ++g) out[names[g]] = w[g];
  return out;
}

Json Unfairness(const std::vector<double>& values, const std::vector<std::string>& names) {
  Json out = Json::object();
  for (std::size_t g = 0; g < values.size(); ++g) out[names[g]] = values[g];
  return out;
}

Json ScoreOrNull(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

DataConfig DataConfigFromJson(const Json& j) {
  const std::string p = "data.";
  RequireObject(j, "data");
  RejectUnknown(j, p, {"path", "outcome", "features", "groups", "reference"});
  DataConfig cfg;
  cfg.path = Get<std::string>(j, p, "path", "");
  if (cfg.path.empty()) BadKey(p + "path", "missing");
  cfg.schema.outcome = Get<std::string>(j, p, "outcome", "");
  if (cfg.schema.outcome.empty()) BadKey(p + "outcome", "missing");
  cfg.schema.features = GetStrings(j, p, "features", true);
  if (cfg.schema.features.empty()) BadKey(p + "features", "needs at least one column");
  cfg.schema.groups = GetStrings(j, p, "groups", true);
  if (cfg.schema.groups.empty()) BadKey(p + "groups", "needs at least one column");
  if (!j.contains("reference")) {
    BadKey(p + "reference", "missing; use \"complement\" or {\"column\": name}");
  }
  const Json& ref = j.at("reference");
  if (ref.is_string() && ref.get<std::string>() == "complement") {
    cfg.schema.reference_complement = true;
  } else if (ref.is_object() && ref.size() == 1 && ref.contains("column") &&
             ref.at("column").is_string()) {
    cfg.schema.reference_column = ref.at("column").get<std::string>();
  } else {
    BadKey(p + "reference", "expected \"complement\" or {\"column\": name}");
  }
  return cfg;
}

Json ToJson(const DataConfig& cfg) {
  Json j = {{"path", cfg.path},
            {"outcome", cfg.schema.outcome},
            {"features", cfg.schema.features},
            {"groups", cfg.schema.groups}};
  if (cfg.schema.reference_complement) {
    j["reference"] = "complement";
  } else {
    j["reference"] = {{"column", *cfg.schema.reference_column}};
  }
  return j;
}

SolverConfig SolverConfigFromJson(const Json& j) {
  SolverConfig cfg;
  if (j.is_null()) return cfg;
  const std::string p = "solver.";
  RequireObject(j, "solver");
  RejectUnknown(j, p, {"max_iterations", "gradient_tolerance", "step_rule", "ridge"});
  cfg.max_iterations = Get<int>(j, p, "max_iterations", cfg.max_iterations);
  cfg.gradient_tolerance = Get<double>(j, p, "gradient_tolerance", cfg.gradient_tolerance);
  cfg.ridge = Get<double>(j, p, "ridge", cfg.ridge);
  const auto rule = Get<std::string>(j, p, "step_rule", "newton");
  if (rule == "newton") {
    cfg.step_rule = StepRule::kNewton;
  } else if (rule == "gradient_descent") {
    cfg.step_rule = StepRule::kGradientDescent;
  } else {
    BadKey(p + "step_rule", "expected \"newton\" or \"gradient_descent\"");
  }
  try {
    cfg.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kConfig, e.what());
  }
  return cfg;
}

Json ToJson(const SolverConfig& cfg) {
  return {{"max_iterations", cfg.max_iterations},
          {"gradient_tolerance", cfg.gradient_tolerance},
          {"step_rule", cfg.step_rule == StepRule::kNewton ? "newton" : "gradient_descent"},
          {"ridge", cfg.ridge}};
}

SearchConfig SearchConfigFromJson(const Json& j, double threshold) {
  SearchConfig cfg;
  const std::string p = "search.";
  std::vector<double> alphas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
  std::vector<std::string> syntheses = {"population_weighted", "group_weighted", "maximum"};
  if (!j.is_null()) {
    RequireObject(j, "search");
    RejectUnknown(j, p, {"num_candidates", "log10_lower", "log10_upper", "folds", "seed",
                         "stratify", "alphas", "syntheses"});
    cfg.num_candidates = Get<int>(j, p, "num_candidates", cfg.num_candidates);
    cfg.log10_lower = Get<double>(j, p, "log10_lower", cfg.log10_lower);
    cfg.log10_upper = Get<double>(j, p, "log10_upper", cfg.log10_upper);
    cfg.folds = Get<int>(j, p, "folds", cfg.folds);
    cfg.seed = Get<std::uint64_t>(j, p, "seed", cfg.seed);
    cfg.stratify = Get<bool>(j, p, "stratify", cfg.stratify);
    if (j.contains("alphas")) alphas = GetNumbers(j, p, "alphas");
    if (j.contains("syntheses")) syntheses = GetStrings(j, p, "syntheses", false);
  }
  if (alphas.empty()) BadKey(p + "alphas", "needs at least one value");
  if (syntheses.empty()) BadKey(p + "syntheses", "needs at least one value");
  for (const auto& s : syntheses) {
    Synthesis syn;
    try {
      syn = ParseSynthesis(s);
    } catch (const Error&) {
      BadKey(p + "syntheses", "unknown synthesis '" + s + "'");
    }
    for (double a : alphas) cfg.score_variants.push_back({a, syn, threshold});
  }
  try {
    cfg.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kConfig, e.what());
  }
  return cfg;
}

Json ToJson(const SearchConfig& cfg) {
  std::vector<double> alphas;
  std::vector<std::string> syntheses;
  for (const auto& v : cfg.score_variants) {
    if (std::find(alphas.begin(), alphas.end(), v.alpha) == alphas.end()) alphas.push_back(v.alpha);
    const std::string s(SynthesisName(v.synthesis));
    if (std::find(syntheses.begin(), syntheses.end(), s) == syntheses.end()) syntheses.push_back(s);
  }
  return {{"num_candidates", cfg.num_candidates},
          {"log10_lower", cfg.log10_lower},
          {"log10_upper", cfg.log10_upper},
          {"folds", cfg.folds},
          {"seed", cfg.seed},
          {"stratify", cfg.stratify},
          {"alphas", alphas},
          {"syntheses", syntheses}};
}

SimulationConfig SimulationConfigFromJson(const Json& j) {
  SimulationConfig cfg;
  const std::string p = "simulation.";
  if (j.is_null()) {
    cfg.setting = 1;
    cfg.sim.c = NamedSettingC(1);
    return cfg;
  }
  RequireObject(j, "simulation");
  RejectUnknown(j, p, {"setting", "c", "n", "replications", "seed", "drop_column"});
  if (j.contains("setting") && j.contains("c")) {
    BadKey(p + "setting", "give either a named setting or an explicit c-vector, not both");
  }
  if (j.contains("c")) {
    const auto c = GetNumbers(j, p, "c");
    if (c.size() != 6) BadKey(p + "c", "expected 6 numbers");
    std::copy(c.begin(), c.end(), cfg.sim.c.begin());
  } else {
    const int setting = Get<int>(j, p, "setting", 1);
    try {
      cfg.sim.c = NamedSettingC(setting);
    } catch (const Error& e) {
      BadKey(p + "setting", e.what());
    }
    cfg.setting = setting;
  }
  cfg.sim.n = Get<std::size_t>(j, p, "n", cfg.sim.n);
  cfg.sim.seed = Get<std::uint64_t>(j, p, "seed", cfg.sim.seed);
  cfg.replications = Get<std::size_t>(j, p, "replications", cfg.replications);
  if (cfg.replications == 0) BadKey(p + "replications", "must be at least 1");
  if (j.contains("drop_column") && !j.at("drop_column").is_null()) {
    cfg.drop_column = Get<std::string>(j, p, "drop_column", "");
  }
  try {
    cfg.sim.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kConfig, e.what());
  }
  return cfg;
}

Json ToJson(const SimulationConfig& cfg) {
  // Always the explicit c-vector, so a named setting and its vector serialize alike.
  Json j = {{"c", cfg.sim.c},
            {"n", cfg.sim.n},
            {"replications", cfg.replications},
            {"seed", cfg.sim.seed},
            {"drop_column", cfg.drop_column ? Json(*cfg.drop_column) : Json(nullptr)}};
  return j;
}

Json ModelToJson(const FittedModel& model) {
  return {{"coefficients", std::vector<double>(model.coefficients.data(),
                                               model.coefficients.data() + model.coefficients.size())},
          {"intercept", model.intercept},
          {"threshold", model.threshold},
          {"feature_names", model.feature_names}};
}

FittedModel ModelFromJson(const Json& j) {
  if (!j.is_object()) Fail(ErrorCode::kData, "model JSON must be an object");
  FittedModel m;
  try {
    const auto coef = j.at("coefficients").get<std::vector<double>>();
    m.coefficients = Eigen::Map<const Eigen::VectorXd>(coef.data(), static_cast<Eigen::Index>(coef.size()));
    m.intercept = j.at("intercept").get<double>();
    m.threshold = j.at("threshold").get<double>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kData, std::string("malformed model JSON: ") + e.what());
  }
  if (m.feature_names.size() != static_cast<std::size_t>(m.coefficients.size())) {
    Fail(ErrorCode::kData, "model has " + std::to_string(m.coefficients.size()) +
                               " coefficients but " + std::to_string(m.feature_names.size()) +
                               " feature names");
  }
  if (!(m.threshold > 0.0 && m.threshold < 1.0)) {
    Fail(ErrorCode::kData, "model threshold must lie in (0, 1)");
  }
  if (!m.coefficients.allFinite() || !std::isfinite(m.intercept)) {
    Fail(ErrorCode::kData, "model coefficients must be finite");
  }
  return m;
}

Json ReportToJson(const FairnessReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"name", r.name},
                    {"n", r.n},
                    {"prevalence", r.n ? Json(r.prevalence) : Json(nullptr)},
                    {"sensitivity", Nullable(r.sensitivity)},
                    {"specificity", Nullable(r.specificity)},
                    {"accuracy", r.n ? Json(r.accuracy) : Json(nullptr)}});
  }
  Json per_group = Json::object();
  for (std::size_t g = 0; g < report.group_names.size(); ++g) {
    per_group[report.group_names[g]] = Nullable(report.unfairness[g]);
  }
  Json unfairness = {{"per_group", per_group}};
  if (report.synthesized) {
    unfairness["U_PW"] = report.synthesized->population_weighted;
    unfairness["U_GW"] = report.synthesized->group_weighted;
    unfairness["U_Max"] = report.synthesized->maximum;
  } else {
    unfairness["U_PW"] = unfairness["U_GW"] = unfairness["U_Max"] = nullptr;
  }
  return {{"threshold", report.threshold}, {"rows", rows}, {"unfairness", unfairness}};
}

Json SearchResultToJson(const SearchResult& result, const std::vector<std::string>& group_names) {
  Json variants = Json::array();
  for (const auto& v : result.per_variant) {
    variants.push_back({{"name", v.config.Name()},
                        {"alpha", v.config.alpha},
                        {"synthesis", SynthesisName(v.config.synthesis)},
                        {"threshold", v.config.threshold},
                        {"candidate_index", v.candidate_index},
                        {"best_score", v.best_score},
                        {"lambdas", LambdaJson(v.best_lambdas, group_names)},
                        {"model", ModelToJson(v.model)}});
  }
  Json candidates = Json::array();
  for (std::size_t c = 0; c < result.all_candidates.size(); ++c) {
    const auto& rec = result.all_candidates[c];
    Json scores = Json::array();
    for (double s : rec.mean_scores) scores.push_back(ScoreOrNull(s));
    Json folds = Json::array();
    for (const auto& f : rec.folds) {
      folds.push_back({{"accuracy", f.accuracy},
                       {"unfairness", Unfairness(f.per_group_unfairness, group_names)}});
    }
    Json entry = {{"index", c},
                  {"lambdas", LambdaJson(rec.lambdas, group_names)},
                  {"mean_scores", scores},
                  {"folds", folds}};
    if (rec.failure) entry["failure"] = *rec.failure;
    candidates.push_back(std::move(entry));
  }
  Json baseline_folds = Json::array();
  for (const auto& f : result.baseline_folds) {
    baseline_folds.push_back({{"accuracy", f.accuracy},
                              {"unfairness", Unfairness(f.per_group_unfairness, group_names)}});
  }
  Json variant_names = Json::array();
  for (const auto& v : result.per_variant) variant_names.push_back(v.config.Name());
  return {{"variants", variants},
          {"score_columns", variant_names},
          {"candidates", candidates},
          {"baseline", {{"folds", baseline_folds}, {"model", ModelToJson(result.baseline_model)}}}};
}

Json ReplicationToJson(const ReplicationSummary& rep, const std::vector<std::string>& group_names) {
  Json variants = Json::array();
  for (const auto& v : rep.per_variant) {
    Json m = MetricsJson(v.metrics);
    m["name"] = v.config.Name();
    m["lambdas"] = LambdaJson(v.lambdas, group_names);
    variants.push_back(std::move(m));
  }
  return {{"replication", rep.replication}, {"baseline", MetricsJson(rep.baseline)},
          {"variants", variants}};
}

std::string SummaryCsv(const std::vector<QuantileRow>& rows) {
  std::ostringstream os;
  os << "variant,metric,p25,median,p75\n";
  for (const auto& r : rows) {
    os << r.variant << ',' << r.metric << ',' << FormatDouble(r.p25) << ','
       << FormatDouble(r.median) << ',' << FormatDouble(r.p75) << '\n';
  }
  return os.str();
}

std::string FrontierCsv(const std::vector<ReplicationSummary>& reps) {
  struct Tagged {
    std::size_t replication;
    std::string variant;
  };
  std::vector<FrontierPoint> points;
  std::vector<Tagged> tags;
  for (const auto& rep : reps) {
    for (const auto& v : rep.per_variant) {
      points.push_back({v.metrics.accuracy, v.metrics.population_weighted});
      tags.push_back({rep.replication, v.config.Name()});
    }
  }
  std::ostringstream os;
  os << "replication,variant,accuracy,U_PW\n";
  for (std::size_t i : ParetoFrontier(points)) {
    os << tags[i].replication << ',' << tags[i].variant << ',' << FormatDouble(points[i].accuracy)
       << ',' << FormatDouble(points[i].unfairness) << '\n';
  }
  return os.str();
}

}  // namespace fairpen
