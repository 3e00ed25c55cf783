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

#include "fairpen/fairpen.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "fairpen/error.hpp"
#include "fairpen/json_io.hpp"
#include "fairpen/reduction.hpp"
#include "fairpen/report.hpp"
#include "fairpen/search.hpp"
#include "fairpen/simulate.hpp"
#include "fairpen/version.hpp"

struct fp_dataset {
  fairpen::Dataset value;
};

struct fp_model {
  fairpen::FittedModel value;
};

struct fp_search {
  fairpen::SearchResult value;
  std::vector<std::string> group_names;
};

struct fp_simulation {
  std::vector<fairpen::ReplicationSummary> replications;
  std::vector<std::string> group_names;
};

namespace {

using fairpen::ErrorCode;
using fairpen::Fail;
using fairpen::Json;

thread_local std::string last_error;

template <typename Body>
fp_status Guard(Body&& body) {
  try {
    body();
    last_error.clear();
    return FP_OK;
  } catch (const fairpen::Error& e) {
    last_error = e.what();
    return static_cast<fp_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FP_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return FP_ERR_INTERNAL;
  }
}

template <typename T>
void Require(const T* p, const char* what) {
  if (p == nullptr) Fail(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

char* Copy(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

Json ParseJson(const char* text, const char* block) {
  if (text == nullptr) return Json(nullptr);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kConfig, std::string("invalid JSON in '") + block + "' block: " + e.what());
  }
}

fairpen::PenaltyWeights Lambdas(const double* lambdas, std::size_t count) {
  if (count > 0) Require(lambdas, "lambdas");
  return fairpen::PenaltyWeights(std::vector<double>(lambdas, lambdas + count));
}

}  // namespace

extern "C" {

const char* fp_version(void) { return fairpen::kVersion; }

const char* fp_last_error(void) { return last_error.c_str(); }

void fp_string_free(char* s) { std::free(s); }

fp_status fp_config_effective(const char* block, const char* json, char** out) {
  return Guard([&] {
    Require(block, "block");
    Require(out, "out");
    const std::string name = block;
    const Json j = ParseJson(json, block);
    Json effective;
    if (name == "data") {
      effective = fairpen::ToJson(fairpen::DataConfigFromJson(j));
    } else if (name == "solver") {
      effective = fairpen::ToJson(fairpen::SolverConfigFromJson(j));
    } else if (name == "search") {
      effective = fairpen::ToJson(fairpen::SearchConfigFromJson(j, 0.5));
    } else if (name == "simulation") {
      effective = fairpen::ToJson(fairpen::SimulationConfigFromJson(j));
    } else {
      Fail(ErrorCode::kInvalidArgument, "unknown config block '" + name + "'");
    }
    *out = Copy(effective.dump());
  });
}

fp_status fp_dataset_load_csv(const char* data_json, fp_dataset** out) {
  return Guard([&] {
    Require(data_json, "data_json");
    Require(out, "out");
    const auto cfg = fairpen::DataConfigFromJson(ParseJson(data_json, "data"));
    *out = new fp_dataset{fairpen::LoadCsv(cfg.path, cfg.schema)};
  });
}

fp_status fp_dataset_create(size_t n, size_t p, size_t num_groups, const double* features,
                            const unsigned char* outcomes, const unsigned char* groups,
                            const unsigned char* reference, const char* const* feature_names,
                            const char* const* group_names, fp_dataset** out) {
  return Guard([&] {
    Require(features, "features");
    Require(outcomes, "outcomes");
    Require(groups, "groups");
    Require(feature_names, "feature_names");
    Require(group_names, "group_names");
    Require(out, "out");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::MatrixXd x = Eigen::Map<const RowMajor>(features, static_cast<Eigen::Index>(n),
                                                   static_cast<Eigen::Index>(p));
    std::vector<std::string> fnames, gnames;
    for (size_t c = 0; c < p; ++c) {
      Require(feature_names[c], "feature name");
      fnames.emplace_back(feature_names[c]);
    }
    for (size_t g = 0; g < num_groups; ++g) {
      Require(group_names[g], "group name");
      gnames.emplace_back(group_names[g]);
    }
    std::vector<fairpen::Indicator> cols(num_groups, fairpen::Indicator(n));
    for (size_t i = 0; i < n; ++i) {
      for (size_t g = 0; g < num_groups; ++g) cols[g][i] = groups[i * num_groups + g];
    }
    std::optional<fairpen::Indicator> ref;
    if (reference != nullptr) ref = fairpen::Indicator(reference, reference + n);
    *out = new fp_dataset{fairpen::Dataset::Create(std::move(x), std::move(fnames),
                                                   fairpen::Indicator(outcomes, outcomes + n),
                                                   std::move(cols), std::move(gnames),
                                                   std::move(ref))};
  });
}

fp_status fp_dataset_generate(const char* simulation_json, fp_dataset** out) {
  return Guard([&] {
    Require(out, "out");
    const auto cfg = fairpen::SimulationConfigFromJson(ParseJson(simulation_json, "simulation"));
    fairpen::Dataset d = fairpen::Generate(cfg.sim);
    if (cfg.drop_column) d = d.DropFeature(*cfg.drop_column);
    *out = new fp_dataset{std::move(d)};
  });
}

fp_status fp_dataset_drop_feature(const fp_dataset* d, const char* name, fp_dataset** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(name, "name");
    Require(out, "out");
    *out = new fp_dataset{d->value.DropFeature(name)};
  });
}

fp_status fp_dataset_write_csv(const fp_dataset* d, const char* path) {
  return Guard([&] {
    Require(d, "dataset");
    Require(path, "path");
    fairpen::WriteCsv(d->value, path);
  });
}

size_t fp_dataset_rows(const fp_dataset* d) { return d ? d->value.rows() : 0; }
size_t fp_dataset_cols(const fp_dataset* d) { return d ? d->value.cols() : 0; }
size_t fp_dataset_groups(const fp_dataset* d) { return d ? d->value.num_groups() : 0; }
void fp_dataset_free(fp_dataset* d) { delete d; }

fp_status fp_fit_reduction(const fp_dataset* d, const double* lambdas, size_t num_lambdas,
                           const char* solver_json, double threshold, fp_model** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(out, "out");
    const auto solver = fairpen::SolverConfigFromJson(ParseJson(solver_json, "solver"));
    fairpen::ScoreConfig{0.5, fairpen::Synthesis::kPopulationWeighted, threshold}.Validate();
    *out = new fp_model{
        fairpen::FitViaReduction(d->value, Lambdas(lambdas, num_lambdas), solver, threshold)};
  });
}

fp_status fp_fit_direct(const fp_dataset* d, const double* lambdas, size_t num_lambdas,
                        const char* solver_json, double threshold, fp_model** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(out, "out");
    const auto solver = fairpen::SolverConfigFromJson(ParseJson(solver_json, "solver"));
    fairpen::ScoreConfig{0.5, fairpen::Synthesis::kPopulationWeighted, threshold}.Validate();
    *out = new fp_model{
        fairpen::FitPenalizedDirect(d->value, Lambdas(lambdas, num_lambdas), solver, threshold)};
  });
}

fp_status fp_reduction_audit_csv(const fp_dataset* d, const double* lambdas, size_t num_lambdas,
                                 char** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(out, "out");
    *out = Copy(fairpen::ReducedProblemCsv(fairpen::Reduce(d->value, Lambdas(lambdas, num_lambdas))));
  });
}

fp_status fp_model_from_json(const char* json, fp_model** out) {
  return Guard([&] {
    Require(json, "json");
    Require(out, "out");
    Json j;
    try {
      j = Json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      Fail(ErrorCode::kData, std::string("invalid model JSON: ") + e.what());
    }
    *out = new fp_model{fairpen::ModelFromJson(j)};
  });
}

fp_status fp_model_to_json(const fp_model* m, char** out) {
  return Guard([&] {
    Require(m, "model");
    Require(out, "out");
    *out = Copy(fairpen::ModelToJson(m->value).dump(2) + "\n");
  });
}

fp_status fp_model_set_threshold(fp_model* m, double threshold) {
  return Guard([&] {
    Require(m, "model");
    if (!(threshold > 0.0 && threshold < 1.0)) {
      Fail(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
    }
    m->value.threshold = threshold;
  });
}

size_t fp_model_num_features(const fp_model* m) {
  return m ? static_cast<size_t>(m->value.coefficients.size()) : 0;
}

fp_status fp_model_predict_proba(const fp_model* m, const fp_dataset* d, double* out,
                                 size_t capacity) {
  return Guard([&] {
    Require(m, "model");
    Require(d, "dataset");
    Require(out, "out");
    if (capacity < d->value.rows()) Fail(ErrorCode::kInvalidArgument, "output buffer too small");
    if (m->value.feature_names != d->value.feature_names()) {
      Fail(ErrorCode::kData, "model features do not match data features");
    }
    const Eigen::VectorXd p = m->value.PredictProba(d->value.features());
    std::copy(p.data(), p.data() + p.size(), out);
  });
}

fp_status fp_model_evaluate(const fp_model* m, const fp_dataset* d, char** report_json,
                            char** report_table) {
  return Guard([&] {
    Require(m, "model");
    Require(d, "dataset");
    const auto report = fairpen::BuildReport(m->value, d->value);
    std::string json = fairpen::ReportToJson(report).dump(2) + "\n";
    std::string table = fairpen::ReportTable(report);
    char* j = report_json ? Copy(json) : nullptr;
    char* t = nullptr;
    try {
      t = report_table ? Copy(table) : nullptr;
    } catch (...) {
      std::free(j);
      throw;
    }
    if (report_json) *report_json = j;
    if (report_table) *report_table = t;
  });
}

void fp_model_free(fp_model* m) { delete m; }

fp_status fp_search_run(const fp_dataset* d, const char* search_json, const char* solver_json,
                        double threshold, int threads, fp_search** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(out, "out");
    const auto search = fairpen::SearchConfigFromJson(ParseJson(search_json, "search"), threshold);
    const auto solver = fairpen::SolverConfigFromJson(ParseJson(solver_json, "solver"));
    *out = new fp_search{fairpen::RunSearch(d->value, search, solver, threads),
                         d->value.group_names()};
  });
}

fp_status fp_search_to_json(const fp_search* s, char** out) {
  return Guard([&] {
    Require(s, "search");
    Require(out, "out");
    *out = Copy(fairpen::SearchResultToJson(s->value, s->group_names).dump(2) + "\n");
  });
}

size_t fp_search_variant_count(const fp_search* s) { return s ? s->value.per_variant.size() : 0; }

fp_status fp_search_variant_name(const fp_search* s, size_t variant, char** out) {
  return Guard([&] {
    Require(s, "search");
    Require(out, "out");
    if (variant >= s->value.per_variant.size()) {
      Fail(ErrorCode::kInvalidArgument, "variant index out of range");
    }
    *out = Copy(s->value.per_variant[variant].config.Name());
  });
}

fp_status fp_search_variant_model(const fp_search* s, size_t variant, fp_model** out) {
  return Guard([&] {
    Require(s, "search");
    Require(out, "out");
    if (variant >= s->value.per_variant.size()) {
      Fail(ErrorCode::kInvalidArgument, "variant index out of range");
    }
    *out = new fp_model{s->value.per_variant[variant].model};
  });
}

fp_status fp_search_baseline_model(const fp_search* s, fp_model** out) {
  return Guard([&] {
    Require(s, "search");
    Require(out, "out");
    *out = new fp_model{s->value.baseline_model};
  });
}

void fp_search_free(fp_search* s) { delete s; }

fp_status fp_simulation_run(const char* simulation_json, const char* search_json,
                            const char* solver_json, double threshold, int threads,
                            fp_simulation** out) {
  return Guard([&] {
    Require(out, "out");
    const auto sim = fairpen::SimulationConfigFromJson(ParseJson(simulation_json, "simulation"));
    const auto search = fairpen::SearchConfigFromJson(ParseJson(search_json, "search"), threshold);
    const auto solver = fairpen::SolverConfigFromJson(ParseJson(solver_json, "solver"));
    fairpen::ReplicationOptions options;
    options.replications = sim.replications;
    options.drop_column = sim.drop_column;
    options.baseline_threshold = threshold;
    auto reps = fairpen::RunReplications(sim.sim, options, search, solver, threads);
    *out = new fp_simulation{std::move(reps), {"A", "B", "C"}};
  });
}

size_t fp_simulation_replication_count(const fp_simulation* s) {
  return s ? s->replications.size() : 0;
}

fp_status fp_simulation_replication_json(const fp_simulation* s, size_t replication, char** out) {
  return Guard([&] {
    Require(s, "simulation");
    Require(out, "out");
    if (replication >= s->replications.size()) {
      Fail(ErrorCode::kInvalidArgument, "replication index out of range");
    }
    *out = Copy(fairpen::ReplicationToJson(s->replications[replication], s->group_names).dump());
  });
}

fp_status fp_simulation_summary_csv(const fp_simulation* s, char** out) {
  return Guard([&] {
    Require(s, "simulation");
    Require(out, "out");
    *out = Copy(fairpen::SummaryCsv(fairpen::Summarize(s->replications, s->group_names)));
  });
}

fp_status fp_simulation_frontier_csv(const fp_simulation* s, char** out) {
  return Guard([&] {
    Require(s, "simulation");
    Require(out, "out");
    *out = Copy(fairpen::FrontierCsv(s->replications));
  });
}

void fp_simulation_free(fp_simulation* s) { delete s; }

}  // extern "C"
