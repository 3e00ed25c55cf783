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

// JSON configuration blocks and JSON/CSV renderings of results. Parsers fill
// in defaults for absent keys and name the offending key on error.

#ifndef FAIRPEN_JSON_IO_HPP_
#define FAIRPEN_JSON_IO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fairpen/data.hpp"
#include "fairpen/model.hpp"
#include "fairpen/report.hpp"
#include "fairpen/search.hpp"
#include "fairpen/simulate.hpp"

namespace fairpen {

using Json = nlohmann::json;

struct DataConfig {
  std::string path;
  CsvSchema schema;
};

struct SimulationConfig {
  std::optional<int> setting;  // named setting the c-vector came from
  SimSetting sim;
  std::size_t replications = 50;
  std::optional<std::string> drop_column;
};

DataConfig DataConfigFromJson(const Json& j);
Json ToJson(const DataConfig& cfg);

SolverConfig SolverConfigFromJson(const Json& j);
Json ToJson(const SolverConfig& cfg);

// `threshold` is applied to every score variant.
SearchConfig SearchConfigFromJson(const Json& j, double threshold);
Json ToJson(const SearchConfig& cfg);

SimulationConfig SimulationConfigFromJson(const Json& j);
Json ToJson(const SimulationConfig& cfg);

Json ModelToJson(const FittedModel& model);
FittedModel ModelFromJson(const Json& j);

Json ReportToJson(const FairnessReport& report);
Json SearchResultToJson(const SearchResult& result, const std::vector<std::string>& group_names);
Json ReplicationToJson(const ReplicationSummary& rep, const std::vector<std::string>& group_names);

std::string SummaryCsv(const std::vector<QuantileRow>& rows);
// Non-dominated (accuracy, U_PW) points over every replication and variant.
std::string FrontierCsv(const std::vector<ReplicationSummary>& reps);

}  // namespace fairpen

#endif  // FAIRPEN_JSON_IO_HPP_
