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

#ifndef FAIRPEN_REPORT_HPP_
#define FAIRPEN_REPORT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairpen/data.hpp"
#include "fairpen/metrics.hpp"
#include "fairpen/model.hpp"

namespace fairpen {

// One line of the per-population table.
struct ReportRow {
  std::string name;
  std::int64_t n = 0;
  double prevalence = 0.0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  double accuracy = 0.0;
};

struct FairnessReport {
  double threshold = 0.5;
  // Groups in dataset order, then "Reference", then "Total".
  std::vector<ReportRow> rows;
  std::vector<std::string> group_names;
  // Signed U_EO per group; empty when the group or the reference has no
  // positive outcomes.
  std::vector<std::optional<double>> unfairness;
  // Present only when every group's unfairness is defined.
  std::optional<SynthesizedUnfairness> synthesized;
};

FairnessReport BuildReport(const FittedModel& model, const Dataset& d);

// Aligned plain-text rendering (n, prevalence, sensitivity, specificity,
// accuracy per population, then unfairness).
std::string ReportTable(const FairnessReport& report);

}  // namespace fairpen

#endif  // FAIRPEN_REPORT_HPP_
