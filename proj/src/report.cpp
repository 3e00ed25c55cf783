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

#include "fairpen/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "fairpen/error.hpp"

namespace fairpen {
namespace {

ReportRow Row(const std::string& name, std::span<const std::uint8_t> member,
              std::span<const std::uint8_t> y, std::span<const std::uint8_t> yhat) {
  Indicator ys, yhats;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!member.empty() && !member[i]) continue;
    ys.push_back(y[i]);
    yhats.push_back(yhat[i]);
  }
  ReportRow row;
  row.name = name;
  row.n = static_cast<std::int64_t>(ys.size());
  if (ys.empty()) return row;
  std::int64_t positives = 0;
  for (auto v : ys) positives += v;
  row.prevalence = static_cast<double>(positives) / static_cast<double>(ys.size());
  const auto m = ComputeClassificationMetrics(ys, yhats);
  row.sensitivity = m.sensitivity;
  row.specificity = m.specificity;
  row.accuracy = m.accuracy;
  return row;
}

std::string Cell(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

}  // namespace

FairnessReport BuildReport(const FittedModel& model, const Dataset& d) {
  if (model.feature_names != d.feature_names()) {
    Fail(ErrorCode::kData, "model features do not match data features");
  }
  const Indicator predictions = model.Predict(d.features());
  FairnessReport r;
  r.threshold = model.threshold;
  r.group_names = d.group_names();
  for (std::size_t g = 0; g < d.num_groups(); ++g) {
    r.rows.push_back(Row(d.group_names()[g], d.group(g), d.outcomes(), predictions));
  }
  r.rows.push_back(Row("Reference", d.reference(), d.outcomes(), predictions));
  r.rows.push_back(Row("Total", {}, d.outcomes(), predictions));

  bool all_defined = true;
  std::vector<double> defined;
  for (std::size_t g = 0; g < d.num_groups(); ++g) {
    try {
      const double u = UnfairnessEo(predictions, g, d);
      r.unfairness.emplace_back(u);
      defined.push_back(u);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUndefinedMetric) throw;
      r.unfairness.emplace_back(std::nullopt);
      all_defined = false;
    }
  }
  if (all_defined) r.synthesized = Synthesize(defined, ComputeGroupStats(d));
  return r;
}

std::string ReportTable(const FairnessReport& report) {
  std::size_t width = 10;
  for (const auto& row : report.rows) width = std::max(width, row.name.size() + 2);
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-*s %10s %11s %12s %12s %10s\n", static_cast<int>(width), "",
                "n", "Prevalence", "Sensitivity", "Specificity", "Accuracy");
  os << buf;
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%-*s %10lld %11s %12s %12s %10s\n", static_cast<int>(width),
                  row.name.c_str(), static_cast<long long>(row.n),
                  Cell(row.n ? std::optional<double>(row.prevalence) : std::nullopt).c_str(),
                  Cell(row.sensitivity).c_str(), Cell(row.specificity).c_str(),
                  Cell(row.n ? std::optional<double>(row.accuracy) : std::nullopt).c_str());
    os << buf;
  }
  os << "\nUnfairness (reference TPR - group TPR), threshold " << Cell(report.threshold) << "\n";
  for (std::size_t g = 0; g < report.group_names.size(); ++g) {
    std::snprintf(buf, sizeof(buf), "  %-*s %10s\n", static_cast<int>(width),
                  report.group_names[g].c_str(), Cell(report.unfairness[g]).c_str());
    os << buf;
  }
  if (report.synthesized) {
    const auto& s = *report.synthesized;
    std::snprintf(buf, sizeof(buf), "  %-*s %10s\n  %-*s %10s\n  %-*s %10s\n",
                  static_cast<int>(width), "U_PW", Cell(s.population_weighted).c_str(),
                  static_cast<int>(width), "U_GW", Cell(s.group_weighted).c_str(),
                  static_cast<int>(width), "U_Max", Cell(s.maximum).c_str());
    os << buf;
  }
  return os.str();
}

}  // namespace fairpen
