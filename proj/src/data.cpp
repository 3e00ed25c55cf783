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

#include "fairpen/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "fairpen/error.hpp"
#include "format.hpp"

namespace fairpen {
namespace {

void CheckBinary(const Indicator& column, const std::string& what) {
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (column[i] > 1) {
      Fail(ErrorCode::kData, "non-binary " + what + " at row " + std::to_string(i));
    }
  }
}

// Splits one CSV record. Double-quoted fields may contain commas; a doubled
// quote inside quotes is a literal quote.
std::vector<std::string> SplitRecord(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Location(const std::filesystem::path& path, std::size_t line,
                     const std::string& column) {
  return path.string() + ":" + std::to_string(line) + " column '" + column + "'";
}

std::uint8_t ParseBinary(std::string_view cell, const std::string& what,
                         const std::string& where) {
  cell = Trim(cell);
  if (cell.empty()) Fail(ErrorCode::kData, "missing value at " + where);
  long value = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || (value != 0 && value != 1)) {
    Fail(ErrorCode::kData, "non-binary " + what + " '" + std::string(cell) + "' at " + where);
  }
  return static_cast<std::uint8_t>(value);
}

double ParseReal(std::string_view cell, const std::string& where) {
  cell = Trim(cell);
  if (cell.empty()) Fail(ErrorCode::kData, "missing value at " + where);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    Fail(ErrorCode::kData, "non-numeric feature '" + std::string(cell) + "' at " + where);
  }
  return value;
}

}  // namespace

Dataset Dataset::Create(Eigen::MatrixXd features, std::vector<std::string> feature_names,
                        Indicator outcomes, std::vector<Indicator> groups,
                        std::vector<std::string> group_names,
                        std::optional<Indicator> reference) {
  const std::size_t n = outcomes.size();
  if (n == 0) Fail(ErrorCode::kData, "dataset has no rows");
  if (features.cols() == 0) Fail(ErrorCode::kData, "dataset has no feature columns");
  if (groups.empty()) Fail(ErrorCode::kData, "dataset has no group columns");
  if (static_cast<std::size_t>(features.rows()) != n) {
    Fail(ErrorCode::kData, "feature rows do not match outcome count");
  }
  if (feature_names.size() != static_cast<std::size_t>(features.cols())) {
    Fail(ErrorCode::kData, "feature name count does not match feature columns");
  }
  if (group_names.size() != groups.size()) {
    Fail(ErrorCode::kData, "group name count does not match group columns");
  }
  if (!features.allFinite()) Fail(ErrorCode::kData, "non-finite feature value");
  CheckBinary(outcomes, "outcome");
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() != n) {
      Fail(ErrorCode::kData, "group '" + group_names[g] + "' has wrong length");
    }
    CheckBinary(groups[g], "indicator in group '" + group_names[g] + "'");
  }

  Indicator ref;
  if (reference.has_value()) {
    ref = std::move(*reference);
    if (ref.size() != n) Fail(ErrorCode::kData, "reference indicator has wrong length");
    CheckBinary(ref, "reference indicator");
    for (std::size_t i = 0; i < n; ++i) {
      if (!ref[i]) continue;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g][i]) {
          Fail(ErrorCode::kData, "reference overlaps group '" + group_names[g] +
                                     "' at row " + std::to_string(i));
        }
      }
    }
  } else {
    ref.assign(n, 1);
    for (const auto& column : groups) {
      for (std::size_t i = 0; i < n; ++i) {
        if (column[i]) ref[i] = 0;
      }
    }
  }

  Dataset d;
  d.features_ = std::move(features);
  d.feature_names_ = std::move(feature_names);
  d.outcomes_ = std::move(outcomes);
  d.groups_ = std::move(groups);
  d.group_names_ = std::move(group_names);
  d.reference_ = std::move(ref);
  return d;
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  if (rows.empty()) Fail(ErrorCode::kData, "empty row subset");
  Dataset d;
  d.features_.resize(static_cast<Eigen::Index>(rows.size()), features_.cols());
  d.outcomes_.resize(rows.size());
  d.reference_.resize(rows.size());
  d.groups_.assign(groups_.size(), Indicator(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t i = rows[k];
    if (i >= outcomes_.size()) Fail(ErrorCode::kInvalidArgument, "row index out of range");
    d.features_.row(static_cast<Eigen::Index>(k)) = features_.row(static_cast<Eigen::Index>(i));
    d.outcomes_[k] = outcomes_[i];
    d.reference_[k] = reference_[i];
    for (std::size_t g = 0; g < groups_.size(); ++g) d.groups_[g][k] = groups_[g][i];
  }
  d.feature_names_ = feature_names_;
  d.group_names_ = group_names_;
  return d;
}

Dataset Dataset::DropFeature(std::string_view name) const {
  auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
  if (it == feature_names_.end()) {
    Fail(ErrorCode::kData, "cannot drop unknown feature '" + std::string(name) + "'");
  }
  if (feature_names_.size() == 1) Fail(ErrorCode::kData, "cannot drop the only feature");
  const auto col = static_cast<Eigen::Index>(it - feature_names_.begin());
  Dataset d = *this;
  const Eigen::Index p = features_.cols();
  d.features_.resize(features_.rows(), p - 1);
  d.features_.leftCols(col) = features_.leftCols(col);
  d.features_.rightCols(p - 1 - col) = features_.rightCols(p - 1 - col);
  d.feature_names_.erase(d.feature_names_.begin() + col);
  return d;
}

GroupStats ComputeGroupStats(const Dataset& d) {
  GroupStats s;
  const auto y = d.outcomes();
  s.group_sizes.assign(d.num_groups(), 0);
  s.group_positive_counts.assign(d.num_groups(), 0);
  for (std::size_t g = 0; g < d.num_groups(); ++g) {
    const auto member = d.group(g);
    for (std::size_t i = 0; i < d.rows(); ++i) {
      s.group_sizes[g] += member[i];
      s.group_positive_counts[g] += member[i] & y[i];
    }
  }
  const auto ref = d.reference();
  for (std::size_t i = 0; i < d.rows(); ++i) {
    s.reference_size += ref[i];
    s.reference_positive_count += ref[i] & y[i];
  }
  return s;
}

Dataset LoadCsv(const std::filesystem::path& path, const CsvSchema& schema) {
  if (schema.outcome.empty()) Fail(ErrorCode::kConfig, "schema names no outcome column");
  if (schema.features.empty()) Fail(ErrorCode::kConfig, "schema names no feature columns");
  if (schema.groups.empty()) Fail(ErrorCode::kConfig, "schema names no group columns");
  if (schema.reference_column.has_value() == schema.reference_complement) {
    Fail(ErrorCode::kConfig,
         "schema must set exactly one of a reference column or complement mode");
  }

  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || Trim(line).empty()) {
    Fail(ErrorCode::kData, "empty file '" + path.string() + "'");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::unordered_map<std::string, std::size_t> header;
  {
    const auto names = SplitRecord(line);
    for (std::size_t c = 0; c < names.size(); ++c) {
      header.emplace(std::string(Trim(names[c])), c);
    }
  }
  auto column = [&](const std::string& name) {
    auto it = header.find(name);
    if (it == header.end()) {
      Fail(ErrorCode::kData, "missing column '" + name + "' in '" + path.string() + "'");
    }
    return it->second;
  };
  const std::size_t outcome_col = column(schema.outcome);
  std::vector<std::size_t> feature_cols, group_cols;
  for (const auto& f : schema.features) feature_cols.push_back(column(f));
  for (const auto& g : schema.groups) group_cols.push_back(column(g));
  std::optional<std::size_t> reference_col;
  if (schema.reference_column) reference_col = column(*schema.reference_column);

  std::vector<double> values;
  Indicator outcomes;
  std::vector<Indicator> groups(group_cols.size());
  Indicator reference;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto cells = SplitRecord(line);
    if (cells.size() != header.size()) {
      Fail(ErrorCode::kData, path.string() + ":" + std::to_string(line_no) + " has " +
                                 std::to_string(cells.size()) + " fields, header has " +
                                 std::to_string(header.size()));
    }
    outcomes.push_back(ParseBinary(cells[outcome_col], "outcome",
                                   Location(path, line_no, schema.outcome)));
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      values.push_back(
          ParseReal(cells[feature_cols[f]], Location(path, line_no, schema.features[f])));
    }
    for (std::size_t g = 0; g < group_cols.size(); ++g) {
      groups[g].push_back(ParseBinary(cells[group_cols[g]], "group indicator",
                                      Location(path, line_no, schema.groups[g])));
    }
    if (reference_col) {
      reference.push_back(ParseBinary(cells[*reference_col], "reference indicator",
                                      Location(path, line_no, *schema.reference_column)));
    }
  }
  if (outcomes.empty()) Fail(ErrorCode::kData, "empty file '" + path.string() + "'");

  const auto n = static_cast<Eigen::Index>(outcomes.size());
  const auto p = static_cast<Eigen::Index>(feature_cols.size());
  Eigen::MatrixXd features =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          values.data(), n, p);
  std::optional<Indicator> ref;
  if (reference_col) ref = std::move(reference);
  return Dataset::Create(std::move(features), schema.features, std::move(outcomes),
                         std::move(groups), schema.groups, std::move(ref));
}

CsvSchema SchemaFor(const Dataset& d) {
  CsvSchema s;
  s.outcome = std::string(kOutcomeColumn);
  s.features = d.feature_names();
  s.groups = d.group_names();
  s.reference_column = std::string(kReferenceColumn);
  return s;
}

void WriteCsv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  for (const auto& f : d.feature_names()) out << f << ',';
  out << kOutcomeColumn;
  for (const auto& g : d.group_names()) out << ',' << g;
  out << ',' << kReferenceColumn << '\n';
  const auto& x = d.features();
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (Eigen::Index c = 0; c < x.cols(); ++c) out << FormatDouble(x(r, c)) << ',';
    out << int{d.outcomes()[i]};
    for (std::size_t g = 0; g < d.num_groups(); ++g) out << ',' << int{d.group(g)[i]};
    out << ',' << int{d.reference()[i]} << '\n';
  }
  if (!out) Fail(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

}  // namespace fairpen
