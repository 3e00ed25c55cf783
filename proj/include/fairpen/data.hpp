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

// Dataset model shared by every other module: real-valued features, a binary
// outcome, one membership indicator per penalized group and a reference-group
// indicator. A row may belong to several groups but never to a group and the
// reference at the same time.

#ifndef FAIRPEN_DATA_HPP_
#define FAIRPEN_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fairpen {

// 0/1 column, one entry per row.
using Indicator = std::vector<std::uint8_t>;

class Dataset {
 public:
  // Validates every invariant and throws Error(kData) on violation. When
  // `reference` is empty the reference group is the set of rows that belong
  // to no group.
  static Dataset Create(Eigen::MatrixXd features,
                        std::vector<std::string> feature_names,
                        Indicator outcomes, std::vector<Indicator> groups,
                        std::vector<std::string> group_names,
                        std::optional<Indicator> reference = std::nullopt);

  std::size_t rows() const { return outcomes_.size(); }
  std::size_t cols() const { return static_cast<std::size_t>(features_.cols()); }
  std::size_t num_groups() const { return groups_.size(); }

  const Eigen::MatrixXd& features() const { return features_; }
  std::span<const std::uint8_t> outcomes() const { return outcomes_; }
  std::span<const std::uint8_t> group(std::size_t g) const { return groups_[g]; }
  std::span<const std::uint8_t> reference() const { return reference_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& group_names() const { return group_names_; }

  // Rows in the given order; indices may repeat.
  Dataset Subset(std::span<const std::size_t> rows) const;

  // Copy without the named feature column. Throws kData if absent or if it
  // is the only feature.
  Dataset DropFeature(std::string_view name) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Dataset() = default;

  Eigen::MatrixXd features_;
  std::vector<std::string> feature_names_;
  Indicator outcomes_;
  std::vector<Indicator> groups_;
  std::vector<std::string> group_names_;
  Indicator reference_;
};

struct GroupStats {
  std::vector<std::int64_t> group_sizes;
  std::vector<std::int64_t> group_positive_counts;
  std::int64_t reference_size = 0;
  std::int64_t reference_positive_count = 0;

  friend bool operator==(const GroupStats&, const GroupStats&) = default;
};

GroupStats ComputeGroupStats(const Dataset& d);

// Column roles for CSV ingestion. Exactly one of `reference_column` or
// `reference_complement` selects the reference group.
struct CsvSchema {
  std::string outcome;
  std::vector<std::string> features;
  std::vector<std::string> groups;
  std::optional<std::string> reference_column;
  bool reference_complement = false;
};

Dataset LoadCsv(const std::filesystem::path& path, const CsvSchema& schema);

// Writes features, outcome, groups and an explicit reference column with
// round-trip precision. `SchemaFor` returns the schema that reloads it.
void WriteCsv(const Dataset& d, const std::filesystem::path& path);
CsvSchema SchemaFor(const Dataset& d);

inline constexpr std::string_view kOutcomeColumn = "Y";
inline constexpr std::string_view kReferenceColumn = "reference";

}  // namespace fairpen

#endif  // FAIRPEN_DATA_HPP_
