// Copyright 2026 The tabcondense Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tabcondense/condensed_table.hpp"

namespace tabcondense {

enum class ColumnKind { numeric, categorical_string, categorical_integer };

std::string_view to_string(ColumnKind kind) noexcept;
/// Accepts "numeric", "cat_string", "cat_int" (schema-file spelling) and the
/// long names returned by to_string.
ColumnKind parse_column_kind(std::string_view text);

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  /// Distinct-value count; set for categorical kinds only.
  std::optional<std::size_t> cardinality;

  friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

/// Integer-valued columns with at most this many distinct values are
/// inferred as categorical.
inline constexpr std::size_t kCategoricalIntegerThreshold = 20;

using ColumnData = std::variant<std::vector<double>, std::vector<std::string>,
                                std::vector<std::int64_t>>;

/// A loaded table. `columns`/`data` hold the feature columns (label column
/// excluded) in file order; `labels` are contiguous class indices.
struct RawTable {
  std::vector<ColumnSchema> columns;
  std::vector<ColumnData> data;
  std::string label_column;
  std::vector<int> labels;
  /// Original label text for each class index, ascending.
  std::vector<std::string> label_values;

  std::size_t num_rows() const noexcept { return labels.size(); }
  std::size_t num_classes() const noexcept { return label_values.size(); }
  std::vector<std::size_t> class_counts() const;

  /// Row subset in the given order; keeps schema and label mapping.
  RawTable select_rows(const std::vector<std::size_t>& indices) const;
};

/// Infers a kind for every column of the file, label column included.
std::vector<ColumnSchema> infer_schema(const std::filesystem::path& path,
                                       const std::string& label_column);

/// Reads a JSON object mapping column name to "numeric" | "cat_string" |
/// "cat_int" and applies it over `schema`. Unknown names are an error.
std::vector<ColumnSchema> apply_schema_file(std::vector<ColumnSchema> schema,
                                            const std::filesystem::path& path);

RawTable load_table(const std::filesystem::path& path,
                    const std::vector<ColumnSchema>& schema,
                    const std::string& label_column);

/// Infers the schema, applies an optional override file, loads.
RawTable load_table(const std::filesystem::path& path,
                    const std::string& label_column,
                    const std::optional<std::filesystem::path>& schema_file =
                        std::nullopt);

struct SplitSpec {
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train, val, test;
};

struct TableSplit {
  RawTable train, val, test;
  SplitIndices indices;
  /// One message per (split, class) pair that received no rows.
  std::vector<std::string> warnings;
};

/// Unstratified seeded shuffle; train and val sizes are floored, test takes
/// the remainder.
SplitIndices split_indices(std::size_t num_rows, const SplitSpec& spec);
TableSplit split(const RawTable& table, const SplitSpec& spec);

/// Header f0..f{d-1},label; values printed with 9 significant digits.
void write_condensed(const CondensedTable& condensed,
                     const std::filesystem::path& path);
/// Reads a file written by write_condensed (provenance is not stored).
CondensedTable read_condensed(const std::filesystem::path& path);

/// Shortest %.9g rendering used by every numeric CSV writer.
std::string format_value(double v);

}  // namespace tabcondense
