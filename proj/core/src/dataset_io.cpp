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

#include "tabcondense/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "tabcondense/csv.hpp"
#include "tabcondense/error.hpp"
#include "tabcondense/random.hpp"

namespace tabcondense {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::size_t column_position(const std::vector<std::string>& header,
                            const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw InvalidArgument("dataset_io", "column '" + name + "' not in header");
  }
  return static_cast<std::size_t>(it - header.begin());
}

ColumnSchema infer_column(const std::string& name,
                          const std::vector<std::vector<std::string>>& records,
                          std::size_t col) {
  bool all_numeric = true;
  bool all_integer = true;
  std::set<std::string> distinct_text;
  std::set<double> distinct_numbers;
  for (const auto& record : records) {
    const std::string& cell = record[col];
    distinct_text.insert(cell);
    if (!all_numeric) continue;
    const auto number = parse_double(cell);
    if (!number) {
      all_numeric = false;
      continue;
    }
    distinct_numbers.insert(*number);
    if (all_integer && !parse_int(cell)) all_integer = false;
  }

  ColumnSchema schema{name, ColumnKind::categorical_string, std::nullopt};
  if (all_numeric) {
    if (all_integer && distinct_numbers.size() <= kCategoricalIntegerThreshold) {
      schema.kind = ColumnKind::categorical_integer;
      schema.cardinality = distinct_numbers.size();
    } else {
      schema.kind = ColumnKind::numeric;
    }
  } else {
    schema.cardinality = distinct_text.size();
  }
  return schema;
}

/// Ascending numeric order when every label parses as a number, else
/// lexicographic byte order.
std::vector<std::string> ordered_label_values(
    const std::vector<std::string>& raw) {
  std::vector<std::string> values(raw);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const bool numeric = std::all_of(values.begin(), values.end(), [](auto& v) {
    return parse_double(v).has_value();
  });
  if (numeric) {
    std::stable_sort(values.begin(), values.end(), [](auto& a, auto& b) {
      return *parse_double(a) < *parse_double(b);
    });
  }
  return values;
}

}  // namespace

std::string_view to_string(ColumnKind kind) noexcept {
  switch (kind) {
    case ColumnKind::numeric:
      return "numeric";
    case ColumnKind::categorical_string:
      return "categorical_string";
    case ColumnKind::categorical_integer:
      return "categorical_integer";
  }
  return "numeric";
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "numeric") return ColumnKind::numeric;
  if (text == "cat_string" || text == "categorical_string") {
    return ColumnKind::categorical_string;
  }
  if (text == "cat_int" || text == "categorical_integer") {
    return ColumnKind::categorical_integer;
  }
  throw InvalidArgument("dataset_io",
                        "unknown column kind '" + std::string(text) + "'");
}

std::vector<std::size_t> RawTable::class_counts() const {
  std::vector<std::size_t> counts(num_classes(), 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

RawTable RawTable::select_rows(const std::vector<std::size_t>& indices) const {
  RawTable out;
  out.columns = columns;
  out.label_column = label_column;
  out.label_values = label_values;
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(labels[i]);
  out.data.reserve(data.size());
  for (const auto& column : data) {
    out.data.push_back(std::visit(
        [&](const auto& values) -> ColumnData {
          std::decay_t<decltype(values)> picked;
          picked.reserve(indices.size());
          for (std::size_t i : indices) picked.push_back(values[i]);
          return picked;
        },
        column));
  }
  return out;
}

std::vector<ColumnSchema> infer_schema(const std::filesystem::path& path,
                                       const std::string& label_column) {
  const csv::Document doc = csv::read_file(path);
  if (doc.records.empty()) {
    throw InvalidArgument("dataset_io", "table " + path.string() + " is empty");
  }
  column_position(doc.header, label_column);

  std::vector<ColumnSchema> schema;
  schema.reserve(doc.header.size());
  for (std::size_t c = 0; c < doc.header.size(); ++c) {
    schema.push_back(infer_column(doc.header[c], doc.records, c));
  }
  return schema;
}

std::vector<ColumnSchema> apply_schema_file(std::vector<ColumnSchema> schema,
                                            const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("schema file " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("schema file must be a JSON object of name -> kind");
  }
  for (const auto& [name, kind] : doc.items()) {
    auto it = std::find_if(schema.begin(), schema.end(),
                           [&](const auto& s) { return s.name == name; });
    if (it == schema.end()) {
      throw InvalidArgument("dataset_io",
                            "schema file names unknown column '" + name + "'");
    }
    if (!kind.is_string()) {
      throw ParseError("schema kind for '" + name + "' must be a string");
    }
    it->kind = parse_column_kind(kind.get<std::string>());
    it->cardinality.reset();  // recomputed at load
  }
  return schema;
}

RawTable load_table(const std::filesystem::path& path,
                    const std::vector<ColumnSchema>& schema,
                    const std::string& label_column) {
  const csv::Document doc = csv::read_file(path);
  if (doc.records.empty()) {
    throw InvalidArgument("dataset_io", "table " + path.string() + " is empty");
  }
  if (schema.size() != doc.header.size()) {
    throw InvalidArgument("dataset_io", "schema has " +
                                            std::to_string(schema.size()) +
                                            " columns, header has " +
                                            std::to_string(doc.header.size()));
  }
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (schema[c].name != doc.header[c]) {
      throw InvalidArgument("dataset_io", "schema column " + std::to_string(c) +
                                              " is '" + schema[c].name +
                                              "', header says '" +
                                              doc.header[c] + "'");
    }
  }
  const std::size_t label_pos = column_position(doc.header, label_column);
  const std::size_t n = doc.records.size();

  auto cell_error = [&](std::size_t r, std::size_t c, const char* why) {
    return ParseError(path.filename().string() + ": row " +
                      std::to_string(r + 1) + ", column '" + doc.header[c] +
                      "': " + why + " ('" + doc.records[r][c] + "')");
  };

  RawTable table;
  table.label_column = label_column;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (c == label_pos) continue;
    ColumnSchema column = schema[c];
    column.cardinality.reset();
    for (std::size_t r = 0; r < n; ++r) {
      if (trim(doc.records[r][c]).empty()) {
        throw cell_error(r, c, "missing value");
      }
    }
    switch (column.kind) {
      case ColumnKind::numeric: {
        std::vector<double> values(n);
        for (std::size_t r = 0; r < n; ++r) {
          const auto v = parse_double(doc.records[r][c]);
          if (!v) throw cell_error(r, c, "not a finite number");
          values[r] = *v;
        }
        table.data.emplace_back(std::move(values));
        break;
      }
      case ColumnKind::categorical_integer: {
        std::vector<std::int64_t> values(n);
        std::unordered_set<std::int64_t> distinct;
        for (std::size_t r = 0; r < n; ++r) {
          const auto v = parse_int(doc.records[r][c]);
          if (!v) throw cell_error(r, c, "not an integer");
          values[r] = *v;
          distinct.insert(*v);
        }
        column.cardinality = distinct.size();
        table.data.emplace_back(std::move(values));
        break;
      }
      case ColumnKind::categorical_string: {
        std::vector<std::string> values(n);
        std::unordered_set<std::string> distinct;
        for (std::size_t r = 0; r < n; ++r) {
          values[r] = doc.records[r][c];
          distinct.insert(values[r]);
        }
        column.cardinality = distinct.size();
        table.data.emplace_back(std::move(values));
        break;
      }
    }
    table.columns.push_back(std::move(column));
  }

  std::vector<std::string> raw_labels(n);
  for (std::size_t r = 0; r < n; ++r) {
    raw_labels[r] = doc.records[r][label_pos];
    if (trim(raw_labels[r]).empty()) {
      throw cell_error(r, label_pos, "missing label");
    }
  }
  table.label_values = ordered_label_values(raw_labels);
  table.labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto it = std::find(table.label_values.begin(),
                              table.label_values.end(), raw_labels[r]);
    table.labels[r] = static_cast<int>(it - table.label_values.begin());
  }
  // Every class occurs by construction of label_values; N >= C follows.
  return table;
}

RawTable load_table(const std::filesystem::path& path,
                    const std::string& label_column,
                    const std::optional<std::filesystem::path>& schema_file) {
  auto schema = infer_schema(path, label_column);
  if (schema_file) schema = apply_schema_file(std::move(schema), *schema_file);
  return load_table(path, schema, label_column);
}

SplitIndices split_indices(std::size_t num_rows, const SplitSpec& spec) {
  const double fractions[] = {spec.train_fraction, spec.val_fraction,
                              spec.test_fraction};
  for (double f : fractions) {
    if (!(f > 0.0)) {
      throw InvalidArgument("dataset_io", "split fractions must be positive");
    }
  }
  if (std::abs(spec.train_fraction + spec.val_fraction + spec.test_fraction -
               1.0) > 1e-9) {
    throw InvalidArgument("dataset_io", "split fractions must sum to 1");
  }

  std::vector<std::size_t> order(num_rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(spec.seed, 0x5b117));
  rng.shuffle(std::span<std::size_t>(order));

  // Small epsilon so that e.g. 10 * 0.8 floors to 8, not 7.
  auto floored = [&](double f) {
    return static_cast<std::size_t>(
        std::floor(static_cast<double>(num_rows) * f + 1e-9));
  };
  const std::size_t n_train = std::min(floored(spec.train_fraction), num_rows);
  const std::size_t n_val =
      std::min(floored(spec.val_fraction), num_rows - n_train);

  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + n_train);
  out.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  out.test.assign(order.begin() + n_train + n_val, order.end());
  return out;
}

TableSplit split(const RawTable& table, const SplitSpec& spec) {
  TableSplit out;
  out.indices = split_indices(table.num_rows(), spec);
  out.train = table.select_rows(out.indices.train);
  out.val = table.select_rows(out.indices.val);
  out.test = table.select_rows(out.indices.test);

  const std::pair<const char*, const RawTable*> parts[] = {
      {"train", &out.train}, {"val", &out.val}, {"test", &out.test}};
  for (const auto& [name, part] : parts) {
    const auto counts = part->class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 0) {
        out.warnings.push_back(std::string(name) + " split has no rows of class " +
                               std::to_string(c) + " ('" +
                               table.label_values[c] + "')");
      }
    }
  }
  return out;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_condensed(const CondensedTable& condensed,
                     const std::filesystem::path& path) {
  if (condensed.empty()) {
    throw InvalidArgument("dataset_io", "refusing to write an empty condensed table");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");

  const std::size_t d = condensed.rows.cols();
  std::vector<std::string> fields;
  fields.reserve(d + 1);
  for (std::size_t j = 0; j < d; ++j) fields.push_back("f" + std::to_string(j));
  fields.emplace_back("label");
  csv::write_record(out, fields);
  for (std::size_t i = 0; i < condensed.size(); ++i) {
    fields.clear();
    for (double v : condensed.rows.row(i)) fields.push_back(format_value(v));
    fields.push_back(std::to_string(condensed.labels[i]));
    csv::write_record(out, fields);
  }
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

CondensedTable read_condensed(const std::filesystem::path& path) {
  const csv::Document doc = csv::read_file(path);
  if (doc.header.empty() || doc.header.back() != "label") {
    throw ParseError(path.string() + ": last column must be 'label'");
  }
  const std::size_t d = doc.header.size() - 1;
  CondensedTable out;
  out.rows = Matrix(doc.records.size(), d);
  out.labels.resize(doc.records.size());
  for (std::size_t r = 0; r < doc.records.size(); ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto v = parse_double(doc.records[r][j]);
      if (!v) {
        throw ParseError(path.string() + ": row " + std::to_string(r + 1) +
                         ", column '" + doc.header[j] + "': not a number");
      }
      out.rows(r, j) = *v;
    }
    const auto y = parse_int(doc.records[r][d]);
    if (!y || *y < 0) {
      throw ParseError(path.string() + ": row " + std::to_string(r + 1) +
                       ": bad label");
    }
    out.labels[r] = static_cast<int>(*y);
    out.provenance.push_back({out.labels[r], 0, 0, RowOrigin::synthesized, 0});
  }
  return out;
}

}  // namespace tabcondense
