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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tabcondense::csv {

/// A parsed CSV document: header plus data records, all cells as text.
struct Document {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> records;
};

/// RFC-4180 parsing: comma delimiter, double-quote quoting with "" escapes,
/// quoted fields may span lines, CRLF or LF record terminators. A UTF-8 BOM
/// on the first line is dropped. Throws ParseError on ragged records and
/// unterminated quotes.
Document parse(std::string_view text);
Document read_file(const std::filesystem::path& path);

/// Quotes a field only when it contains a comma, quote, or line break.
std::string escape(std::string_view field);
void write_record(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace tabcondense::csv
