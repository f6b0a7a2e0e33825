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

#include <algorithm>
#include <set>
#include <string>

#include "tabcondense/encoding.hpp"
#include "tabcondense/error.hpp"

namespace tabcondense {

namespace {

constexpr char kBoundary = '\x01';

std::set<std::string> padded_ngrams(std::string_view s, std::size_t n) {
  std::string padded(n - 1, kBoundary);
  padded.append(s);
  padded.append(n - 1, kBoundary);
  std::set<std::string> grams;
  if (padded.size() < n) return grams;
  for (std::size_t i = 0; i + n <= padded.size(); ++i) {
    grams.emplace(padded.substr(i, n));
  }
  return grams;
}

}  // namespace

double ngram_similarity(std::string_view a, std::string_view b, std::size_t n) {
  if (n == 0) throw InvalidArgument("encoding", "n-gram order must be >= 1");
  if (a == b) return 1.0;
  if (a.empty() || b.empty()) return 0.0;

  const auto ga = padded_ngrams(a, n);
  const auto gb = padded_ngrams(b, n);
  std::size_t common = 0;
  auto ia = ga.begin();
  auto ib = gb.begin();
  while (ia != ga.end() && ib != gb.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t total = ga.size() + gb.size() - common;
  return total == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(total);
}

std::vector<std::string> build_dictionary(std::span<const std::string> values) {
  std::vector<std::string> dict(values.begin(), values.end());
  std::sort(dict.begin(), dict.end());
  dict.erase(std::unique(dict.begin(), dict.end()), dict.end());
  return dict;
}

Matrix similarity_encode_column(std::span<const std::string> values,
                                std::span<const std::string> dictionary,
                                std::size_t n) {
  const std::size_t k = dictionary.size();
  // Pairwise table over the dictionary; rows are copied from it.
  Matrix table(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    table(i, i) = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      const double s = ngram_similarity(dictionary[i], dictionary[j], n);
      table(i, j) = s;
      table(j, i) = s;
    }
  }

  const bool sorted = std::is_sorted(dictionary.begin(), dictionary.end());
  auto position = [&](const std::string& v) -> std::size_t {
    if (sorted) {
      auto it = std::lower_bound(dictionary.begin(), dictionary.end(), v);
      if (it != dictionary.end() && *it == v) {
        return static_cast<std::size_t>(it - dictionary.begin());
      }
    } else {
      auto it = std::find(dictionary.begin(), dictionary.end(), v);
      if (it != dictionary.end()) {
        return static_cast<std::size_t>(it - dictionary.begin());
      }
    }
    throw InvalidArgument("encoding", "value '" + v +
                                          "' not in the fitted dictionary");
  };

  Matrix out(values.size(), k);
  for (std::size_t r = 0; r < values.size(); ++r) {
    const auto src = table.row(position(values[r]));
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace tabcondense
