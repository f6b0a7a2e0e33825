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

#include <cstddef>
#include <vector>

#include "tabcondense/matrix.hpp"

namespace tabcondense {

enum class RowOrigin { synthesized, selected };

/// Where a condensed row came from. Synthesized rows are cluster centroids
/// (`source_row` unused); selected rows are copies of an original row.
struct RowProvenance {
  int label = 0;
  std::size_t cluster = 0;
  std::size_t member_count = 0;
  RowOrigin origin = RowOrigin::synthesized;
  std::size_t source_row = 0;

  friend bool operator==(const RowProvenance&, const RowProvenance&) = default;
};

struct CondensedTable {
  Matrix rows;
  std::vector<int> labels;
  std::vector<RowProvenance> provenance;

  std::size_t size() const noexcept { return labels.size(); }
  bool empty() const noexcept { return labels.empty(); }
  std::vector<std::size_t> label_counts(std::size_t num_classes) const;
};

}  // namespace tabcondense
