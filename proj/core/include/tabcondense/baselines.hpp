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
#include <string_view>
#include <vector>

#include "tabcondense/allocation.hpp"
#include "tabcondense/condensed_table.hpp"
#include "tabcondense/encoded_dataset.hpp"

namespace tabcondense {

enum class StaticStrategy { ratio, fipc };

/// Static allocations hitting exactly `budget` clusters.
/// ratio: proportional quotas, floored and clamped to >= 1, then corrected by
///   largest remainder (ties by ascending class index).
/// fipc: floor(budget / C) per class, remainder one each to the largest
///   classes (ties by ascending index).
/// Both respect 1 <= n_i' <= min(budget - (C-1), n_i). Throws InvalidArgument
/// when budget < C or budget > sum(n_i).
Allocation static_allocation(const std::vector<std::size_t>& class_sizes,
                             std::size_t budget, StaticStrategy strategy);

/// `budget` distinct rows chosen uniformly without replacement, emitted in
/// ascending row order.
CondensedTable random_coreset(const EncodedDataset& dataset, std::size_t budget,
                              std::uint64_t seed);

/// Greedy herding on a point set: each step adds the unselected point that
/// brings the running mean of the selection closest to the full mean.
/// Returns local row indices in selection order.
std::vector<std::size_t> herding_select(const Matrix& points, std::size_t budget);

/// Farthest-first traversal from `first`. Returns local row indices.
std::vector<std::size_t> kcenter_select(const Matrix& points, std::size_t budget,
                                        std::size_t first);

/// max over points of the squared distance to the nearest listed center.
double covering_radius_sq(const Matrix& points, const std::vector<std::size_t>& centers);

/// Per-class herding with allocation.counts[i] rows from class i.
CondensedTable herding_coreset(const EncodedDataset& dataset, const Allocation& allocation);

/// Per-class k-center greedy; the first center of each class is drawn from
/// a seed derived from (seed, class).
CondensedTable kcenter_coreset(const EncodedDataset& dataset, const Allocation& allocation,
                               std::uint64_t seed);

}  // namespace tabcondense
