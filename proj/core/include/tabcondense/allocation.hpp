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

#include "tabcondense/random.hpp"

namespace tabcondense {

/// Per-class cluster counts n_i' with the class sizes n_i they refer to.
/// Feasible when sum(counts) = budget and 1 <= n_i' <= cap(i) for all i,
/// where cap(i) = min(budget - (C - 1), n_i).
struct Allocation {
  std::vector<std::size_t> counts;
  std::vector<std::size_t> class_sizes;

  std::size_t num_classes() const noexcept { return counts.size(); }
  std::size_t budget() const noexcept;
  /// Cap for class i under the current budget.
  std::size_t cap(std::size_t i) const noexcept;
  bool feasible() const noexcept;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// n_i' = max(floor(n_i * ratio), 1). Throws InvalidArgument unless
/// 0 < ratio <= 1 and every class size is positive.
Allocation init_allocation(const std::vector<std::size_t>& class_sizes, double ratio);

/// Population standard deviation of the counts.
double count_stddev(const std::vector<std::size_t>& counts);

/// Initial maximum step: max(floor(std(counts)), 1).
std::size_t initial_max_step(const Allocation& allocation);

/// True when some class has n_i' > 1 and some other class has headroom.
bool has_soft_move(const Allocation& allocation);

enum class MoveStatus { moved, no_source, no_target, unchanged, aborted };

struct SoftMove {
  Allocation allocation;
  MoveStatus status = MoveStatus::unchanged;
  std::size_t source = 0;
  /// Step after clamping to n_src' - 1.
  std::size_t step = 0;
  /// Clusters the caps could not absorb; non-zero only for `aborted`.
  std::size_t stranded = 0;
};

/// Moves `step` clusters (clamped to n_src' - 1) out of `source` and spreads
/// them over the other classes with headroom, proportionally to headroom;
/// rounding leftovers go one each to the largest-headroom classes (ties by
/// ascending index). If the caps cannot absorb the whole step the move is
/// aborted and the input comes back unchanged.
SoftMove apply_soft_move(const Allocation& allocation, std::size_t source,
                         std::size_t step);

/// Samples the source uniformly over {i : n_i' > 1} and the step uniformly
/// over {1..max_step}, then applies the move. Returns `no_source` (and the
/// input unchanged) when no class can give a cluster, `no_target` when the
/// sampled source has nowhere to send one.
SoftMove soft_allocate(const Allocation& allocation, std::size_t max_step, Rng& rng);

}  // namespace tabcondense
