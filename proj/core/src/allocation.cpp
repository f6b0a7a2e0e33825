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

#include "tabcondense/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabcondense/error.hpp"

namespace tabcondense {

std::size_t Allocation::budget() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t Allocation::cap(std::size_t i) const noexcept {
  const std::size_t b = budget();
  const std::size_t c = num_classes();
  const std::size_t by_budget = b + 1 >= c ? b + 1 - c : 0;
  return std::min(by_budget, class_sizes[i]);
}

bool Allocation::feasible() const noexcept {
  if (counts.empty() || counts.size() != class_sizes.size()) return false;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 1 || counts[i] > cap(i)) return false;
  }
  return true;
}

Allocation init_allocation(const std::vector<std::size_t>& class_sizes, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw InvalidArgument("ccap", "ratio must lie in (0, 1]");
  }
  if (class_sizes.empty()) throw InvalidArgument("ccap", "no classes");
  Allocation a;
  a.class_sizes = class_sizes;
  for (std::size_t n : class_sizes) {
    if (n < 1) throw InvalidArgument("ccap", "every class needs at least one row");
    const auto floored = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio));
    a.counts.push_back(std::max<std::size_t>(floored, 1));
  }
  return a;
}

double count_stddev(const std::vector<std::size_t>& counts) {
  if (counts.empty()) return 0.0;
  const double n = static_cast<double>(counts.size());
  double mean = 0.0;
  for (auto c : counts) mean += static_cast<double>(c);
  mean /= n;
  double var = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - mean;
    var += d * d;
  }
  return std::sqrt(var / n);
}

std::size_t initial_max_step(const Allocation& allocation) {
  const auto s = static_cast<std::size_t>(std::floor(count_stddev(allocation.counts)));
  return std::max<std::size_t>(s, 1);
}

bool has_soft_move(const Allocation& a) {
  const std::size_t c = a.num_classes();
  std::size_t sources = 0, with_room = 0;
  bool lone_source_has_room = false;
  for (std::size_t i = 0; i < c; ++i) {
    const bool src = a.counts[i] > 1;
    const bool room = a.counts[i] < a.cap(i);
    sources += src;
    with_room += room;
    if (src && room) lone_source_has_room = true;
  }
  if (sources == 0 || with_room == 0) return false;
  // The only failing case: one source, and it is the only class with room.
  return !(sources == 1 && with_room == 1 && lone_source_has_room);
}

SoftMove apply_soft_move(const Allocation& allocation, std::size_t source,
                         std::size_t step) {
  SoftMove move;
  move.allocation = allocation;
  move.source = source;
  const std::size_t c = allocation.num_classes();
  if (source >= c) throw InvalidArgument("ccap", "source class out of range");
  auto& counts = move.allocation.counts;
  if (counts[source] <= 1) {
    move.status = MoveStatus::no_source;
    return move;
  }

  // Caps are taken from the budget before the move; it is unchanged after.
  std::vector<std::size_t> caps(c);
  for (std::size_t i = 0; i < c; ++i) caps[i] = allocation.cap(i);

  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < c; ++i) {
    if (i != source && counts[i] < caps[i]) targets.push_back(i);
  }
  if (targets.empty()) {
    move.status = MoveStatus::no_target;
    return move;
  }

  const std::size_t s = std::min(step, counts[source] - 1);
  move.step = s;
  if (s == 0) {
    move.status = MoveStatus::unchanged;
    return move;
  }
  counts[source] -= s;

  std::vector<std::size_t> room(c, 0);
  std::size_t room_total = 0;
  for (auto t : targets) {
    room[t] = caps[t] - counts[t];
    room_total += room[t];
  }

  std::vector<std::size_t> add(c, 0);
  std::size_t assigned = 0;
  for (auto t : targets) {
    // floor(s * r_t / r_tot) in exact integer arithmetic, limited by the cap.
    add[t] = std::min(s * room[t] / room_total, room[t]);
    assigned += add[t];
  }
  std::size_t leftover = s - assigned;

  std::vector<std::size_t> order = targets;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return room[a] > room[b];
  });
  for (auto t : order) {
    if (leftover == 0) break;
    if (counts[t] + add[t] + 1 <= caps[t]) {
      ++add[t];
      --leftover;
    }
  }

  if (leftover > 0) {
    move.allocation = allocation;
    move.status = MoveStatus::aborted;
    move.stranded = leftover;
    return move;
  }
  for (auto t : targets) counts[t] += add[t];
  move.status = MoveStatus::moved;
  return move;
}

SoftMove soft_allocate(const Allocation& allocation, std::size_t max_step, Rng& rng) {
  if (max_step < 1) throw InvalidArgument("ccap", "max step must be >= 1");
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < allocation.num_classes(); ++i) {
    if (allocation.counts[i] > 1) sources.push_back(i);
  }
  if (sources.empty()) {
    SoftMove move;
    move.allocation = allocation;
    move.status = MoveStatus::no_source;
    return move;
  }
  const std::size_t source = sources[rng.index(sources.size())];
  const std::size_t step = static_cast<std::size_t>(rng.uniform_int(1, max_step));
  return apply_soft_move(allocation, source, step);
}

}  // namespace tabcondense
