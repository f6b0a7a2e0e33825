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
#include <functional>
#include <optional>
#include <vector>

#include "tabcondense/allocation.hpp"
#include "tabcondense/clustering.hpp"
#include "tabcondense/condensed_table.hpp"
#include "tabcondense/encoded_dataset.hpp"
#include "tabcondense/loss_cache.hpp"

namespace tabcondense {

struct SolverParams {
  double ratio = 0.01;
  std::size_t max_iters = 1000;
  double gamma = 0.25;
  double step_decay = 0.5;
  double tolerance = 0.01;
  std::size_t patience = 10;
  std::uint64_t seed = 0;
  ClusteringParams clustering;
  Execution execution = Execution::sequential;

  void validate() const;
};

enum class StopReason { max_iters, early_stop, no_move };

std::string_view to_string(StopReason reason) noexcept;

/// Objective of an allocation; for the real problem this is
/// class_wise_clustering, for tests it can be a frozen loss table.
using AllocationObjective = std::function<double(const Allocation&)>;

/// Called for every allocation the search evaluates (initial included).
using SearchObserver = std::function<void(const Allocation&, double)>;

struct SearchTrace {
  Allocation initial;
  double initial_objective = 0.0;
  Allocation best;
  double best_objective = 0.0;
  /// Objective of every accepted proposal, in order.
  std::vector<double> accepted_objectives;
  /// Maximum step in force before the first proposal, then after each
  /// acceptance.
  std::vector<std::size_t> max_step_history;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool early_stopped = false;
  StopReason stop_reason = StopReason::max_iters;
};

/// First-improvement local search over allocations. Each iteration proposes
/// a soft move from the incumbent and accepts it iff it strictly lowers the
/// objective; acceptance shrinks the maximum step by `step_decay`. The
/// patience clock resets only when the proposal beats the incumbent by more
/// than `tolerance`.
SearchTrace local_search(const Allocation& initial, const AllocationObjective& objective,
                         const SolverParams& params,
                         const SearchObserver& observer = nullptr);

struct CondensationResult {
  CondensedTable condensed;
  Allocation allocation;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool early_stopped = false;
  std::size_t cache_computed = 0;
  std::size_t cache_hits = 0;
  SearchTrace trace;
  std::vector<ClusterResult> partitions;
  double search_seconds = 0.0;
  double final_clustering_seconds = 0.0;
};

/// Full solve: ratio initialisation, local search with a fresh loss cache,
/// then per-class k-means at the best allocation.
CondensationResult hfils(const EncodedDataset& dataset, const SolverParams& params,
                         const SearchObserver& observer = nullptr);

/// Same, using (and filling) a caller-owned cache. The cache must be sized
/// for the dataset's classes and the initial budget, with params.gamma.
CondensationResult hfils(const EncodedDataset& dataset, const SolverParams& params,
                         LossCache& cache, const SearchObserver& observer = nullptr);

/// Per-class k-means at exactly `allocation.counts`, using derived seeds.
std::vector<ClusterResult> cluster_allocation(const EncodedDataset& dataset,
                                              const Allocation& allocation,
                                              const ClusteringParams& params,
                                              Execution execution = Execution::sequential);

/// One row per cluster (its centroid), ascending class then cluster index.
/// Throws InvalidArgument if a partition's k differs from the allocation.
CondensedTable build_condensed(const EncodedDataset& dataset, const Allocation& best,
                               const std::vector<ClusterResult>& partitions);

}  // namespace tabcondense
