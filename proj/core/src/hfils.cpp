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

#include "tabcondense/hfils.hpp"

#include <chrono>
#include <cmath>
#include <future>

#include "tabcondense/error.hpp"

namespace tabcondense {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void SolverParams::validate() const {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw InvalidArgument("ccap", "ratio must lie in (0, 1]");
  if (max_iters < 1) throw InvalidArgument("ccap", "max_iters must be >= 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("ccap", "gamma must lie in [0, 1]");
  if (!(step_decay > 0.0 && step_decay < 1.0)) {
    throw InvalidArgument("ccap", "step decay must lie in (0, 1)");
  }
  if (!(tolerance >= 0.0)) throw InvalidArgument("ccap", "tolerance must be >= 0");
  if (patience < 1) throw InvalidArgument("ccap", "patience must be >= 1");
  clustering.validate();
}

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::max_iters:
      return "max_iters";
    case StopReason::early_stop:
      return "early_stop";
    case StopReason::no_move:
      return "no_move";
  }
  return "max_iters";
}

SearchTrace local_search(const Allocation& initial, const AllocationObjective& objective,
                         const SolverParams& params, const SearchObserver& observer) {
  params.validate();
  if (!initial.feasible()) throw InvalidArgument("ccap", "initial allocation is infeasible");

  SearchTrace trace;
  trace.initial = initial;
  trace.initial_objective = objective(initial);
  trace.evaluations = 1;
  if (observer) observer(initial, trace.initial_objective);
  trace.best = initial;
  trace.best_objective = trace.initial_objective;

  std::size_t max_step = initial_max_step(initial);
  trace.max_step_history.push_back(max_step);
  std::size_t clock = 0;
  Rng rng(derive_seed(params.seed, 0x5ea4c4));

  for (std::size_t t = 0; t < params.max_iters; ++t) {
    if (!has_soft_move(trace.best)) {
      trace.stop_reason = StopReason::no_move;
      break;
    }
    trace.iterations = t + 1;
    const SoftMove move = soft_allocate(trace.best, max_step, rng);
    const double loss = objective(move.allocation);
    ++trace.evaluations;
    if (observer) observer(move.allocation, loss);

    const double incumbent = trace.best_objective;
    if (loss < incumbent) {
      trace.best = move.allocation;
      trace.best_objective = loss;
      trace.accepted_objectives.push_back(loss);
      max_step = std::max<std::size_t>(
          static_cast<std::size_t>(std::floor(static_cast<double>(max_step) * params.step_decay)),
          1);
      trace.max_step_history.push_back(max_step);
    }
    if (loss < incumbent - params.tolerance) {
      clock = 0;
    } else if (++clock >= params.patience) {
      trace.early_stopped = true;
      trace.stop_reason = StopReason::early_stop;
      break;
    }
  }
  return trace;
}

std::vector<ClusterResult> cluster_allocation(const EncodedDataset& dataset,
                                              const Allocation& allocation,
                                              const ClusteringParams& params,
                                              Execution execution) {
  const std::size_t c = dataset.num_classes();
  if (allocation.num_classes() != c) {
    throw InvalidArgument("ccap", "allocation length differs from class count");
  }
  std::vector<ClusterResult> partitions(c);
  if (execution == Execution::parallel && c > 1) {
    std::vector<std::future<ClusterResult>> jobs;
    for (std::size_t i = 0; i < c; ++i) {
      jobs.push_back(std::async(std::launch::async, [&, i] {
        return cluster_class(dataset, i, allocation.counts[i], params);
      }));
    }
    for (std::size_t i = 0; i < c; ++i) partitions[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < c; ++i) {
      partitions[i] = cluster_class(dataset, i, allocation.counts[i], params);
    }
  }
  return partitions;
}

CondensedTable build_condensed(const EncodedDataset& dataset, const Allocation& best,
                               const std::vector<ClusterResult>& partitions) {
  const std::size_t c = dataset.num_classes();
  if (partitions.size() != c || best.num_classes() != c) {
    throw InvalidArgument("ccap", "partition count differs from class count");
  }
  std::size_t total = 0;
  for (std::size_t i = 0; i < c; ++i) {
    if (partitions[i].k() != best.counts[i]) {
      throw InvalidArgument("ccap", "class " + std::to_string(i) + " has " +
                                        std::to_string(partitions[i].k()) +
                                        " clusters, allocation says " +
                                        std::to_string(best.counts[i]));
    }
    if (partitions[i].assignment.size() != dataset.class_sizes[i]) {
      throw InvalidArgument("ccap", "partition of class " + std::to_string(i) +
                                        " does not cover the class");
    }
    total += best.counts[i];
  }

  CondensedTable out;
  out.rows = Matrix(total, dataset.dim());
  std::size_t r = 0;
  for (std::size_t i = 0; i < c; ++i) {
    const auto& part = partitions[i];
    std::vector<std::size_t> members(part.k(), 0);
    for (auto a : part.assignment) ++members[a];
    for (std::size_t j = 0; j < part.k(); ++j, ++r) {
      const auto src = part.centroids.row(j);
      std::copy(src.begin(), src.end(), out.rows.row(r).begin());
      out.labels.push_back(static_cast<int>(i));
      out.provenance.push_back({static_cast<int>(i), j, members[j], RowOrigin::synthesized, 0});
    }
  }
  return out;
}

CondensationResult hfils(const EncodedDataset& dataset, const SolverParams& params,
                         const SearchObserver& observer) {
  params.validate();
  const Allocation initial = init_allocation(dataset.class_sizes, params.ratio);
  LossCache cache(dataset.num_classes(), initial.budget(), params.gamma);
  return hfils(dataset, params, cache, observer);
}

CondensationResult hfils(const EncodedDataset& dataset, const SolverParams& params,
                         LossCache& cache, const SearchObserver& observer) {
  params.validate();
  const Allocation initial = init_allocation(dataset.class_sizes, params.ratio);
  if (cache.max_k() < initial.budget()) {
    throw InvalidArgument("ccap", "loss cache is smaller than the budget");
  }

  const auto search_start = Clock::now();
  const AllocationObjective objective = [&](const Allocation& a) {
    return class_wise_clustering(dataset, a.counts, params.gamma, cache, params.clustering,
                                 params.execution);
  };

  CondensationResult result;
  result.trace = local_search(initial, objective, params, observer);
  result.search_seconds = seconds_since(search_start);

  const auto final_start = Clock::now();
  result.allocation = result.trace.best;
  result.objective = result.trace.best_objective;
  result.iterations = result.trace.iterations;
  result.early_stopped = result.trace.early_stopped;
  result.partitions =
      cluster_allocation(dataset, result.allocation, params.clustering, params.execution);
  result.condensed = build_condensed(dataset, result.allocation, result.partitions);
  result.final_clustering_seconds = seconds_since(final_start);
  result.cache_computed = cache.computed();
  result.cache_hits = cache.hits();
  return result;
}

}  // namespace tabcondense
