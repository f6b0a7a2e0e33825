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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabcondense/allocation.hpp"
#include "tabcondense/clustering.hpp"
#include "tabcondense/encoded_dataset.hpp"
#include "tabcondense/hfils.hpp"

namespace tabcondense {

/// Precomputed (already weighted) class losses L_i(k), k = 1..k_max(i), for
/// a fixed budget. Turns the allocation problem into an equality-constrained
/// multiple-choice knapsack instance.
struct FrozenLossTable {
  std::vector<std::size_t> class_sizes;
  /// losses[i][k - 1] = L_i(k).
  std::vector<std::vector<double>> losses;
  std::size_t budget = 0;

  std::size_t num_classes() const noexcept { return losses.size(); }
  std::size_t k_max(std::size_t i) const noexcept { return losses[i].size(); }
  double loss(std::size_t i, std::size_t k) const { return losses[i].at(k - 1); }

  /// Left-to-right sum of L_i(counts[i]); the same order the solver uses.
  double objective(std::span<const std::size_t> counts) const;

  /// Checks k_max(i) <= min(budget - (C-1), n_i), entries finite and >= 0.
  void validate() const;

  std::string to_json() const;
  static FrozenLossTable from_json(std::string_view text);
};

/// L_i(k) = scale_weight(n_i, gamma) * WCSS for k = 1..k_caps[i], with the
/// same derived seeds the solver's cache uses.
FrozenLossTable freeze_losses(const EncodedDataset& dataset, double gamma,
                              const std::vector<std::size_t>& k_caps,
                              std::size_t budget, const ClusteringParams& params);

struct OracleSolution {
  Allocation allocation;
  double optimum = 0.0;
};

/// Exact optimum by dynamic programming over (class, budget used). Among
/// optimal allocations returns the lexicographically smallest count vector.
/// Throws InvalidArgument on an infeasible budget or more than 10^7 states.
OracleSolution exact_allocate(const FrozenLossTable& table);

/// Exhaustive enumeration in lexicographic order; same tie rule as
/// exact_allocate. Throws InvalidArgument when the feasible set exceeds
/// `max_candidates` or is empty.
OracleSolution brute_force_allocate(const FrozenLossTable& table,
                                    std::size_t max_candidates = 1'000'000);

/// Local search driven by the frozen table instead of k-means.
SearchTrace hfils_frozen(const FrozenLossTable& table, const Allocation& initial,
                         const SolverParams& params,
                         const SearchObserver& observer = nullptr);

}  // namespace tabcondense
