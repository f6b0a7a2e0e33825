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

#include "tabcondense/oracle.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "tabcondense/error.hpp"
#include "tabcondense/loss_cache.hpp"

namespace tabcondense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxStates = 10'000'000;

void check_budget(const FrozenLossTable& table) {
  table.validate();
  std::size_t reachable = 0;
  for (std::size_t i = 0; i < table.num_classes(); ++i) reachable += table.k_max(i);
  if (table.budget < table.num_classes() || table.budget > reachable) {
    throw InvalidArgument("oracle", "budget " + std::to_string(table.budget) +
                                        " is infeasible (need " +
                                        std::to_string(table.num_classes()) + " to " +
                                        std::to_string(reachable) + ")");
  }
}

}  // namespace

double FrozenLossTable::objective(std::span<const std::size_t> counts) const {
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) total += loss(i, counts[i]);
  return total;
}

void FrozenLossTable::validate() const {
  const std::size_t c = num_classes();
  if (c == 0) throw InvalidArgument("oracle", "loss table has no classes");
  if (class_sizes.size() != c) {
    throw InvalidArgument("oracle", "class_sizes and losses differ in length");
  }
  for (std::size_t i = 0; i < c; ++i) {
    const std::size_t by_budget = budget + 1 >= c ? budget + 1 - c : 0;
    const std::size_t cap = std::min(by_budget, class_sizes[i]);
    if (k_max(i) < 1 || k_max(i) > cap) {
      throw InvalidArgument("oracle", "class " + std::to_string(i) + " lists " +
                                          std::to_string(k_max(i)) +
                                          " losses; allowed 1.." + std::to_string(cap));
    }
    for (double v : losses[i]) {
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidArgument("oracle", "loss entries must be finite and non-negative");
      }
    }
  }
}

std::string FrozenLossTable::to_json() const {
  nlohmann::json j;
  j["format"] = "tabcondense-frozen-losses";
  j["budget"] = budget;
  j["class_sizes"] = class_sizes;
  j["losses"] = losses;
  return j.dump(1);
}

FrozenLossTable FrozenLossTable::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "tabcondense-frozen-losses") {
      throw ParseError("not a frozen loss table document");
    }
    FrozenLossTable t;
    t.budget = j.at("budget").get<std::size_t>();
    t.class_sizes = j.at("class_sizes").get<std::vector<std::size_t>>();
    t.losses = j.at("losses").get<std::vector<std::vector<double>>>();
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("frozen loss table: ") + e.what());
  }
}

FrozenLossTable freeze_losses(const EncodedDataset& dataset, double gamma,
                              const std::vector<std::size_t>& k_caps,
                              std::size_t budget, const ClusteringParams& params) {
  const std::size_t c = dataset.num_classes();
  if (k_caps.size() != c) throw InvalidArgument("oracle", "one k cap per class required");
  FrozenLossTable t;
  t.class_sizes = dataset.class_sizes;
  t.budget = budget;
  t.losses.resize(c);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t k = 1; k <= k_caps[i]; ++k) {
      t.losses[i].push_back(weighted_class_loss(dataset, i, k, gamma, params));
    }
  }
  t.validate();
  return t;
}

OracleSolution exact_allocate(const FrozenLossTable& table) {
  check_budget(table);
  const std::size_t c = table.num_classes();
  const std::size_t b_max = table.budget;
  if (c * (b_max + 1) > kMaxStates) {
    throw InvalidArgument("oracle", "instance too large for the exact solver");
  }

  const std::size_t width = b_max + 1;
  std::vector<double> value(c * width, kInf);
  std::vector<std::size_t> choice(c * width, 0);
  auto at = [&](std::size_t i, std::size_t b) { return i * width + b; };

  auto path = [&](std::size_t i, std::size_t b) {
    std::vector<std::size_t> counts(i + 1);
    for (std::size_t ii = i + 1; ii-- > 0;) {
      counts[ii] = choice[at(ii, b)];
      b -= counts[ii];
    }
    return counts;
  };

  for (std::size_t k = 1; k <= table.k_max(0) && k <= b_max; ++k) {
    value[at(0, k)] = 0.0 + table.loss(0, k);
    choice[at(0, k)] = k;
  }
  for (std::size_t i = 1; i < c; ++i) {
    for (std::size_t b = 1; b <= b_max; ++b) {
      for (std::size_t k = 1; k <= table.k_max(i) && k < b; ++k) {
        const double prev = value[at(i - 1, b - k)];
        if (prev == kInf) continue;
        const double cand = prev + table.loss(i, k);
        double& best = value[at(i, b)];
        std::size_t& best_k = choice[at(i, b)];
        if (cand < best) {
          best = cand;
          best_k = k;
        } else if (cand == best) {
          auto a = path(i - 1, b - k);
          a.push_back(k);
          auto current = path(i - 1, b - best_k);
          current.push_back(best_k);
          if (a < current) best_k = k;
        }
      }
    }
  }

  if (value[at(c - 1, b_max)] == kInf) {
    throw InvalidArgument("oracle", "no feasible allocation");
  }
  OracleSolution sol;
  sol.allocation.counts = path(c - 1, b_max);
  sol.allocation.class_sizes = table.class_sizes;
  sol.optimum = value[at(c - 1, b_max)];
  return sol;
}

OracleSolution brute_force_allocate(const FrozenLossTable& table,
                                    std::size_t max_candidates) {
  check_budget(table);
  const std::size_t c = table.num_classes();
  const std::size_t b_max = table.budget;

  // Count compositions (saturating) before enumerating anything.
  std::vector<std::size_t> ways(b_max + 1, 0);
  ways[0] = 1;
  for (std::size_t i = 0; i < c; ++i) {
    std::vector<std::size_t> next(b_max + 1, 0);
    for (std::size_t b = 0; b <= b_max; ++b) {
      if (!ways[b]) continue;
      for (std::size_t k = 1; k <= table.k_max(i) && b + k <= b_max; ++k) {
        next[b + k] = std::min(next[b + k] + ways[b], max_candidates + 1);
      }
    }
    ways = std::move(next);
  }
  if (ways[b_max] > max_candidates) {
    throw InvalidArgument("oracle", "feasible set exceeds " +
                                        std::to_string(max_candidates) + " allocations");
  }

  std::vector<std::size_t> suffix_max(c + 1, 0);
  for (std::size_t i = c; i-- > 0;) suffix_max[i] = suffix_max[i + 1] + table.k_max(i);

  OracleSolution best;
  best.optimum = kInf;
  std::vector<std::size_t> counts(c, 0);
  auto visit = [&](auto&& self, std::size_t i, std::size_t remaining) -> void {
    if (i == c) {
      if (remaining != 0) return;
      const double v = table.objective(counts);
      if (v < best.optimum) {
        best.optimum = v;
        best.allocation.counts = counts;
      }
      return;
    }
    const std::size_t rest_min = c - i - 1;
    const std::size_t rest_max = suffix_max[i + 1];
    for (std::size_t k = 1; k <= table.k_max(i) && k + rest_min <= remaining; ++k) {
      if (remaining - k > rest_max) continue;
      counts[i] = k;
      self(self, i + 1, remaining - k);
    }
  };
  visit(visit, 0, b_max);
  if (best.optimum == kInf) throw InvalidArgument("oracle", "no feasible allocation");
  best.allocation.class_sizes = table.class_sizes;
  return best;
}

SearchTrace hfils_frozen(const FrozenLossTable& table, const Allocation& initial,
                         const SolverParams& params, const SearchObserver& observer) {
  table.validate();
  if (initial.class_sizes != table.class_sizes || initial.budget() != table.budget) {
    throw InvalidArgument("oracle", "initial allocation does not match the loss table");
  }
  for (std::size_t i = 0; i < table.num_classes(); ++i) {
    if (table.k_max(i) < initial.cap(i)) {
      throw InvalidArgument("oracle", "loss table does not cover every feasible count");
    }
  }
  const AllocationObjective objective = [&](const Allocation& a) {
    return table.objective(a.counts);
  };
  return local_search(initial, objective, params, observer);
}

}  // namespace tabcondense
