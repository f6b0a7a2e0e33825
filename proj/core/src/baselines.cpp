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

#include "tabcondense/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tabcondense/error.hpp"
#include "tabcondense/random.hpp"

namespace tabcondense {

namespace {

std::size_t budget_cap(std::size_t budget, std::size_t classes, std::size_t n) {
  return std::min(budget + 1 - classes, n);
}

CondensedTable gather(const EncodedDataset& dataset,
                      const std::vector<std::vector<std::size_t>>& picked_per_class) {
  std::size_t total = 0;
  for (const auto& p : picked_per_class) total += p.size();
  CondensedTable out;
  out.rows = Matrix(total, dataset.dim());
  std::size_t r = 0;
  for (std::size_t c = 0; c < picked_per_class.size(); ++c) {
    for (std::size_t j = 0; j < picked_per_class[c].size(); ++j, ++r) {
      const std::size_t src = picked_per_class[c][j];
      const auto row = dataset.features.row(src);
      std::copy(row.begin(), row.end(), out.rows.row(r).begin());
      out.labels.push_back(dataset.labels[src]);
      out.provenance.push_back({dataset.labels[src], j, 1, RowOrigin::selected, src});
    }
  }
  return out;
}

void check_allocation(const EncodedDataset& dataset, const Allocation& allocation) {
  if (allocation.num_classes() != dataset.num_classes()) {
    throw InvalidArgument("baselines", "allocation length differs from class count");
  }
  for (std::size_t c = 0; c < dataset.num_classes(); ++c) {
    if (allocation.counts[c] < 1 || allocation.counts[c] > dataset.class_sizes[c]) {
      throw InvalidArgument("baselines", "class " + std::to_string(c) +
                                             " budget outside [1, class size]");
    }
  }
}

}  // namespace

Allocation static_allocation(const std::vector<std::size_t>& class_sizes,
                             std::size_t budget, StaticStrategy strategy) {
  const std::size_t c = class_sizes.size();
  if (c == 0) throw InvalidArgument("baselines", "no classes");
  const std::size_t total =
      std::accumulate(class_sizes.begin(), class_sizes.end(), std::size_t{0});
  if (budget < c || budget > total) {
    throw InvalidArgument("baselines", "budget " + std::to_string(budget) +
                                           " outside [C, N] = [" + std::to_string(c) +
                                           ", " + std::to_string(total) + "]");
  }
  std::vector<std::size_t> caps(c);
  for (std::size_t i = 0; i < c; ++i) caps[i] = budget_cap(budget, c, class_sizes[i]);

  Allocation a;
  a.class_sizes = class_sizes;
  a.counts.assign(c, 0);
  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), std::size_t{0});

  if (strategy == StaticStrategy::ratio) {
    std::vector<double> remainder(c);
    for (std::size_t i = 0; i < c; ++i) {
      const double quota = static_cast<double>(budget) * static_cast<double>(class_sizes[i]) /
                           static_cast<double>(total);
      const double fl = std::floor(quota);
      remainder[i] = quota - fl;
      a.counts[i] = std::min(std::max<std::size_t>(static_cast<std::size_t>(fl), 1), caps[i]);
    }
    std::size_t assigned = a.budget();
    if (assigned < budget) {
      std::stable_sort(order.begin(), order.end(),
                       [&](auto x, auto y) { return remainder[x] > remainder[y]; });
      while (assigned < budget) {
        for (auto i : order) {
          if (assigned == budget) break;
          if (a.counts[i] < caps[i]) {
            ++a.counts[i];
            ++assigned;
          }
        }
      }
    } else if (assigned > budget) {
      std::stable_sort(order.begin(), order.end(),
                       [&](auto x, auto y) { return remainder[x] < remainder[y]; });
      while (assigned > budget) {
        for (auto i : order) {
          if (assigned == budget) break;
          if (a.counts[i] > 1) {
            --a.counts[i];
            --assigned;
          }
        }
      }
    }
  } else {
    const std::size_t each = budget / c;
    for (std::size_t i = 0; i < c; ++i) a.counts[i] = std::min(each, caps[i]);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto x, auto y) { return class_sizes[x] > class_sizes[y]; });
    std::size_t assigned = a.budget();
    while (assigned < budget) {
      for (auto i : order) {
        if (assigned == budget) break;
        if (a.counts[i] < caps[i]) {
          ++a.counts[i];
          ++assigned;
        }
      }
    }
  }
  return a;
}

CondensedTable random_coreset(const EncodedDataset& dataset, std::size_t budget,
                              std::uint64_t seed) {
  const std::size_t n = dataset.num_rows();
  if (budget < 1 || budget > n) {
    throw InvalidArgument("baselines", "random coreset budget outside [1, N]");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0x7a4d));
  for (std::size_t i = 0; i < budget; ++i) {
    const std::size_t j = i + rng.index(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(budget);
  std::sort(idx.begin(), idx.end());

  CondensedTable out;
  out.rows = dataset.features.select_rows(idx);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const int y = dataset.labels[idx[j]];
    out.labels.push_back(y);
    out.provenance.push_back({y, j, 1, RowOrigin::selected, idx[j]});
  }
  return out;
}

std::vector<std::size_t> herding_select(const Matrix& points, std::size_t budget) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  if (budget > n) throw InvalidArgument("baselines", "herding budget exceeds points");
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += points(i, j);
  }
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<double> sum(d, 0.0);
  std::vector<bool> used(n, false);
  std::vector<std::size_t> picked;
  std::vector<double> candidate(d);
  for (std::size_t t = 0; t < budget; ++t) {
    const double inv = 1.0 / static_cast<double>(t + 1);
    std::size_t best = n;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      for (std::size_t j = 0; j < d; ++j) candidate[j] = (sum[j] + points(i, j)) * inv;
      const double dist = squared_distance(candidate, mean);
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    used[best] = true;
    picked.push_back(best);
    for (std::size_t j = 0; j < d; ++j) sum[j] += points(best, j);
  }
  return picked;
}

std::vector<std::size_t> kcenter_select(const Matrix& points, std::size_t budget,
                                        std::size_t first) {
  const std::size_t n = points.rows();
  if (budget > n) throw InvalidArgument("baselines", "k-center budget exceeds points");
  if (budget == 0) return {};
  if (first >= n) throw InvalidArgument("baselines", "k-center seed index out of range");
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<bool> used(n, false);
  std::vector<std::size_t> picked;
  std::size_t next = first;
  for (std::size_t t = 0; t < budget; ++t) {
    used[next] = true;
    picked.push_back(next);
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), points.row(next)));
    }
    double far = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!used[i] && nearest[i] > far) {
        far = nearest[i];
        next = i;
      }
    }
  }
  return picked;
}

double covering_radius_sq(const Matrix& points, const std::vector<std::size_t>& centers) {
  double radius = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (auto c : centers) best = std::min(best, squared_distance(points.row(i), points.row(c)));
    radius = std::max(radius, best);
  }
  return radius;
}

CondensedTable herding_coreset(const EncodedDataset& dataset, const Allocation& allocation) {
  check_allocation(dataset, allocation);
  std::vector<std::vector<std::size_t>> picked(dataset.num_classes());
  for (std::size_t c = 0; c < dataset.num_classes(); ++c) {
    for (auto local : herding_select(dataset.class_points(c), allocation.counts[c])) {
      picked[c].push_back(dataset.class_index[c][local]);
    }
  }
  return gather(dataset, picked);
}

CondensedTable kcenter_coreset(const EncodedDataset& dataset, const Allocation& allocation,
                               std::uint64_t seed) {
  check_allocation(dataset, allocation);
  std::vector<std::vector<std::size_t>> picked(dataset.num_classes());
  for (std::size_t c = 0; c < dataset.num_classes(); ++c) {
    Rng rng(derive_seed(seed, 0xc3, c));
    const std::size_t first = rng.index(dataset.class_sizes[c]);
    for (auto local : kcenter_select(dataset.class_points(c), allocation.counts[c], first)) {
      picked[c].push_back(dataset.class_index[c][local]);
    }
  }
  return gather(dataset, picked);
}

}  // namespace tabcondense
