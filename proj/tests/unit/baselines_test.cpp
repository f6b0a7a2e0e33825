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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "synthetic.hpp"
#include "tabcondense/error.hpp"

namespace tabcondense {
namespace {

Matrix column(std::vector<double> xs) {
  const auto n = xs.size();
  return Matrix(n, 1, std::move(xs));
}

TEST(StaticAllocation, FipcDivisionWithRemainder) {
  const std::vector<std::size_t> sizes(7, 1000);
  const auto a = static_allocation(sizes, 580, StaticStrategy::fipc);
  EXPECT_EQ(a.budget(), 580u);
  std::size_t n83 = 0;
  for (auto c : a.counts) {
    EXPECT_TRUE(c == 82 || c == 83);
    n83 += c == 83;
  }
  // 580 = 7 * 82 + 6.
  EXPECT_EQ(n83, 6u);
}

TEST(StaticAllocation, BalancedRatioEqualsFipc) {
  const std::vector<std::size_t> sizes(5, 300);
  for (std::size_t budget : {5u, 17u, 50u, 123u}) {
    EXPECT_EQ(static_allocation(sizes, budget, StaticStrategy::ratio).counts,
              static_allocation(sizes, budget, StaticStrategy::fipc).counts);
  }
}

TEST(StaticAllocation, RatioLargestRemainder) {
  // Quotas 9.9 and 0.1 -> floors 9, 0 -> clamp 9, 1.
  const auto a = static_allocation({9900, 100}, 10, StaticStrategy::ratio);
  EXPECT_EQ(a.counts, (std::vector<std::size_t>{9, 1}));
  // Quotas 3.5, 3.5, 3.0 -> floors 3,3,3, one extra to the first tie.
  const auto b = static_allocation({35, 35, 30}, 10, StaticStrategy::ratio);
  EXPECT_EQ(b.counts, (std::vector<std::size_t>{4, 3, 3}));
}

TEST(StaticAllocation, FipcRespectsSmallClasses) {
  const auto a = static_allocation({2, 100, 100}, 30, StaticStrategy::fipc);
  EXPECT_EQ(a.counts[0], 2u);
  EXPECT_EQ(a.budget(), 30u);
  EXPECT_TRUE(a.feasible());
}

TEST(StaticAllocation, RandomInputsFeasible) {
  Rng rng(6);
  for (int t = 0; t < 500; ++t) {
    const std::size_t c = 1 + rng.index(8);
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    for (std::size_t i = 0; i < c; ++i) {
      sizes.push_back(1 + rng.index(rng.uniform() < 0.3 ? 3 : 200));
      total += sizes.back();
    }
    const std::size_t budget = c + rng.index(total - c + 1);
    for (auto s : {StaticStrategy::ratio, StaticStrategy::fipc}) {
      const auto a = static_allocation(sizes, budget, s);
      EXPECT_EQ(a.budget(), budget);
      EXPECT_TRUE(a.feasible());
    }
  }
}

TEST(StaticAllocation, RejectsBadBudget) {
  EXPECT_THROW(static_allocation({5, 5}, 1, StaticStrategy::ratio), InvalidArgument);
  EXPECT_THROW(static_allocation({5, 5}, 11, StaticStrategy::fipc), InvalidArgument);
}

TEST(RandomCoreset, WholeSetAndReproducible) {
  const auto ds = testing::gaussian_mixture({20, 10}, 2, 3);
  const auto all = random_coreset(ds, 30, 1);
  EXPECT_EQ(all.rows, ds.features);
  const auto a = random_coreset(ds, 7, 99);
  const auto b = random_coreset(ds, 7, 99);
  EXPECT_EQ(a.rows, b.rows);
  std::set<std::size_t> rows;
  for (const auto& p : a.provenance) {
    EXPECT_EQ(p.origin, RowOrigin::selected);
    rows.insert(p.source_row);
  }
  EXPECT_EQ(rows.size(), 7u);
}

TEST(RandomCoreset, ClassCountsFollowHypergeometric) {
  // N = 200 (100 per class), draw 20: mean 10, variance
  // n K/N (N-K)/N (N-n)/(N-1) = 20 * 0.25 * 180 / 199.
  const auto ds = testing::gaussian_mixture({100, 100}, 2, 4);
  const double var = 20.0 * 0.25 * 180.0 / 199.0;
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    sum += static_cast<double>(random_coreset(ds, 20, seed).label_counts(2)[0]);
  }
  const double mean = sum / 1000.0;
  EXPECT_LT(std::abs(mean - 10.0), 4.0 * std::sqrt(var / 1000.0));
}

TEST(Herding, PicksPointNearestMean) {
  EXPECT_EQ(herding_select(column({0, 1, 2, 3, 4}), 1), (std::vector<std::size_t>{2}));
}

TEST(Herding, IdenticalPointsKeepMean) {
  const auto picked = herding_select(column({0.5, 0.5, 0.5, 0.5}), 3);
  EXPECT_EQ(std::set<std::size_t>(picked.begin(), picked.end()).size(), 3u);
}

TEST(Herding, DistinctSelections) {
  Rng rng(2);
  Matrix x(50, 3);
  for (double& v : x.values()) v = rng.uniform();
  const auto picked = herding_select(x, 20);
  EXPECT_EQ(std::set<std::size_t>(picked.begin(), picked.end()).size(), 20u);
}

TEST(KCenter, FarthestFirst) {
  EXPECT_EQ(kcenter_select(column({0, 1, 9}), 2, 0), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(kcenter_select(column({0, 1, 9}), 3, 1).size(), 3u);
}

// Smallest covering radius over every center subset of size k.
double optimal_radius_sq(const Matrix& x, std::size_t k) {
  const std::size_t n = x.rows();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<std::size_t> centers;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) centers.push_back(i);
    }
    best = std::min(best, covering_radius_sq(x, centers));
  }
  return best;
}

TEST(KCenter, WithinTwiceOptimalRadius) {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.index(7);
    Matrix x(n, 2);
    for (double& v : x.values()) v = rng.uniform();
    const std::size_t k = 1 + rng.index(n);
    const auto centers = kcenter_select(x, k, rng.index(n));
    const double r = std::sqrt(covering_radius_sq(x, centers));
    EXPECT_LE(r, 2.0 * std::sqrt(optimal_radius_sq(x, k)) + 1e-12);
  }
}

TEST(Coresets, FollowAllocation) {
  const auto ds = testing::gaussian_mixture({40, 15, 9}, 3, 8);
  const Allocation a{{6, 3, 9}, ds.class_sizes};
  for (const auto& t : {herding_coreset(ds, a), kcenter_coreset(ds, a, 4)}) {
    EXPECT_EQ(t.label_counts(3), a.counts);
    std::set<std::size_t> rows;
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto& p = t.provenance[r];
      EXPECT_EQ(ds.labels[p.source_row], t.labels[r]);
      EXPECT_TRUE(std::equal(t.rows.row(r).begin(), t.rows.row(r).end(),
                             ds.features.row(p.source_row).begin()));
      rows.insert(p.source_row);
    }
    EXPECT_EQ(rows.size(), t.size());
  }
  const Allocation bad{{41, 3, 9}, ds.class_sizes};
  EXPECT_THROW(herding_coreset(ds, bad), InvalidArgument);
}

}  // namespace
}  // namespace tabcondense
