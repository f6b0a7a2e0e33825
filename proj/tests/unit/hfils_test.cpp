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

#include <gtest/gtest.h>

#include <cmath>

#include "synthetic.hpp"
#include "tabcondense/error.hpp"
#include "tabcondense/oracle.hpp"

namespace tabcondense {
namespace {

FrozenLossTable toy_table() {
  FrozenLossTable t;
  t.class_sizes = {5, 5};
  t.losses = {{10, 4}, {7, 3}};
  t.budget = 3;
  return t;
}

TEST(SolverParams, DefaultsAndValidation) {
  const SolverParams p;
  EXPECT_EQ(p.max_iters, 1000u);
  EXPECT_EQ(p.tolerance, 0.01);
  EXPECT_EQ(p.patience, 10u);
  EXPECT_EQ(p.gamma, 0.25);
  EXPECT_EQ(p.step_decay, 0.5);
  SolverParams bad;
  bad.gamma = 1.5;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = {};
  bad.step_decay = 1.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(LocalSearch, FrozenToyReachesBetterPoint) {
  const auto table = toy_table();
  const Allocation start{{1, 2}, {5, 5}};
  EXPECT_EQ(table.objective(start.counts), 13.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SolverParams p;
    p.seed = seed;
    const auto trace = hfils_frozen(table, start, p);
    EXPECT_EQ(trace.best.counts, (std::vector<std::size_t>{2, 1}));
    EXPECT_EQ(trace.best_objective, 11.0);
    ASSERT_EQ(trace.accepted_objectives.size(), 1u);
    EXPECT_EQ(trace.accepted_objectives[0], 11.0);
  }
}

TEST(LocalSearch, StepDecaysOnAcceptanceOnly) {
  // Strictly convex losses with a single optimum reached in several moves.
  FrozenLossTable t;
  t.class_sizes = {40, 40, 40};
  t.budget = 30;
  for (std::size_t i = 0; i < 3; ++i) {
    t.losses.emplace_back();
    for (std::size_t k = 1; k <= 28; ++k) {
      t.losses[i].push_back(100.0 * (i + 1) / static_cast<double>(k));
    }
  }
  const Allocation start{{26, 2, 2}, {40, 40, 40}};
  SolverParams p;
  p.step_decay = 0.7;
  p.patience = 50;
  const auto trace = hfils_frozen(t, start, p);
  ASSERT_EQ(trace.max_step_history.size(), trace.accepted_objectives.size() + 1);
  std::size_t expect = trace.max_step_history[0];
  EXPECT_EQ(expect, static_cast<std::size_t>(std::floor(count_stddev(start.counts))));
  for (std::size_t m = 1; m < trace.max_step_history.size(); ++m) {
    expect = std::max<std::size_t>(static_cast<std::size_t>(std::floor(expect * 0.7)), 1);
    EXPECT_EQ(trace.max_step_history[m], expect);
  }
  for (std::size_t m = 1; m < trace.accepted_objectives.size(); ++m) {
    EXPECT_LT(trace.accepted_objectives[m], trace.accepted_objectives[m - 1]);
  }
}

TEST(LocalSearch, EarlyStopAfterPatienceWithoutProgress) {
  // Two feasible points with equal loss: no proposal is ever accepted.
  FrozenLossTable t;
  t.class_sizes = {5, 5};
  t.losses = {{1, 1}, {1, 1}};
  t.budget = 3;
  SolverParams p;
  p.patience = 4;
  const auto trace = hfils_frozen(t, Allocation{{1, 2}, {5, 5}}, p);
  EXPECT_TRUE(trace.early_stopped);
  EXPECT_EQ(trace.stop_reason, StopReason::early_stop);
  EXPECT_EQ(trace.iterations, 4u);
}

TEST(LocalSearch, SmallImprovementStillAdvancesClock) {
  // Each improving move gains less than the tolerance, so the clock keeps
  // running even though proposals are accepted.
  FrozenLossTable t;
  t.class_sizes = {30, 30};
  t.budget = 20;
  for (std::size_t i = 0; i < 2; ++i) {
    t.losses.emplace_back();
    for (std::size_t k = 1; k <= 19; ++k) {
      t.losses[i].push_back(i == 0 ? 1.0 - 1e-4 * static_cast<double>(k) : 1.0);
    }
  }
  SolverParams p;
  p.patience = 3;
  p.tolerance = 0.01;
  const auto trace = hfils_frozen(t, Allocation{{1, 19}, {30, 30}}, p);
  EXPECT_TRUE(trace.early_stopped);
  EXPECT_EQ(trace.iterations, 3u);
  EXPECT_FALSE(trace.accepted_objectives.empty());
}

TEST(LocalSearch, CountsEveryEvaluation) {
  const auto table = toy_table();
  std::vector<Allocation> seen;
  SolverParams p;
  p.max_iters = 5;
  const auto trace = hfils_frozen(table, Allocation{{1, 2}, {5, 5}}, p,
                                  [&](const Allocation& a, double) { seen.push_back(a); });
  EXPECT_EQ(seen.size(), trace.evaluations);
  for (const auto& a : seen) EXPECT_TRUE(a.feasible());
}

TEST(Hfils, SingletonClassesHaveNoMove) {
  Matrix x(3, 2, std::vector<double>{0.1, 0.2, 0.5, 0.5, 0.9, 0.1});
  const auto ds = make_encoded_dataset(x, {0, 1, 2}, 3);
  SolverParams p;
  p.ratio = 1.0;
  const auto r = hfils(ds, p);
  EXPECT_EQ(r.allocation.counts, (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.trace.stop_reason, StopReason::no_move);
}

class HfilsOnMixture : public ::testing::Test {
 protected:
  EncodedDataset ds = testing::gaussian_mixture({300, 120, 40}, 4, 77);
  SolverParams params() const {
    SolverParams p;
    p.ratio = 0.05;
    p.seed = 3;
    return p;
  }
};

TEST_F(HfilsOnMixture, ResultInvariants) {
  const auto r = hfils(ds, params());
  EXPECT_TRUE(r.allocation.feasible());
  EXPECT_EQ(r.allocation.budget(), init_allocation(ds.class_sizes, 0.05).budget());
  EXPECT_LE(r.objective, r.trace.initial_objective);
  EXPECT_EQ(r.condensed.size(), r.allocation.budget());
  EXPECT_EQ(r.condensed.label_counts(3), r.allocation.counts);
  for (std::size_t m = 1; m < r.trace.accepted_objectives.size(); ++m) {
    EXPECT_LT(r.trace.accepted_objectives[m], r.trace.accepted_objectives[m - 1]);
  }
  EXPECT_EQ(r.cache_computed + r.cache_hits, r.trace.evaluations * 3);
}

TEST_F(HfilsOnMixture, RowsAreMemberMeans) {
  const auto r = hfils(ds, params());
  std::size_t row = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    const Matrix pts = ds.class_points(c);
    const auto& part = r.partitions[c];
    for (std::size_t j = 0; j < part.k(); ++j, ++row) {
      std::vector<double> mean(ds.dim(), 0.0);
      std::size_t members = 0;
      for (std::size_t i = 0; i < pts.rows(); ++i) {
        if (part.assignment[i] != j) continue;
        ++members;
        for (std::size_t d = 0; d < ds.dim(); ++d) mean[d] += pts(i, d);
      }
      ASSERT_GT(members, 0u);
      EXPECT_EQ(r.condensed.provenance[row].member_count, members);
      EXPECT_EQ(r.condensed.labels[row], static_cast<int>(c));
      for (std::size_t d = 0; d < ds.dim(); ++d) {
        const double m = mean[d] / static_cast<double>(members);
        EXPECT_NEAR(r.condensed.rows(row, d), m, 1e-9 * std::max(1.0, std::abs(m)));
      }
    }
  }
}

TEST_F(HfilsOnMixture, DeterministicAcrossExecutionModes) {
  auto p = params();
  const auto a = hfils(ds, p);
  const auto b = hfils(ds, p);
  p.execution = Execution::parallel;
  const auto c = hfils(ds, p);
  EXPECT_EQ(a.allocation, b.allocation);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.condensed.rows, b.condensed.rows);
  EXPECT_EQ(a.allocation, c.allocation);
  EXPECT_EQ(a.objective, c.objective);
  EXPECT_EQ(a.condensed.rows, c.condensed.rows);
}

TEST_F(HfilsOnMixture, FullClassesCopyRows) {
  // Class 2 gets every point as its own cluster.
  const Allocation a{{5, 5, 40}, ds.class_sizes};
  const auto parts = cluster_allocation(ds, a, {});
  const auto t = build_condensed(ds, a, parts);
  std::vector<std::vector<double>> got, want;
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (t.labels[r] == 2) got.emplace_back(t.rows.row(r).begin(), t.rows.row(r).end());
  }
  const Matrix pts = ds.class_points(2);
  for (std::size_t r = 0; r < pts.rows(); ++r) want.emplace_back(pts.row(r).begin(), pts.row(r).end());
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST_F(HfilsOnMixture, BuildRejectsMismatch) {
  const Allocation a{{5, 5, 4}, ds.class_sizes};
  auto parts = cluster_allocation(ds, a, {});
  const Allocation other{{4, 6, 4}, ds.class_sizes};
  EXPECT_THROW(build_condensed(ds, other, parts), InvalidArgument);
}

}  // namespace
}  // namespace tabcondense
