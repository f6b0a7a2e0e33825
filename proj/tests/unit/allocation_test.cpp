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

#include <gtest/gtest.h>

#include <numeric>

#include "tabcondense/error.hpp"

namespace tabcondense {
namespace {

Allocation make(std::vector<std::size_t> counts, std::vector<std::size_t> sizes) {
  return Allocation{std::move(counts), std::move(sizes)};
}

TEST(InitAllocation, FloorsThenClamps) {
  const auto a = init_allocation({1000, 100}, 0.01);
  EXPECT_EQ(a.counts, (std::vector<std::size_t>{10, 1}));
  EXPECT_EQ(a.budget(), 11u);

  const auto b = init_allocation({50, 100}, 0.001);
  EXPECT_EQ(b.counts, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(b.budget(), 2u);

  const auto c = init_allocation({7, 3, 12}, 1.0);
  EXPECT_EQ(c.counts, (std::vector<std::size_t>{7, 3, 12}));
}

TEST(InitAllocation, RejectsBadInput) {
  EXPECT_THROW(init_allocation({10, 10}, 0.0), InvalidArgument);
  EXPECT_THROW(init_allocation({10, 10}, 1.5), InvalidArgument);
  EXPECT_THROW(init_allocation({10, 0}, 0.5), InvalidArgument);
}

TEST(Allocation, CapsAndFeasibility) {
  const auto a = make({5, 3, 2}, {20, 7, 8});
  EXPECT_EQ(a.cap(0), 8u);
  EXPECT_EQ(a.cap(1), 7u);
  EXPECT_EQ(a.cap(2), 8u);
  EXPECT_TRUE(a.feasible());
  EXPECT_FALSE(make({0, 10}, {20, 20}).feasible());
  EXPECT_FALSE(make({4, 1}, {3, 20}).feasible());
}

TEST(InitialMaxStep, PopulationStd) {
  // counts [10, 1]: mean 5.5, population std 4.5.
  EXPECT_DOUBLE_EQ(count_stddev({10, 1}), 4.5);
  EXPECT_EQ(initial_max_step(make({10, 1}, {1000, 100})), 4u);
  EXPECT_EQ(initial_max_step(make({3, 3}, {10, 10})), 1u);
}

TEST(SoftMove, HandTrace) {
  // headroom [-, 4, 6], floors [-, 0, 1], one leftover to the larger headroom.
  const auto m = apply_soft_move(make({5, 3, 2}, {20, 7, 8}), 0, 2);
  EXPECT_EQ(m.status, MoveStatus::moved);
  EXPECT_EQ(m.allocation.counts, (std::vector<std::size_t>{3, 3, 4}));
  EXPECT_EQ(m.allocation.budget(), 10u);
}

TEST(SoftMove, TwoClassOnlyMove) {
  const auto m = apply_soft_move(make({2, 1}, {5, 5}), 0, 1);
  EXPECT_EQ(m.allocation.counts, (std::vector<std::size_t>{1, 2}));
}

TEST(SoftMove, StepClampedToSourceMinusOne) {
  const auto m = apply_soft_move(make({3, 1, 1}, {10, 10, 10}), 0, 50);
  EXPECT_EQ(m.step, 2u);
  EXPECT_EQ(m.allocation.counts[0], 1u);
  EXPECT_EQ(m.allocation.budget(), 5u);
}

TEST(SoftMove, TiesGoToLowerIndex) {
  // headroom 3 and 3, s = 1: floors 0, the leftover goes to class 1.
  const auto m = apply_soft_move(make({4, 1, 1}, {10, 4, 4}), 0, 1);
  EXPECT_EQ(m.allocation.counts, (std::vector<std::size_t>{3, 2, 1}));
}

TEST(SoftMove, AbortsWhenCapsCannotAbsorb) {
  // Targets have one free slot in total; a step of 2 cannot be placed.
  const auto start = make({5, 1}, {10, 2});
  const auto m = apply_soft_move(start, 0, 2);
  EXPECT_EQ(m.status, MoveStatus::aborted);
  EXPECT_EQ(m.stranded, 1u);
  EXPECT_EQ(m.allocation, start);
}

TEST(SoftMove, NoSourceOrTarget) {
  EXPECT_EQ(apply_soft_move(make({1, 3}, {5, 5}), 0, 1).status, MoveStatus::no_source);
  // Class 1 is at its size cap.
  EXPECT_EQ(apply_soft_move(make({3, 2}, {5, 2}), 0, 1).status, MoveStatus::no_target);
}

TEST(HasSoftMove, Cases) {
  EXPECT_FALSE(has_soft_move(make({1, 1, 1}, {5, 5, 5})));
  EXPECT_FALSE(has_soft_move(make({3, 2}, {3, 2})));
  EXPECT_TRUE(has_soft_move(make({3, 1}, {3, 2})));
}

TEST(SoftAllocate, SamplesValidSourcesAndSteps) {
  Rng rng(4);
  const auto a = make({6, 1, 2, 1}, {30, 30, 30, 30});
  for (int t = 0; t < 500; ++t) {
    const auto m = soft_allocate(a, 3, rng);
    EXPECT_TRUE(m.source == 0 || m.source == 2);
    EXPECT_GE(m.step, 1u);
    EXPECT_LE(m.step, 3u);
    EXPECT_TRUE(m.allocation.feasible());
    EXPECT_EQ(m.allocation.budget(), a.budget());
  }
}

}  // namespace
}  // namespace tabcondense
