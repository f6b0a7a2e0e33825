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

#include <benchmark/benchmark.h>

#include "tabcondense/clustering.hpp"
#include "tabcondense/random.hpp"

namespace {

using namespace tabcondense;

Matrix uniform_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, d);
  for (double& v : x.values()) v = rng.uniform();
  return x;
}

void BM_KMeans(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto x = uniform_points(n, 14, 1);
  ClusteringParams params;
  params.seed = 3;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(x, k, params).wcss);
  state.SetComplexityN(static_cast<std::int64_t>(n * k));
}
BENCHMARK(BM_KMeans)->Args({1000, 10})->Args({4000, 10})->Args({4000, 40})->Args({16000, 40});

void BM_KMeansPlusPlus(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = uniform_points(n, 14, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kmeanspp_init(x, 32, 5));
}
BENCHMARK(BM_KMeansPlusPlus)->Arg(1000)->Arg(8000);

}  // namespace
