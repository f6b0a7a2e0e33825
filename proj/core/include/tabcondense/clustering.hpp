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
#include <vector>

#include "tabcondense/matrix.hpp"

namespace tabcondense {

struct ClusteringParams {
  std::size_t max_iters = 100;
  /// Stop once (prev - cur) < rel_tol * prev. Zero runs all max_iters.
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ClusterResult {
  Matrix centroids;                     // k x d
  std::vector<std::size_t> assignment;  // n entries in [0, k)
  double wcss = 0.0;
  std::size_t iters_run = 0;
  /// WCSS after each completed Lloyd iteration.
  std::vector<double> wcss_trace;

  std::size_t k() const noexcept { return centroids.rows(); }
};

/// D^2-weighted seeding. When every remaining point coincides with a chosen
/// centroid, the next pick is uniform over points not yet chosen.
Matrix kmeanspp_init(const Matrix& points, std::size_t k, std::uint64_t seed);

/// Lloyd iterations from k-means++ seeds. Empty clusters are refilled with
/// the point farthest from its centroid (taken from a cluster with at least
/// two members), so every cluster is non-empty on return. Throws
/// InvalidArgument when k is outside [1, n] or an input is non-finite.
ClusterResult kmeans(const Matrix& points, std::size_t k,
                     const ClusteringParams& params);

/// sum_j sum_{x in S_j} ||x - c_j||^2, recomputed from scratch.
double compute_wcss(const Matrix& points, const Matrix& centroids,
                    const std::vector<std::size_t>& assignment);

}  // namespace tabcondense
