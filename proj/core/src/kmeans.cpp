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

#include <cmath>
#include <limits>

#include "tabcondense/clustering.hpp"
#include "tabcondense/error.hpp"
#include "tabcondense/random.hpp"

namespace tabcondense {

namespace {

void check_inputs(const Matrix& points, std::size_t k) {
  if (k < 1 || k > points.rows()) {
    throw InvalidArgument("clustering", "k = " + std::to_string(k) +
                                            " outside [1, " +
                                            std::to_string(points.rows()) + "]");
  }
  for (double v : points.values()) {
    if (!std::isfinite(v)) throw InvalidArgument("clustering", "non-finite input");
  }
}

std::size_t nearest(std::span<const double> x, const Matrix& centroids,
                    double& best_dist) {
  std::size_t best = 0;
  best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centroids.rows(); ++j) {
    const double d = squared_distance(x, centroids.row(j));
    if (d < best_dist) {
      best_dist = d;
      best = j;
    }
  }
  return best;
}

}  // namespace

void ClusteringParams::validate() const {
  if (max_iters < 1) throw InvalidArgument("clustering", "max_iters must be >= 1");
  if (!(rel_tol >= 0.0)) throw InvalidArgument("clustering", "rel_tol must be >= 0");
}

Matrix kmeanspp_init(const Matrix& points, std::size_t k, std::uint64_t seed) {
  check_inputs(points, k);
  const std::size_t n = points.rows();
  Rng rng(seed);
  Matrix centroids(k, points.cols());
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  auto take = [&](std::size_t c, std::size_t idx) {
    chosen[idx] = true;
    const auto src = points.row(idx);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points.row(i), src));
    }
  };

  take(0, rng.index(n));
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = n;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double cum = 0.0;
      std::size_t last_positive = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        last_positive = i;
        cum += d2[i];
        if (cum > u) {
          pick = i;
          break;
        }
      }
      if (pick == n) pick = last_positive;
    } else {
      std::vector<std::size_t> remaining;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) remaining.push_back(i);
      }
      pick = remaining[rng.index(remaining.size())];
    }
    take(c, pick);
  }
  return centroids;
}

double compute_wcss(const Matrix& points, const Matrix& centroids,
                    const std::vector<std::size_t>& assignment) {
  double s = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    s += squared_distance(points.row(i), centroids.row(assignment[i]));
  }
  return s;
}

ClusterResult kmeans(const Matrix& points, std::size_t k,
                     const ClusteringParams& params) {
  params.validate();
  check_inputs(points, k);
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();

  ClusterResult result;
  result.centroids = kmeanspp_init(points, k, params.seed);
  result.assignment.assign(n, 0);
  std::vector<double> dist(n, 0.0);
  std::vector<std::size_t> counts(k, 0);
  double prev = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 1; iter <= params.max_iters; ++iter) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      result.assignment[i] = nearest(points.row(i), result.centroids, dist[i]);
      ++counts[result.assignment[i]];
    }

    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] != 0) continue;
      std::size_t far = n;
      double far_dist = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[result.assignment[i]] >= 2 && dist[i] > far_dist) {
          far = i;
          far_dist = dist[i];
        }
      }
      // k <= n guarantees a donor cluster with two or more members.
      --counts[result.assignment[far]];
      result.assignment[far] = j;
      counts[j] = 1;
      dist[far] = 0.0;
      const auto src = points.row(far);
      std::copy(src.begin(), src.end(), result.centroids.row(j).begin());
    }

    Matrix sums(k, d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto dst = sums.row(result.assignment[i]);
      const auto src = points.row(i);
      for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
    }
    for (std::size_t j = 0; j < k; ++j) {
      const double inv = 1.0 / static_cast<double>(counts[j]);
      auto dst = result.centroids.row(j);
      const auto src = sums.row(j);
      for (std::size_t c = 0; c < d; ++c) dst[c] = src[c] * inv;
    }

    const double wcss = compute_wcss(points, result.centroids, result.assignment);
    result.wcss_trace.push_back(wcss);
    result.iters_run = iter;
    result.wcss = wcss;
    if (wcss == 0.0) break;
    if (std::isfinite(prev) && (prev - wcss) < params.rel_tol * prev) break;
    prev = wcss;
  }
  return result;
}

}  // namespace tabcondense
