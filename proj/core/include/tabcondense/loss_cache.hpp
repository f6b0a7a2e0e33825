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

#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "tabcondense/clustering.hpp"
#include "tabcondense/encoded_dataset.hpp"

namespace tabcondense {

/// n^-gamma.
double scale_weight(std::size_t class_size, double gamma);

/// Seed of the k-means run for (class, k). Depends only on the entry, never
/// on evaluation order.
std::uint64_t class_seed(std::uint64_t master, std::size_t class_id, std::size_t k);

/// k-means on the rows of class `class_id` with the derived seed.
ClusterResult cluster_class(const EncodedDataset& dataset, std::size_t class_id,
                            std::size_t k, const ClusteringParams& params);

/// scale_weight(n_i, gamma) * WCSS of cluster_class(...).
double weighted_class_loss(const EncodedDataset& dataset, std::size_t class_id,
                           std::size_t k, double gamma,
                           const ClusteringParams& params);

/// Write-once memo of weighted class losses, C x (max_k + 1), +inf until
/// computed. Entries are specific to one gamma. Safe for concurrent use:
/// each entry is initialised exactly once.
class LossCache {
 public:
  struct Entry {
    std::size_t class_id;
    std::size_t k;
    double value;
  };

  LossCache(std::size_t num_classes, std::size_t max_k, double gamma);

  std::size_t num_classes() const noexcept { return classes_; }
  std::size_t max_k() const noexcept { return max_k_; }
  double gamma() const noexcept { return gamma_; }

  /// +inf when not yet computed.
  double at(std::size_t class_id, std::size_t k) const;
  bool contains(std::size_t class_id, std::size_t k) const {
    return at(class_id, k) != std::numeric_limits<double>::infinity();
  }

  /// Returns the entry, running `compute` first if it is absent. Concurrent
  /// callers for the same entry block until the first one finishes.
  double get_or_compute(std::size_t class_id, std::size_t k,
                        const std::function<double()>& compute);

  std::size_t computed() const noexcept { return computed_.load(); }
  std::size_t hits() const noexcept { return hits_.load(); }

  /// Finite entries, row-major.
  std::vector<Entry> entries() const;

 private:
  std::size_t slot(std::size_t class_id, std::size_t k) const;

  std::size_t classes_;
  std::size_t max_k_;
  double gamma_;
  std::unique_ptr<std::atomic<double>[]> values_;
  std::unique_ptr<std::once_flag[]> once_;
  std::atomic<std::size_t> computed_{0};
  std::atomic<std::size_t> hits_{0};
};

enum class Execution { sequential, parallel };

/// Sum over classes of M[i, counts[i]], filling missing entries with
/// weighted_class_loss. The sum is taken in class order, so parallel and
/// sequential execution give identical totals.
double class_wise_clustering(const EncodedDataset& dataset,
                             std::span<const std::size_t> counts, double gamma,
                             LossCache& cache, const ClusteringParams& params,
                             Execution execution = Execution::sequential);

}  // namespace tabcondense
