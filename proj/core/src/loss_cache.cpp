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

#include "tabcondense/loss_cache.hpp"

#include <cmath>
#include <future>

#include "tabcondense/error.hpp"
#include "tabcondense/random.hpp"

namespace tabcondense {

double scale_weight(std::size_t class_size, double gamma) {
  if (class_size < 1) throw InvalidArgument("clustering", "class size must be >= 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidArgument("clustering", "gamma must lie in [0, 1]");
  }
  if (gamma == 0.0) return 1.0;
  return std::pow(static_cast<double>(class_size), -gamma);
}

std::uint64_t class_seed(std::uint64_t master, std::size_t class_id, std::size_t k) {
  return derive_seed(master, class_id, k);
}

ClusterResult cluster_class(const EncodedDataset& dataset, std::size_t class_id,
                            std::size_t k, const ClusteringParams& params) {
  ClusteringParams p = params;
  p.seed = class_seed(params.seed, class_id, k);
  return kmeans(dataset.class_points(class_id), k, p);
}

double weighted_class_loss(const EncodedDataset& dataset, std::size_t class_id,
                           std::size_t k, double gamma,
                           const ClusteringParams& params) {
  const double w = scale_weight(dataset.class_sizes[class_id], gamma);
  return cluster_class(dataset, class_id, k, params).wcss * w;
}

LossCache::LossCache(std::size_t num_classes, std::size_t max_k, double gamma)
    : classes_(num_classes),
      max_k_(max_k),
      gamma_(gamma),
      values_(new std::atomic<double>[num_classes * (max_k + 1)]),
      once_(new std::once_flag[num_classes * (max_k + 1)]) {
  for (std::size_t i = 0; i < classes_ * (max_k_ + 1); ++i) {
    values_[i].store(std::numeric_limits<double>::infinity(), std::memory_order_relaxed);
  }
}

std::size_t LossCache::slot(std::size_t class_id, std::size_t k) const {
  if (class_id >= classes_ || k > max_k_) {
    throw InvalidArgument("clustering", "loss cache index (" +
                                            std::to_string(class_id) + ", " +
                                            std::to_string(k) + ") out of range");
  }
  return class_id * (max_k_ + 1) + k;
}

double LossCache::at(std::size_t class_id, std::size_t k) const {
  return values_[slot(class_id, k)].load(std::memory_order_acquire);
}

double LossCache::get_or_compute(std::size_t class_id, std::size_t k,
                                 const std::function<double()>& compute) {
  const std::size_t s = slot(class_id, k);
  bool ran = false;
  std::call_once(once_[s], [&] {
    const double v = compute();
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw NumericalError("clustering", "class loss is not a finite non-negative value");
    }
    values_[s].store(v, std::memory_order_release);
    ran = true;
  });
  (ran ? computed_ : hits_).fetch_add(1);
  return values_[s].load(std::memory_order_acquire);
}

std::vector<LossCache::Entry> LossCache::entries() const {
  std::vector<Entry> out;
  for (std::size_t i = 0; i < classes_; ++i) {
    for (std::size_t k = 0; k <= max_k_; ++k) {
      const double v = at(i, k);
      if (std::isfinite(v)) out.push_back({i, k, v});
    }
  }
  return out;
}

double class_wise_clustering(const EncodedDataset& dataset,
                             std::span<const std::size_t> counts, double gamma,
                             LossCache& cache, const ClusteringParams& params,
                             Execution execution) {
  const std::size_t c = dataset.num_classes();
  if (counts.size() != c) {
    throw InvalidArgument("clustering", "allocation length differs from class count");
  }
  if (cache.num_classes() != c) {
    throw InvalidArgument("clustering", "loss cache built for a different class count");
  }
  if (cache.gamma() != gamma) {
    throw InvalidArgument("clustering", "loss cache was filled with a different gamma");
  }

  std::vector<double> losses(c, 0.0);
  auto evaluate = [&](std::size_t i) {
    return cache.get_or_compute(i, counts[i], [&] {
      return weighted_class_loss(dataset, i, counts[i], gamma, params);
    });
  };

  if (execution == Execution::parallel && c > 1) {
    std::vector<std::future<double>> jobs;
    jobs.reserve(c);
    for (std::size_t i = 0; i < c; ++i) {
      jobs.push_back(std::async(std::launch::async, evaluate, i));
    }
    for (std::size_t i = 0; i < c; ++i) losses[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < c; ++i) losses[i] = evaluate(i);
  }

  double total = 0.0;
  for (double l : losses) total += l;
  return total;
}

}  // namespace tabcondense
