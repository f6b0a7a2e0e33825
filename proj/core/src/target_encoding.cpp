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

#include <algorithm>
#include <map>

#include "tabcondense/encoding.hpp"
#include "tabcondense/error.hpp"

namespace tabcondense {

double target_encode_value(std::size_t m, double local_mean, double global_mean,
                           double lambda) {
  const double md = static_cast<double>(m);
  return (md * local_mean + lambda * global_mean) / (md + lambda);
}

MinMax MinMax::fit(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("encoding", "min-max of empty column");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

double MinMax::apply(double v) const noexcept {
  if (!(hi > lo)) return 0.5;
  return (v - lo) / (hi - lo);
}

double MinMax::apply_clamped(double v) const noexcept {
  return std::clamp(apply(v), 0.0, 1.0);
}

std::vector<double> minmax_normalize(std::span<const double> values) {
  const MinMax range = MinMax::fit(values);
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [&](double v) { return range.apply(v); });
  return out;
}

double CategoryLookup::raw(std::string_view key) const {
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it != keys.end() && *it == key) {
    return values[static_cast<std::size_t>(it - keys.begin())];
  }
  return fallback;
}

double label_signal(int label, std::size_t num_classes) {
  if (num_classes <= 2) return static_cast<double>(label);
  return static_cast<double>(label) / static_cast<double>(num_classes - 1);
}

TargetEncodedColumn target_encode_column(std::span<const std::int64_t> values,
                                         std::span<const int> labels,
                                         std::size_t num_classes,
                                         const EncodingParams& params, Rng& rng) {
  if (values.size() != labels.size()) {
    throw InvalidArgument("encoding", "column and label lengths differ");
  }
  if (values.empty()) throw InvalidArgument("encoding", "empty column");

  struct Stat {
    std::size_t count = 0;
    double sum = 0.0;
  };
  std::map<std::int64_t, Stat> stats;
  double global_sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double y = label_signal(labels[i], num_classes);
    auto& s = stats[values[i]];
    ++s.count;
    s.sum += y;
    global_sum += y;
  }
  const double global_mean = global_sum / static_cast<double>(values.size());

  TargetEncodedColumn out;
  out.encoded.resize(values.size());
  auto& lookup = out.lookup;
  // Keys are ordered as text so CategoryLookup can binary-search them.
  std::vector<std::pair<std::string, double>> entries;

  if (stats.size() == 2 && stats.count(0) == 1 && stats.count(1) == 1) {
    out.binary = true;
    const std::int64_t zero = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      out.encoded[i] = values[i] == zero ? 0.0 : 1.0;
    }
    for (const auto& [v, s] : stats) {
      entries.emplace_back(std::to_string(v), v == zero ? 0.0 : 1.0);
    }
    lookup.fallback = 0.0;
    lookup.range = {0.0, 1.0};
  } else {
    std::map<std::int64_t, double> smoothed;
    for (const auto& [v, s] : stats) {
      const double local = s.sum / static_cast<double>(s.count);
      smoothed[v] = target_encode_value(s.count, local, global_mean,
                                        params.lambda_smooth);
      entries.emplace_back(std::to_string(v), smoothed[v]);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      double x = smoothed[values[i]];
      if (params.noise_sigma > 0.0) x += params.noise_sigma * rng.normal();
      out.encoded[i] = x;
    }
    lookup.fallback = global_mean;
    lookup.range = MinMax::fit(out.encoded);
    for (double& x : out.encoded) x = lookup.range.apply(x);
  }

  std::sort(entries.begin(), entries.end());
  for (auto& [k, v] : entries) {
    lookup.keys.push_back(std::move(k));
    lookup.values.push_back(v);
  }
  return out;
}

}  // namespace tabcondense
