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

// Property suite for the condensation library. Prints one PASS/FAIL line
// per criterion and exits non-zero if any fail. argv[1], when given, is the
// tabcondense executable used by the determinism check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "synthetic.hpp"
#include "tabcondense/allocation.hpp"
#include "tabcondense/autoencoder.hpp"
#include "tabcondense/baselines.hpp"
#include "tabcondense/clustering.hpp"
#include "tabcondense/dataset_io.hpp"
#include "tabcondense/encoding.hpp"
#include "tabcondense/hfils.hpp"
#include "tabcondense/loss_cache.hpp"
#include "tabcondense/oracle.hpp"
#include "tabcondense/random.hpp"

namespace tc = tabcondense;
using tc::testing::gaussian_mixture;
using tc::testing::TempDir;

namespace {

// Pinned tolerances.
constexpr double kLloydSlack = 1e-9;
constexpr double kKmeansEqualRel = 1e-9;
constexpr double kKmeansEqualShare = 0.90;
constexpr double kTargetEncodeTol = 1e-12;
constexpr double kAllocationTol = 1e-9;
constexpr double kScalingLo = 2.0;
constexpr double kScalingHi = 6.0;
constexpr double kFeasibilitySeconds = 5.0;
constexpr double kScalingSeconds = 180.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool satisfies_caps(const tc::Allocation& a, std::size_t budget) {
  const std::size_t c = a.num_classes();
  std::size_t sum = 0;
  for (std::size_t i = 0; i < c; ++i) {
    const std::size_t cap = std::min(budget - (c - 1), a.class_sizes[i]);
    if (a.counts[i] < 1 || a.counts[i] > cap) return false;
    sum += a.counts[i];
  }
  return sum == budget;
}

// Random feasible allocation with C <= 10, N' <= 200.
tc::Allocation random_allocation(tc::Rng& rng) {
  const std::size_t c = 2 + rng.index(9);
  const std::size_t budget = c + rng.index(201 - c);
  tc::Allocation a;
  a.class_sizes.resize(c);
  for (auto& n : a.class_sizes) n = 1 + rng.index(120);
  std::size_t total = std::accumulate(a.class_sizes.begin(), a.class_sizes.end(), std::size_t{0});
  while (total < budget) {
    const auto i = rng.index(c);
    a.class_sizes[i] += 1 + rng.index(40);
    total = std::accumulate(a.class_sizes.begin(), a.class_sizes.end(), std::size_t{0});
  }
  a.counts.assign(c, 1);
  std::size_t left = budget - c;
  while (left > 0) {
    const auto i = rng.index(c);
    const std::size_t cap = std::min(budget - (c - 1), a.class_sizes[i]);
    if (a.counts[i] < cap) {
      ++a.counts[i];
      --left;
    }
  }
  return a;
}

Outcome feasibility() {
  tc::Rng rng(1001);
  std::size_t violations = 0, moved = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < 10000; ++t) {
    auto a = random_allocation(rng);
    const std::size_t budget = a.budget();
    if (!satisfies_caps(a, budget)) ++violations;
    const std::size_t max_step = 1 + rng.index(std::max<std::size_t>(1, budget / 2));
    const auto move = tc::soft_allocate(a, max_step, rng);
    if (!satisfies_caps(move.allocation, budget) ||
        move.allocation.class_sizes != a.class_sizes) {
      ++violations;
    }
    moved += move.status == tc::MoveStatus::moved;
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = violations == 0 && secs < kFeasibilitySeconds;
  o.detail = "violations=" + std::to_string(violations) + " moved=" + std::to_string(moved) +
             " seconds=" + fmt("%.3f", secs);
  return o;
}

tc::SolverParams quick_params(std::uint64_t seed) {
  tc::SolverParams p;
  p.ratio = 0.02;
  p.max_iters = 60;
  p.seed = seed;
  p.clustering.max_iters = 30;
  p.clustering.seed = seed;
  return p;
}

Outcome monotone_objective() {
  tc::Rng rng(2002);
  std::size_t violations = 0, accepted = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t c = 2 + rng.index(4);
    std::vector<std::size_t> sizes(c);
    for (auto& n : sizes) n = 20 + rng.index(2000 / c - 20);
    const auto ds = gaussian_mixture(sizes, 2 + rng.index(5), rng.next_u64(), 0.05 + 0.1 * rng.uniform());
    auto params = quick_params(rng.next_u64());
    params.ratio = 0.01 + 0.04 * rng.uniform();
    const auto res = tc::hfils(ds, params);
    const auto& tr = res.trace;
    double prev = tr.initial_objective;
    for (double v : tr.accepted_objectives) {
      if (!(v < prev)) ++violations;
      prev = v;
    }
    if (!(tr.best_objective <= tr.initial_objective)) ++violations;
    if (tr.initial != tc::init_allocation(ds.class_sizes, params.ratio)) ++violations;
    accepted += tr.accepted_objectives.size();
  }
  return {violations == 0,
          "violations=" + std::to_string(violations) + " accepted=" + std::to_string(accepted)};
}

// Decreasing convex-ish curve with a knee, scaled per class.
tc::FrozenLossTable elbow_instance(tc::Rng& rng) {
  tc::FrozenLossTable t;
  const std::size_t c = 1 + rng.index(4);
  t.budget = c + rng.index(13 - c);
  t.class_sizes.resize(c);
  t.losses.resize(c);
  for (std::size_t i = 0; i < c; ++i) {
    t.class_sizes[i] = 1 + rng.index(15);
    if (i + 1 == c) {
      const std::size_t sum =
          std::accumulate(t.class_sizes.begin(), t.class_sizes.end(), std::size_t{0});
      if (sum < t.budget) t.class_sizes[i] += t.budget - sum;
    }
    const std::size_t kmax = std::min(t.budget - (c - 1), t.class_sizes[i]);
    const double scale = 1.0 + 99.0 * rng.uniform();
    const double knee = 1.0 + rng.uniform() * static_cast<double>(kmax);
    double prev = scale;
    for (std::size_t k = 1; k <= kmax; ++k) {
      const double x = static_cast<double>(k);
      double v = scale * (x < knee ? 1.0 - 0.8 * (x - 1) / std::max(knee - 1, 1.0)
                                   : 0.2 * std::exp(-(x - knee)));
      v = std::min(v, prev * (1.0 - 0.01 * rng.uniform()));
      if (k == 1) v = scale;
      t.losses[i].push_back(v);
      prev = v;
    }
  }
  return t;
}

Outcome oracle_dominance() {
  tc::Rng rng(3003);
  std::size_t violations = 0, optimal = 0;
  std::vector<double> gaps;
  for (int t = 0; t < 200; ++t) {
    const auto table = elbow_instance(rng);
    table.validate();
    const auto exact = tc::exact_allocate(table);
    const auto brute = tc::brute_force_allocate(table);
    if (brute.optimum != exact.optimum || brute.allocation.counts != exact.allocation.counts) {
      ++violations;
    }
    tc::SolverParams p;
    p.max_iters = 200;
    p.seed = rng.next_u64();
    // Ratio start at the instance budget.
    const auto start = tc::static_allocation(table.class_sizes, table.budget,
                                             tc::StaticStrategy::ratio);
    bool capped = true;
    for (std::size_t i = 0; i < table.num_classes(); ++i) {
      capped = capped && table.k_max(i) == start.cap(i);
    }
    if (!capped) ++violations;
    const auto tr = tc::hfils_frozen(table, start, p);
    if (tr.best_objective < exact.optimum) ++violations;
    const double gap = exact.optimum > 0 ? (tr.best_objective - exact.optimum) / exact.optimum : 0;
    gaps.push_back(gap);
    optimal += tr.best_objective == exact.optimum;
  }
  std::sort(gaps.begin(), gaps.end());
  auto q = [&](double f) { return gaps[static_cast<std::size_t>(f * (gaps.size() - 1))]; };
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
  std::ostringstream os;
  os << "violations=" << violations << " optimal=" << optimal << "/200"
     << " gap_mean=" << fmt("%.4g", mean) << " gap_median=" << fmt("%.4g", q(0.5))
     << " gap_p90=" << fmt("%.4g", q(0.9)) << " gap_max=" << fmt("%.4g", gaps.back());
  return {violations == 0, os.str()};
}

Outcome lloyd_and_cache() {
  tc::Rng rng(4004);
  std::size_t lloyd_bad = 0, cache_bad = 0, parallel_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 10 + rng.index(400);
    const std::size_t d = 1 + rng.index(8);
    tc::Matrix x(n, d);
    for (double& v : x.values()) v = rng.uniform();
    tc::ClusteringParams cp;
    cp.seed = rng.next_u64();
    cp.rel_tol = 0.0;
    cp.max_iters = 50;
    const auto res = tc::kmeans(x, 1 + rng.index(std::min<std::size_t>(n, 20)), cp);
    for (std::size_t i = 1; i < res.wcss_trace.size(); ++i) {
      if (res.wcss_trace[i] > res.wcss_trace[i - 1] + kLloydSlack) ++lloyd_bad;
    }
  }
  for (int t = 0; t < 10; ++t) {
    const std::size_t c = 2 + rng.index(3);
    std::vector<std::size_t> sizes(c);
    for (auto& s : sizes) s = 30 + rng.index(200);
    const auto ds = gaussian_mixture(sizes, 3, rng.next_u64());
    auto params = quick_params(rng.next_u64());
    params.ratio = 0.05;
    const auto init = tc::init_allocation(ds.class_sizes, params.ratio);
    tc::LossCache cache(c, init.budget(), params.gamma);
    tc::hfils(ds, params, cache);
    for (const auto& e : cache.entries()) {
      const double again =
          tc::weighted_class_loss(ds, e.class_id, e.k, params.gamma, params.clustering);
      if (again != e.value) ++cache_bad;
    }
    for (int r = 0; r < 5; ++r) {
      std::vector<std::size_t> counts(c);
      for (std::size_t i = 0; i < c; ++i) counts[i] = 1 + rng.index(std::min<std::size_t>(10, sizes[i]));
      tc::LossCache s_cache(c, 10, params.gamma), p_cache(c, 10, params.gamma);
      const double seq = tc::class_wise_clustering(ds, counts, params.gamma, s_cache,
                                                   params.clustering, tc::Execution::sequential);
      const double par = tc::class_wise_clustering(ds, counts, params.gamma, p_cache,
                                                   params.clustering, tc::Execution::parallel);
      if (seq != par) ++parallel_bad;
    }
  }
  return {lloyd_bad + cache_bad + parallel_bad == 0,
          "lloyd_violations=" + std::to_string(lloyd_bad) +
              " cache_mismatches=" + std::to_string(cache_bad) +
              " parallel_mismatches=" + std::to_string(parallel_bad)};
}

// Exhaustive search over all labelings with every cluster non-empty.
double brute_force_wcss(const std::vector<double>& xs, std::size_t k) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> lab(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> sum(k, 0.0);
    std::vector<std::size_t> cnt(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[lab[i]] += xs[i];
      ++cnt[lab[i]];
    }
    if (std::all_of(cnt.begin(), cnt.end(), [](std::size_t c) { return c > 0; })) {
      double w = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double m = sum[lab[i]] / static_cast<double>(cnt[lab[i]]);
        w += (xs[i] - m) * (xs[i] - m);
      }
      best = std::min(best, w);
    }
    std::size_t p = 0;
    while (p < n && ++lab[p] == k) lab[p++] = 0;
    if (p == n) break;
  }
  return best;
}

Outcome kmeans_small() {
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 5, 8};
  tc::Rng rng(5005);
  std::size_t pairs = 0, equal = 0, below = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int inst = 0; inst < 10; ++inst) {
      std::vector<double> xs(n);
      for (auto& v : xs) v = std::round(rng.uniform() * 1000.0) / 1000.0;
      tc::Matrix m(n, 1, xs);
      for (std::size_t k = 1; k <= std::min<std::size_t>(3, n); ++k) {
        const double opt = brute_force_wcss(xs, k);
        for (auto s : seeds) {
          tc::ClusteringParams cp;
          cp.seed = s;
          const double w = tc::kmeans(m, k, cp).wcss;
          ++pairs;
          const double slack = kKmeansEqualRel * std::max(1.0, opt);
          if (w < opt - slack) ++below;
          if (std::abs(w - opt) <= slack) ++equal;
        }
      }
    }
  }
  const double share = static_cast<double>(equal) / static_cast<double>(pairs);
  return {below == 0 && share >= kKmeansEqualShare,
          "pairs=" + std::to_string(pairs) + " below_optimum=" + std::to_string(below) +
              " equal_share=" + fmt("%.4f", share)};
}

std::string random_word(tc::Rng& rng, std::size_t max_len) {
  std::string s;
  const auto len = rng.index(max_len + 1);
  for (std::size_t i = 0; i < len; ++i) s += static_cast<char>('a' + rng.index(6));
  return s;
}

tc::RawTable random_string_table(tc::Rng& rng) {
  const std::size_t n = 150 + rng.index(250);
  tc::RawTable t;
  t.label_column = "y";
  t.label_values = {"0", "1", "2"};
  const std::size_t classes = 2 + rng.index(2);
  t.label_values.resize(classes);
  for (std::size_t i = 0; i < n; ++i) t.labels.push_back(static_cast<int>(i % classes));

  std::vector<double> num(n);
  for (auto& v : num) v = rng.normal() * 10;
  t.columns.push_back({"num", tc::ColumnKind::numeric, std::nullopt});
  t.data.emplace_back(num);

  const std::size_t str_cols = 1 + rng.index(3);
  for (std::size_t j = 0; j < str_cols; ++j) {
    std::vector<std::string> vocab(3 + rng.index(8));
    for (auto& w : vocab) w = random_word(rng, 8) + "x";
    std::vector<std::string> col(n);
    for (auto& v : col) v = vocab[rng.index(vocab.size())];
    t.columns.push_back({"s" + std::to_string(j), tc::ColumnKind::categorical_string,
                         tc::build_dictionary(col).size()});
    t.data.emplace_back(col);
  }
  std::vector<std::int64_t> ints(n);
  for (auto& v : ints) v = static_cast<std::int64_t>(rng.index(7));
  t.columns.push_back({"i", tc::ColumnKind::categorical_integer, 7});
  t.data.emplace_back(ints);
  return t;
}

Outcome encoding_contracts() {
  tc::Rng rng(6006);
  std::size_t out_of_range = 0, sim_bad = 0, target_bad = 0, ae_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_word(rng, 10), b = random_word(rng, 10);
    const std::size_t n = 1 + rng.index(4);
    const double ab = tc::ngram_similarity(a, b, n), ba = tc::ngram_similarity(b, a, n);
    if (ab != ba || tc::ngram_similarity(a, a, n) != 1.0 || ab < 0 || ab > 1) ++sim_bad;
  }
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = rng.index(5000);
    const double local = rng.uniform(), global = rng.uniform();
    const double lambda = rng.uniform() * 100.0 + (t % 7 == 0 ? 0.0 : 1e-3);
    const double md = static_cast<double>(m);
    if (md + lambda == 0) continue;
    const double direct = (md * local + lambda * global) / (md + lambda);
    if (std::abs(tc::target_encode_value(m, local, global, lambda) - direct) > kTargetEncodeTol) {
      ++target_bad;
    }
  }
  for (int t = 0; t < 20; ++t) {
    const auto table = random_string_table(rng);
    tc::EncodingParams p;
    p.seed = rng.next_u64();
    const auto enc = tc::encode_dataset(table, p);
    for (double v : enc.dataset.features.values()) {
      if (!(v >= 0.0 && v <= 1.0)) ++out_of_range;
    }
    const auto& l = enc.ae_epoch_losses;
    if (l.size() < 2 || !(l.back() < l.front())) ++ae_bad;
  }
  return {out_of_range + sim_bad + target_bad + ae_bad == 0,
          "out_of_range=" + std::to_string(out_of_range) +
              " similarity_violations=" + std::to_string(sim_bad) +
              " target_mismatches=" + std::to_string(target_bad) +
              " ae_not_decreasing=" + std::to_string(ae_bad)};
}

Outcome allocation_superiority() {
  const auto ds = gaussian_mixture({9901, 99}, 6, 7007, 0.08, 5);
  tc::SolverParams p;
  p.gamma = 1.0;
  p.ratio = 50.0 / 10000.0;
  p.seed = 7;
  p.clustering.seed = 7;
  const auto init = tc::init_allocation(ds.class_sizes, p.ratio);
  const std::size_t budget = init.budget();
  tc::LossCache cache(2, budget, p.gamma);
  const auto res = tc::hfils(ds, p, cache);
  auto eval = [&](const tc::Allocation& a) {
    return tc::class_wise_clustering(ds, a.counts, p.gamma, cache, p.clustering);
  };
  const auto ratio = tc::static_allocation(ds.class_sizes, budget, tc::StaticStrategy::ratio);
  const auto fipc = tc::static_allocation(ds.class_sizes, budget, tc::StaticStrategy::fipc);
  const double a = res.objective, r = eval(ratio), f = eval(fipc);
  std::ostringstream os;
  os << "budget=" << budget << " adaptive=[" << res.allocation.counts[0] << ","
     << res.allocation.counts[1] << "] " << fmt("%.9g", a) << " ratio=[" << ratio.counts[0]
     << "," << ratio.counts[1] << "] " << fmt("%.9g", r) << " fipc=[" << fipc.counts[0] << ","
     << fipc.counts[1] << "] " << fmt("%.9g", f);
  return {budget == 50 && a <= r + kAllocationTol && a <= f + kAllocationTol, os.str()};
}

double timed_solve(std::size_t n, std::uint64_t seed) {
  const std::size_t minority = n / 4;
  const auto ds = gaussian_mixture({n - minority, minority}, 8, seed);
  tc::SolverParams p;
  p.ratio = 0.01;
  p.max_iters = 100;
  p.patience = p.max_iters;
  p.seed = 11;
  p.clustering.rel_tol = 0.0;
  p.clustering.max_iters = 20;
  p.clustering.seed = 11;
  const auto t0 = std::chrono::steady_clock::now();
  tc::hfils(ds, p);
  return seconds_since(t0);
}

Outcome scaling_band() {
  const auto t0 = std::chrono::steady_clock::now();
  auto median_of_5 = [](std::size_t n) {
    std::vector<double> t;
    for (int r = 0; r < 5; ++r) t.push_back(timed_solve(n, 8008));
    std::sort(t.begin(), t.end());
    return t[2];
  };
  timed_solve(2000, 8008);  // warm-up
  const double small = median_of_5(2000);
  const double large = median_of_5(4000);
  const double ratio = large / small;
  const double total = seconds_since(t0);
  return {ratio >= kScalingLo && ratio <= kScalingHi && total < kScalingSeconds,
          "median_2000=" + fmt("%.4f", small) + "s median_4000=" + fmt("%.4f", large) +
              "s factor=" + fmt("%.3f", ratio) + " total=" + fmt("%.1f", total) + "s"};
}

Outcome cli_determinism(const char* exe) {
  if (!exe) return {false, "tabcondense executable not provided"};
  TempDir dir("acceptance_cli");
  tc::Rng rng(9009);
  std::string csv = "age,income,city,rank,label\n";
  const char* cities[] = {"Lyon", "Lille", "Laval", "Nice", "Nantes"};
  for (int i = 0; i < 600; ++i) {
    const int y = i % 5 == 0;
    csv += std::to_string(20 + rng.index(50)) + "," + tc::format_value(rng.normal() + 3 * y) +
           "," + cities[rng.index(5)] + "," + std::to_string(rng.index(4)) + "," +
           (y ? ">50K" : "<=50K") + "\n";
  }
  const auto input = dir.write("data.csv", csv);
  std::vector<std::string> outputs;
  for (const char* name : {"a.csv", "b.csv"}) {
    const auto out = dir.file(name);
    const std::string cmd = std::string("\"") + exe + "\" condense --input \"" + input.string() +
                            "\" --label-col label --ratio 0.05 --seed 42 -o \"" + out.string() +
                            "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    outputs.push_back(tc::testing::slurp(out));
  }
  const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
  return {same, "bytes=" + std::to_string(outputs[0].size()) + (same ? " identical" : " differ")};
}

}  // namespace

int main(int argc, char** argv) {
  const char* exe = argc > 1 ? argv[1] : nullptr;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"feasibility_invariant", feasibility},
      {"monotone_objective", monotone_objective},
      {"oracle_dominance", oracle_dominance},
      {"lloyd_monotonicity_cache_coherence", lloyd_and_cache},
      {"kmeans_small_instance_optimality", kmeans_small},
      {"encoding_contracts", encoding_contracts},
      {"allocation_objective_superiority", allocation_superiority},
      {"scaling_band", scaling_band},
      {"cli_determinism", [exe] { return cli_determinism(exe); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
