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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tabcondense/encoding.hpp"
#include "tabcondense/hfils.hpp"
#include "tabcondense/loss_cache.hpp"

namespace tabcondense {

struct ClassReport {
  std::string label;
  std::size_t original = 0;
  std::size_t condensed = 0;
};

/// Everything a condense run records next to its output table.
struct RunReport {
  std::string input;
  std::string method = "c2tc";
  std::string allocation_strategy = "adaptive";
  std::uint64_t seed = 0;
  SolverParams solver;
  EncodingParams encoding;
  std::vector<ClassReport> classes;
  std::size_t rows_original = 0;
  std::size_t rows_condensed = 0;
  std::size_t encoded_dim = 0;
  /// Weighted clustering objective of the final allocation; absent for
  /// selection baselines.
  std::optional<double> objective;
  std::size_t iterations = 0;
  bool early_stopped = false;
  std::string stop_reason;
  std::size_t evaluations = 0;
  std::size_t cache_computed = 0;
  std::size_t cache_hits = 0;
  std::vector<double> accepted_objectives;
  std::vector<double> ae_epoch_losses;
  bool ae_retried = false;
  double encoding_seconds = 0.0;
  double search_seconds = 0.0;
  double final_clustering_seconds = 0.0;
  double total_seconds = 0.0;
  std::vector<std::string> warnings;
  std::vector<LossCache::Entry> cache_entries;
};

/// Fills the solver-derived fields from a finished solve.
void record_solution(RunReport& report, const CondensationResult& result,
                     const LossCache* cache = nullptr);

std::string report_to_json(const RunReport& report);

/// Pretty-printed JSON. Throws IoError on write failure.
void write_report(const RunReport& report, const std::filesystem::path& path);

}  // namespace tabcondense
