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

#include "tabcondense/report.hpp"

#include <fstream>

#include "json.hpp"
#include "tabcondense/error.hpp"

namespace tabcondense {

using nlohmann::json;

void record_solution(RunReport& report, const CondensationResult& result,
                     const LossCache* cache) {
  report.objective = result.objective;
  report.iterations = result.iterations;
  report.early_stopped = result.early_stopped;
  report.stop_reason = std::string(to_string(result.trace.stop_reason));
  report.evaluations = result.trace.evaluations;
  report.cache_computed = result.cache_computed;
  report.cache_hits = result.cache_hits;
  report.accepted_objectives = result.trace.accepted_objectives;
  report.search_seconds = result.search_seconds;
  report.final_clustering_seconds = result.final_clustering_seconds;
  report.rows_condensed = result.condensed.size();
  for (std::size_t c = 0; c < report.classes.size() && c < result.allocation.counts.size();
       ++c) {
    report.classes[c].condensed = result.allocation.counts[c];
  }
  if (cache != nullptr) report.cache_entries = cache->entries();
}

std::string report_to_json(const RunReport& r) {
  json classes = json::array();
  for (const auto& c : r.classes) {
    classes.push_back({{"label", c.label}, {"n", c.original}, {"n_condensed", c.condensed}});
  }
  const auto& s = r.solver;
  const auto& e = r.encoding;
  json doc = {
      {"input", r.input},
      {"method", r.method},
      {"allocation", r.allocation_strategy},
      {"seed", r.seed},
      {"solver",
       {{"ratio", s.ratio},
        {"max_iters", s.max_iters},
        {"gamma", s.gamma},
        {"step_decay", s.step_decay},
        {"tolerance", s.tolerance},
        {"patience", s.patience},
        {"kmeans_max_iters", s.clustering.max_iters},
        {"kmeans_rel_tol", s.clustering.rel_tol},
        {"parallel", s.execution == Execution::parallel}}},
      {"encoding",
       {{"mode", std::string(to_string(e.mode))},
        {"ngram_n", e.ngram_n},
        {"ae_epochs", e.ae_epochs},
        {"ae_learning_rate", e.ae_learning_rate},
        {"ae_hidden_dim", e.ae_hidden_dim},
        {"ae_batch_size", e.ae_batch_size},
        {"lambda", e.lambda_smooth},
        {"sigma", e.noise_sigma}}},
      {"classes", classes},
      {"rows_original", r.rows_original},
      {"rows_condensed", r.rows_condensed},
      {"encoded_dim", r.encoded_dim},
      {"objective", r.objective ? json(*r.objective) : json(nullptr)},
      {"iterations", r.iterations},
      {"early_stopped", r.early_stopped},
      {"stop_reason", r.stop_reason},
      {"evaluations", r.evaluations},
      {"cache", {{"computed", r.cache_computed}, {"hits", r.cache_hits}}},
      {"accepted_objectives", r.accepted_objectives},
      {"ae_epoch_losses", r.ae_epoch_losses},
      {"ae_retried", r.ae_retried},
      {"seconds",
       {{"encoding", r.encoding_seconds},
        {"search", r.search_seconds},
        {"final_clustering", r.final_clustering_seconds},
        {"total", r.total_seconds}}},
      {"warnings", r.warnings},
  };
  if (!r.cache_entries.empty()) {
    json entries = json::array();
    for (const auto& en : r.cache_entries) {
      entries.push_back({{"class", en.class_id}, {"k", en.k}, {"loss", en.value}});
    }
    doc["cache"]["entries"] = entries;
  }
  return doc.dump(2);
}

void write_report(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << report_to_json(report) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace tabcondense
