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

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabcondense/dataset_io.hpp"
#include "tabcondense/encoding.hpp"
#include "tabcondense/hfils.hpp"

namespace tabcondense::cli {

enum class Command { condense, oracle, encode };
enum class Method { c2tc, random, herding, kcenter };
enum class AllocStrategy { adaptive, ratio, fipc };
enum class OracleSolver { exact, brute_force, hfils };

struct RunConfig {
  Command command = Command::condense;
  std::string input;
  std::optional<std::string> schema;
  std::string label_column;
  /// When set, the train split is condensed (or encoded) and the encoder is
  /// fitted on it alone.
  std::optional<SplitSpec> split;
  /// Directory receiving encoded train/val/test CSVs and the encoder JSON.
  std::optional<std::string> splits_dir;
  Method method = Method::c2tc;
  AllocStrategy allocation = AllocStrategy::adaptive;
  SolverParams solver;
  EncodingParams encoding;
  std::uint64_t seed = 0;
  std::string output;
  std::optional<std::string> report;
  bool dump_cache = false;
  OracleSolver oracle_solver = OracleSolver::exact;
  std::vector<double> gamma_grid;
  std::vector<double> step_decay_grid;
  int verbosity = 0;
};

/// Bad command line. `exit_code` is 0 for --help, 1 otherwise; `what()` is
/// the text to print.
class UsageError : public std::runtime_error {
 public:
  UsageError(int exit_code, const std::string& text)
      : std::runtime_error(text), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

inline constexpr const char* kSeedEnv = "TABCONDENSE_SEED";

/// Flags override the --config file, which overrides the seed environment
/// variable, which overrides built-in defaults. `args` excludes argv[0].
RunConfig parse_config(const std::vector<std::string>& args);

/// Runs one config (every sweep point included). Returns 0, 1 (user error)
/// or 2 (internal error); diagnostics go to `err`, the summary to `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Path with `suffix` inserted before the extension.
std::string suffixed(const std::string& path, const std::string& suffix);

int main(int argc, char** argv);

}  // namespace tabcondense::cli
