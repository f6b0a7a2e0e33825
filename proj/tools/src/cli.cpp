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

#include "tabcondense_cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tabcondense/baselines.hpp"
#include "tabcondense/error.hpp"
#include "tabcondense/oracle.hpp"
#include "tabcondense/report.hpp"

namespace tabcondense::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::vector<double> kGammaGrid = {0.25, 0.5, 0.75, 1.0};
const std::vector<double> kStepDecayGrid = {0.1, 0.3, 0.5, 0.7, 0.9};

const std::map<std::string, Method> kMethods = {{"c2tc", Method::c2tc},
                                                {"random", Method::random},
                                                {"herding", Method::herding},
                                                {"kcenter", Method::kcenter}};
const std::map<std::string, AllocStrategy> kAllocs = {{"adaptive", AllocStrategy::adaptive},
                                                      {"ratio", AllocStrategy::ratio},
                                                      {"fipc", AllocStrategy::fipc}};
const std::map<std::string, OracleSolver> kSolvers = {{"exact", OracleSolver::exact},
                                                      {"brute", OracleSolver::brute_force},
                                                      {"hfils", OracleSolver::hfils}};
const std::map<std::string, CategoricalMode> kModes = {
    {"hybrid", CategoricalMode::hybrid},
    {"label", CategoricalMode::label},
    {"target", CategoricalMode::target},
    {"onehot-pca", CategoricalMode::onehot_pca}};

template <class Map>
std::string key_of(const Map& map, typename Map::mapped_type value) {
  for (const auto& [k, v] : map) {
    if (v == value) return k;
  }
  return "?";
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Strings supplied through flags or config, converted once everything has
// been parsed.
struct RawFlags {
  std::string method = "c2tc";
  std::string alloc = "adaptive";
  std::string encoding = "hybrid";
  std::string solver = "exact";
  std::vector<double> split;
  bool sweep_gamma = false;
  bool sweep_step_decay = false;
  bool parallel = false;
  bool verbose = false;
};

void add_io_options(CLI::App& app, RunConfig& cfg, RawFlags& raw, bool needs_label) {
  app.add_option("--input", cfg.input, "Input CSV")->required();
  app.add_option("--schema", cfg.schema, "JSON column-kind overrides");
  auto* label = app.add_option("--label-col", cfg.label_column, "Label column name");
  if (needs_label) label->required();
  app.add_option("--split", raw.split, "train,val,test fractions")
      ->delimiter(',')
      ->expected(3);
  app.add_option("--emit-splits", cfg.splits_dir,
                 "Write encoded train/val/test CSVs and the encoder here");
  app.add_option("--seed", cfg.seed, "Master seed")->envname(kSeedEnv);
  app.add_flag("--verbose,-v", raw.verbose, "Progress on stderr");
}

void add_encoding_options(CLI::App& app, RunConfig& cfg, RawFlags& raw) {
  auto& e = cfg.encoding;
  app.add_option("--lambda", e.lambda_smooth, "Target-encoding smoothing")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--sigma", e.noise_sigma, "Target-encoding noise scale")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--ngram", e.ngram_n, "n-gram order")->check(CLI::PositiveNumber);
  app.add_option("--ae-epochs", e.ae_epochs, "Autoencoder epochs")
      ->check(CLI::PositiveNumber);
  app.add_option("--ae-lr", e.ae_learning_rate, "Autoencoder learning rate")
      ->check(CLI::PositiveNumber);
  app.add_option("--ae-hidden", e.ae_hidden_dim, "Autoencoder hidden width (0 = auto)");
  app.add_option("--encoding", raw.encoding, "Categorical encoding")
      ->check(CLI::IsMember({"hybrid", "label", "target", "onehot-pca"}));
}

void add_solver_options(CLI::App& app, RunConfig& cfg, RawFlags& raw) {
  auto& s = cfg.solver;
  app.add_option("--ratio", s.ratio, "Condensation ratio r")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--gamma", s.gamma, "Class reweighting exponent")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--step-decay", s.step_decay, "Step decay factor l")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--tol", s.tolerance, "Early-stop tolerance")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--patience", s.patience, "Early-stop patience")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iters", s.max_iters, "Search iterations T");
  app.add_option("--kmeans-iters", s.clustering.max_iters, "Lloyd iterations per run")
      ->check(CLI::PositiveNumber);
  app.add_option("--kmeans-tol", s.clustering.rel_tol, "Lloyd relative tolerance")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--parallel", raw.parallel, "Cluster classes concurrently");
}

void finish_config(RunConfig& cfg, const RawFlags& raw) {
  cfg.method = kMethods.at(raw.method);
  cfg.allocation = kAllocs.at(raw.alloc);
  cfg.encoding.mode = kModes.at(raw.encoding);
  cfg.oracle_solver = kSolvers.at(raw.solver);
  cfg.verbosity = raw.verbose ? 1 : 0;
  cfg.solver.execution = raw.parallel ? Execution::parallel : Execution::sequential;
  cfg.solver.seed = cfg.seed;
  cfg.solver.clustering.seed = cfg.seed;
  cfg.encoding.seed = cfg.seed;
  if (!raw.split.empty()) {
    cfg.split = SplitSpec{raw.split[0], raw.split[1], raw.split[2], cfg.seed};
  } else if (cfg.splits_dir) {
    cfg.split = SplitSpec{};
    cfg.split->seed = cfg.seed;
  }
  if (cfg.split) {
    const auto& sp = *cfg.split;
    const double sum = sp.train_fraction + sp.val_fraction + sp.test_fraction;
    if (!(sp.train_fraction > 0 && sp.val_fraction > 0 && sp.test_fraction > 0) ||
        std::abs(sum - 1.0) > 1e-9) {
      throw UsageError(1, "--split: fractions must be positive and sum to 1\n");
    }
  }
  if (raw.sweep_gamma) cfg.gamma_grid = kGammaGrid;
  if (raw.sweep_step_decay) cfg.step_decay_grid = kStepDecayGrid;
  if (cfg.allocation != AllocStrategy::adaptive && raw.sweep_step_decay) {
    throw UsageError(1, "--sweep-step-decay only applies to the adaptive allocation\n");
  }
  try {
    cfg.solver.validate();
    cfg.encoding.validate();
  } catch (const Error& e) {
    throw UsageError(1, std::string(e.what()) + "\n");
  }
}

void add_config_option(CLI::App& app) {
  // Read by expand_config before CLI11 sees the arguments.
  app.add_option("--config", "key = value file mirroring the long flag names");
}

bool is_subcommand(const std::string& arg) {
  return arg == "condense" || arg == "encode" || arg == "oracle";
}

// Splices the entries of a --config file in right after the subcommand name,
// so any flag given on the command line comes later and takes precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw UsageError(1, "--config: cannot open " + *path + "\n");

  std::vector<std::string> injected;
  for (const auto& item : CLI::ConfigTOML().from_config(in)) {
    if (item.name == "++" || item.name == "--" || item.name == "config") continue;
    std::string value;
    for (std::size_t j = 0; j < item.inputs.size(); ++j) {
      value += (j ? "," : "") + item.inputs[j];
    }
    injected.push_back(item.inputs.empty() ? "--" + item.name : "--" + item.name + "=" + value);
  }
  std::vector<std::string> out;
  bool spliced = false;
  for (const auto& a : args) {
    out.push_back(a);
    if (!spliced && is_subcommand(a)) {
      out.insert(out.end(), injected.begin(), injected.end());
      spliced = true;
    }
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  RawFlags raw;

  CLI::App app{"Training-free tabular dataset condensation", "tabcondense"};
  app.require_subcommand(1);
  // Config entries are injected ahead of the real flags; the last value wins.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* condense = app.add_subcommand("condense", "Condense a labelled CSV");
  add_io_options(*condense, cfg, raw, true);
  add_encoding_options(*condense, cfg, raw);
  add_solver_options(*condense, cfg, raw);
  condense->add_option("--method", raw.method, "Condensation method")
      ->check(CLI::IsMember({"c2tc", "random", "herding", "kcenter"}));
  condense->add_option("--alloc", raw.alloc, "Per-class allocation")
      ->check(CLI::IsMember({"adaptive", "ratio", "fipc"}));
  condense->add_option("--output,-o", cfg.output, "Condensed CSV")->required();
  condense->add_option("--report", cfg.report, "Report JSON");
  condense->add_flag("--dump-cache", cfg.dump_cache, "Include loss-cache entries in the report");
  condense->add_flag("--sweep-gamma", raw.sweep_gamma, "Run gamma in {0.25,0.5,0.75,1}");
  condense->add_flag("--sweep-step-decay", raw.sweep_step_decay,
                     "Run step decay in {0.1,0.3,0.5,0.7,0.9}");
  add_config_option(*condense);

  auto* encode = app.add_subcommand("encode", "Encode a labelled CSV into [0,1] features");
  add_io_options(*encode, cfg, raw, true);
  add_encoding_options(*encode, cfg, raw);
  encode->add_option("--output,-o", cfg.output, "Encoded CSV");
  add_config_option(*encode);

  auto* oracle = app.add_subcommand("oracle", "Solve a frozen loss table");
  oracle->add_option("--input", cfg.input, "Frozen loss table JSON")->required();
  oracle->add_option("--solver", raw.solver, "exact | brute | hfils")
      ->check(CLI::IsMember({"exact", "brute", "hfils"}));
  oracle->add_option("--seed", cfg.seed, "Master seed")->envname(kSeedEnv);
  add_solver_options(*oracle, cfg, raw);
  oracle->add_option("--output,-o", cfg.output, "Result JSON (stdout when omitted)");
  add_config_option(*oracle);

  try {
    const std::vector<std::string> expanded = expand_config(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(0, app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    std::string text = std::string(e.what()) + "\n";
    for (auto* sub : {condense, encode, oracle}) {
      if (sub->parsed()) text += "Run 'tabcondense " + sub->get_name() + " --help' for usage.\n";
    }
    if (!condense->parsed() && !encode->parsed() && !oracle->parsed()) text += app.help();
    throw UsageError(1, text);
  }

  if (condense->parsed()) {
    cfg.command = Command::condense;
  } else if (encode->parsed()) {
    cfg.command = Command::encode;
    if (cfg.output.empty() && !cfg.splits_dir) {
      throw UsageError(1, "encode: one of --output or --emit-splits is required\n");
    }
  } else {
    cfg.command = Command::oracle;
  }
  finish_config(cfg, raw);
  return cfg;
}

std::string suffixed(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path() / (p.stem().string() + suffix);
  out += p.extension();
  return out.string();
}

namespace {

struct Loaded {
  RawTable table;
  std::optional<TableSplit> split;
  EncodingResult encoded;
  double seconds = 0.0;
};

void note(const RunConfig& cfg, std::ostream& err, const std::string& line) {
  if (cfg.verbosity > 0) err << "[tabcondense] " << line << '\n';
}

void write_matrix(const Matrix& rows, const std::vector<int>& labels,
                  const std::string& path) {
  CondensedTable t;
  t.rows = rows;
  t.labels = labels;
  write_condensed(t, path);
}

Loaded load_and_encode(const RunConfig& cfg, std::ostream& err) {
  const auto start = Clock::now();
  Loaded l;
  std::optional<std::filesystem::path> schema;
  if (cfg.schema) schema = *cfg.schema;
  l.table = load_table(cfg.input, cfg.label_column, schema);
  note(cfg, err, "loaded " + std::to_string(l.table.num_rows()) + " rows, " +
                     std::to_string(l.table.columns.size()) + " features, " +
                     std::to_string(l.table.num_classes()) + " classes");
  const RawTable* fit = &l.table;
  if (cfg.split) {
    l.split = split(l.table, *cfg.split);
    for (const auto& w : l.split->warnings) err << "warning: " << w << '\n';
    fit = &l.split->train;
  }
  l.encoded = encode_dataset(*fit, cfg.encoding);
  if (l.encoded.ae_retried) note(cfg, err, "autoencoder retrained at half learning rate");
  l.seconds = seconds_since(start);
  note(cfg, err, "encoded to " + std::to_string(l.encoded.dataset.dim()) + " features in " +
                     format_number(l.seconds) + " s");

  if (cfg.splits_dir) {
    const std::filesystem::path dir(*cfg.splits_dir);
    std::filesystem::create_directories(dir);
    const auto& ds = l.encoded.dataset;
    write_matrix(ds.features, ds.labels, (dir / "train.csv").string());
    for (const auto& [name, part] : {std::pair{"val", &l.split->val},
                                     std::pair{"test", &l.split->test}}) {
      if (part->num_rows() == 0) {
        err << "warning: " << name << " split is empty; not written\n";
        continue;
      }
      write_matrix(l.encoded.encoder.transform(*part), part->labels,
                   (dir / (std::string(name) + ".csv")).string());
    }
    std::ofstream enc(dir / "encoder.json");
    enc << l.encoded.encoder.to_json() << '\n';
    if (!enc) throw IoError("cannot write " + (dir / "encoder.json").string());
  }
  return l;
}

struct Solved {
  CondensedTable condensed;
  Allocation allocation;
  std::optional<CondensationResult> search;
  std::optional<double> objective;
  double final_seconds = 0.0;
};

double static_objective(const EncodedDataset& ds, const Allocation& a,
                        const SolverParams& params, LossCache& cache) {
  return class_wise_clustering(ds, a.counts, params.gamma, cache, params.clustering,
                               params.execution);
}

Solved solve(const RunConfig& cfg, const EncodedDataset& ds, const SolverParams& params,
             LossCache& cache) {
  Solved s;
  const Allocation initial = init_allocation(ds.class_sizes, params.ratio);
  const std::size_t budget = initial.budget();

  if (cfg.allocation == AllocStrategy::adaptive) {
    if (cfg.method == Method::c2tc) {
      s.search = hfils(ds, params, cache);
      s.allocation = s.search->allocation;
      s.condensed = s.search->condensed;
      s.objective = s.search->objective;
      s.final_seconds = s.search->final_clustering_seconds;
      return s;
    }
    SolverParams p = params;
    const AllocationObjective objective = [&](const Allocation& a) {
      return static_objective(ds, a, p, cache);
    };
    const auto start = Clock::now();
    CondensationResult r;
    r.trace = local_search(initial, objective, p);
    r.allocation = r.trace.best;
    r.objective = r.trace.best_objective;
    r.iterations = r.trace.iterations;
    r.early_stopped = r.trace.early_stopped;
    r.search_seconds = seconds_since(start);
    r.cache_computed = cache.computed();
    r.cache_hits = cache.hits();
    s.allocation = r.allocation;
    s.search = std::move(r);
  } else {
    s.allocation = static_allocation(ds.class_sizes, budget,
                                     cfg.allocation == AllocStrategy::ratio
                                         ? StaticStrategy::ratio
                                         : StaticStrategy::fipc);
  }

  const auto start = Clock::now();
  switch (cfg.method) {
    case Method::c2tc: {
      s.objective = static_objective(ds, s.allocation, params, cache);
      const auto parts =
          cluster_allocation(ds, s.allocation, params.clustering, params.execution);
      s.condensed = build_condensed(ds, s.allocation, parts);
      break;
    }
    case Method::random:
      s.condensed = random_coreset(ds, s.allocation.budget(), params.seed);
      break;
    case Method::herding:
      s.condensed = herding_coreset(ds, s.allocation);
      break;
    case Method::kcenter:
      s.condensed = kcenter_coreset(ds, s.allocation, params.seed);
      break;
  }
  s.final_seconds = seconds_since(start);
  if (s.search) s.search->condensed = s.condensed;
  return s;
}

int run_condense(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto total_start = Clock::now();
  const Loaded l = load_and_encode(cfg, err);
  const EncodedDataset& ds = l.encoded.dataset;
  const RawTable& fit = l.split ? l.split->train : l.table;

  std::vector<double> gammas = cfg.gamma_grid;
  if (gammas.empty()) gammas.push_back(cfg.solver.gamma);
  std::vector<double> decays = cfg.step_decay_grid;
  if (decays.empty()) decays.push_back(cfg.solver.step_decay);
  const bool sweeping = gammas.size() * decays.size() > 1;

  for (double gamma : gammas) {
    // Cache entries depend on gamma only, so every step-decay point reuses them.
    const Allocation initial = init_allocation(ds.class_sizes, cfg.solver.ratio);
    LossCache cache(ds.num_classes(), initial.budget(), gamma);
    for (double decay : decays) {
      const auto run_start = Clock::now();
      SolverParams params = cfg.solver;
      params.gamma = gamma;
      params.step_decay = decay;

      std::string suffix;
      if (!cfg.gamma_grid.empty()) suffix += "_gamma" + format_number(gamma);
      if (!cfg.step_decay_grid.empty()) suffix += "_decay" + format_number(decay);
      const std::string output = sweeping ? suffixed(cfg.output, suffix) : cfg.output;

      note(cfg, err, "solving gamma=" + format_number(gamma) +
                         " step_decay=" + format_number(decay) + " budget=" +
                         std::to_string(initial.budget()));
      Solved s = solve(cfg, ds, params, cache);
      write_condensed(s.condensed, output);

      RunReport report;
      report.input = cfg.input;
      report.method = key_of(kMethods, cfg.method);
      report.allocation_strategy = key_of(kAllocs, cfg.allocation);
      report.seed = cfg.seed;
      report.solver = params;
      report.encoding = cfg.encoding;
      report.rows_original = ds.num_rows();
      report.rows_condensed = s.condensed.size();
      report.encoded_dim = ds.dim();
      for (std::size_t c = 0; c < ds.num_classes(); ++c) {
        report.classes.push_back({fit.label_values[c], ds.class_sizes[c], 0});
      }
      if (s.search) record_solution(report, *s.search, cfg.dump_cache ? &cache : nullptr);
      const auto counts = s.condensed.label_counts(ds.num_classes());
      for (std::size_t c = 0; c < ds.num_classes(); ++c) report.classes[c].condensed = counts[c];
      report.rows_condensed = s.condensed.size();
      report.objective = s.objective;
      report.final_clustering_seconds = s.final_seconds;
      report.ae_epoch_losses = l.encoded.ae_epoch_losses;
      report.ae_retried = l.encoded.ae_retried;
      report.encoding_seconds = l.seconds;
      report.total_seconds = seconds_since(run_start) + (sweeping ? 0.0 : l.seconds);
      if (l.split) report.warnings = l.split->warnings;
      if (cfg.report) {
        write_report(report, sweeping ? suffixed(*cfg.report, suffix) : *cfg.report);
      }

      out << "N=" << ds.num_rows() << " N'=" << s.condensed.size() << " objective="
          << (s.objective ? format_value(*s.objective) : std::string("n/a"))
          << " seconds=" << format_number(seconds_since(sweeping ? run_start : total_start));
      if (sweeping) out << " output=" << output;
      out << '\n';
    }
  }
  return 0;
}

int run_encode(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Loaded l = load_and_encode(cfg, err);
  const auto& ds = l.encoded.dataset;
  if (!cfg.output.empty()) write_matrix(ds.features, ds.labels, cfg.output);
  out << "N=" << ds.num_rows() << " D=" << ds.dim()
      << " seconds=" << format_number(seconds_since(start)) << '\n';
  return 0;
}

int run_oracle(const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw IoError("cannot open " + cfg.input);
  std::ostringstream text;
  text << in.rdbuf();
  const FrozenLossTable table = FrozenLossTable::from_json(text.str());

  nlohmann::json doc;
  doc["solver"] = key_of(kSolvers, cfg.oracle_solver);
  switch (cfg.oracle_solver) {
    case OracleSolver::exact:
    case OracleSolver::brute_force: {
      const OracleSolution sol = cfg.oracle_solver == OracleSolver::exact
                                     ? exact_allocate(table)
                                     : brute_force_allocate(table);
      doc["allocation"] = sol.allocation.counts;
      doc["objective"] = sol.optimum;
      break;
    }
    case OracleSolver::hfils: {
      Allocation initial;
      initial.class_sizes = table.class_sizes;
      const Allocation ratio = init_allocation(table.class_sizes, cfg.solver.ratio);
      if (ratio.budget() != table.budget) {
        initial = static_allocation(table.class_sizes, table.budget, StaticStrategy::ratio);
      } else {
        initial = ratio;
      }
      const SearchTrace trace = hfils_frozen(table, initial, cfg.solver);
      doc["initial"] = trace.initial.counts;
      doc["initial_objective"] = trace.initial_objective;
      doc["allocation"] = trace.best.counts;
      doc["objective"] = trace.best_objective;
      doc["iterations"] = trace.iterations;
      doc["stop_reason"] = std::string(to_string(trace.stop_reason));
      break;
    }
  }
  const std::string body = doc.dump(2);
  if (cfg.output.empty()) {
    out << body << '\n';
  } else {
    std::ofstream f(cfg.output);
    f << body << '\n';
    if (!f) throw IoError("cannot write " + cfg.output);
  }
  return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::condense:
        return run_condense(cfg, out, err);
      case Command::encode:
        return run_encode(cfg, out, err);
      case Command::oracle:
        return run_oracle(cfg, out);
    }
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.user_error() ? 1 : 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: io: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const UsageError& e) {
    (e.exit_code() == 0 ? std::cout : std::cerr) << e.what();
    return e.exit_code();
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace tabcondense::cli
