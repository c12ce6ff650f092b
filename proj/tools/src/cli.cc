// Copyright 2026 The fa_lab Authors. All Rights Reserved.
//
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

#include "fa_lab_cli/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "fa_lab/error.h"
#include "fa_lab/experiments.h"
#include "fa_lab/verify.h"

namespace fa_lab::cli {
namespace {

struct Common {
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::vector<std::string> sets;
  bool heavy = false;
};

std::filesystem::path DefaultOut() {
  const char* env = std::getenv("FA_LAB_OUT");
  return env != nullptr && *env != '\0' ? std::filesystem::path(env) : "out";
}

std::filesystem::path OutRoot(const Common& c) {
  return c.out.empty() ? DefaultOut() : std::filesystem::path(c.out);
}

void AddCommon(CLI::App* cmd, Common& c, bool with_set) {
  cmd->add_option("--out", c.out, "Output directory (default $FA_LAB_OUT or ./out)");
  cmd->add_option("--seed", c.seed, "Base seed; multi-seed scenarios use seed, seed+1, ...");
  cmd->add_option("--jobs", c.jobs, "Parallel cells (default: available cores)")
      ->check(CLI::NonNegativeNumber);
  if (with_set) {
    cmd->add_option("--set", c.sets, "Override a scenario field, key=value (repeatable)");
  }
}

// Applies --seed and --set; errors here are configuration errors.
void Configure(ScenarioSpec& spec, const Common& c) {
  if (c.seed) OverrideSeed(spec, *c.seed);
  for (const std::string& s : c.sets) ApplyOverride(spec, s);
  if (c.seed) spec.overrides["seed"] = std::to_string(*c.seed);
  spec.Validate();
}

int Report(const ScenarioSpec& spec, const ScenarioOutcome& outcome, std::ostream& out,
           std::ostream& err) {
  for (const CellFailure& f : outcome.data.failures) {
    err << "error: " << f.label << " seed " << f.seed << ": " << f.code;
    if (f.step >= 0) err << " at step " << f.step;
    err << ": " << f.message << "\n";
  }
  for (const CellSummary& c : outcome.summary.cells) {
    out << (c.passed ? "PASS " : "FAIL ") << spec.name << " " << c.rule << " seed=" << c.seed
        << " " << c.notes << "\n";
  }
  for (const GroupSummary& g : outcome.summary.groups) {
    out << (g.ok ? "PASS " : "FAIL ") << spec.name << " " << g.rule << " " << g.passed << "/"
        << g.total << " cells passed (required fraction " << g.required_fraction << ")\n";
  }
  if (!spec.out_dir.empty()) out << "wrote " << spec.out_dir.string() << "\n";
  out << spec.name << ": " << (outcome.summary.passed ? "PASS" : "FAIL") << "\n";
  return outcome.summary.passed ? kExitPass : kExitFail;
}

int Reproduce(const std::string& name, const Common& c, std::ostream& out,
              std::ostream& err) {
  ScenarioSpec spec;
  try {
    spec = c.heavy && name == "thm43" ? HeavySeparationScenario() : Scenario(name);
    Configure(spec, c);
  } catch (const Error& e) {
    err << "error: " << e.detail() << "\n";
    return kExitUsage;
  }
  spec.out_dir = OutRoot(c) / spec.name;
  return Report(spec, RunScenario(spec, RunOptions{c.jobs}), out, err);
}

int RunConfig(const std::string& path, const Common& c, std::ostream& out,
              std::ostream& err) {
  ScenarioSpec spec;
  try {
    spec = LoadConfig(path);
    Configure(spec, c);
  } catch (const Error& e) {
    err << "error: " << e.detail() << "\n";
    return kExitUsage;
  }
  if (!c.out.empty() || spec.out_dir.empty()) spec.out_dir = OutRoot(c) / spec.name;
  return Report(spec, RunScenario(spec, RunOptions{c.jobs}), out, err);
}

int Verify(const std::string& suite, const Common& c, std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.jobs = c.jobs;
  options.heavy = c.heavy;
  if (c.seed) options.seed = *c.seed;
  std::vector<PredicateResult> results;
  try {
    results = RunVerifySuite(suite, options);
  } catch (const Error& e) {
    err << "error: " << e.detail() << "\n";
    return kExitUsage;
  }
  bool all = true;
  for (const PredicateResult& r : results) {
    out << FormatPredicate(r) << "\n";
    all = all && r.passed;
  }
  out << "verify " << suite << ": " << (all ? "PASS" : "FAIL") << "\n";
  return all ? kExitPass : kExitFail;
}

int SweepCmd(const std::string& name, const std::vector<std::string>& grid_args,
             double min_pass, const Common& c, std::ostream& out, std::ostream& err) {
  ScenarioSpec spec;
  std::map<std::string, std::vector<std::string>> grid;
  try {
    spec = Scenario(name);
    Configure(spec, c);
    for (const std::string& g : grid_args) {
      const auto eq = g.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == g.size()) {
        throw Error(ErrorCode::kConfig, "expected key=v1,v2,..., got '" + g + "'");
      }
      std::vector<std::string>& values = grid[g.substr(0, eq)];
      std::string rest = g.substr(eq + 1);
      std::size_t pos = 0;
      while (true) {
        const auto comma = rest.find(',', pos);
        values.push_back(rest.substr(pos, comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.detail() << "\n";
    return kExitUsage;
  }
  spec.out_dir = OutRoot(c) / (spec.name + "_sweep");
  const std::vector<SweepPoint> points = Sweep(spec, grid, RunOptions{c.jobs});
  int passed = 0;
  for (const SweepPoint& p : points) {
    std::string label;
    for (const auto& [k, v] : p.assignment) label += (label.empty() ? "" : ",") + k + "=" + v;
    if (label.empty()) label = "(base)";
    const bool ok = !p.error && p.summary.passed;
    passed += ok ? 1 : 0;
    out << (ok ? "PASS " : "FAIL ") << spec.name << " " << label;
    if (p.error) out << " " << *p.error;
    out << "\n";
  }
  const double fraction = points.empty() ? 0.0 : static_cast<double>(passed) / points.size();
  const bool ok = fraction >= min_pass - 1e-9;
  out << "sweep " << spec.name << ": " << passed << "/" << points.size()
      << " points passed (required fraction " << min_pass << "): " << (ok ? "PASS" : "FAIL")
      << "\n";
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feedback alignment dynamics for low-rank matrix factorization", "fa_lab"};
  app.require_subcommand(1);

  Common common;
  std::string target;
  std::vector<std::string> grid;
  double min_pass = 1.0;

  CLI::App* list = app.add_subcommand("list", "List scenarios and verify suites");

  CLI::App* reproduce = app.add_subcommand("reproduce", "Run a named scenario");
  reproduce->add_option("scenario", target, "Scenario name (see `list`)")->required();
  AddCommon(reproduce, common, true);
  reproduce->add_flag("--heavy", common.heavy, "Use the large-constant regime (thm43)");

  CLI::App* verify = app.add_subcommand("verify", "Check closed-form and invariant predicates");
  verify->add_option("suite", target, "facts, lemma41, thm42, thm43, thm44, thm31, appendixE or all")
      ->required();
  verify->add_option("--seed", common.seed, "Base seed");
  verify->add_option("--jobs", common.jobs, "Parallel cells")->check(CLI::NonNegativeNumber);
  verify->add_flag("--heavy", common.heavy, "Use the large-constant regime (thm43)");

  CLI::App* run = app.add_subcommand("run", "Ad-hoc run from a key = value config file");
  run->add_option("config", target, "Config file")->required();
  AddCommon(run, common, true);

  CLI::App* sweep = app.add_subcommand("sweep", "Cartesian sweep of overrides");
  sweep->add_option("scenario", target, "Scenario name")->required();
  sweep->add_option("--grid", grid, "key=v1,v2,... (repeatable)");
  sweep->add_option("--min-pass", min_pass, "Fraction of points that must pass")
      ->check(CLI::Range(0.0, 1.0));
  AddCommon(sweep, common, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitPass;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (list->parsed()) {
      out << "scenarios:\n";
      for (const std::string& name : ScenarioNames()) {
        out << "  " << name << "  " << Scenario(name).title << "\n";
      }
      out << "verify suites:\n";
      for (const std::string& name : VerifySuiteNames()) out << "  " << name << "\n";
      out << "  all\n";
      return kExitPass;
    }
    if (reproduce->parsed()) return Reproduce(target, common, out, err);
    if (verify->parsed()) return Verify(target, common, out, err);
    if (run->parsed()) return RunConfig(target, common, out, err);
    if (sweep->parsed()) return SweepCmd(target, grid, min_pass, common, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kConfig || e.code() == ErrorCode::kUnknownScenario
               ? kExitUsage
               : kExitFail;
  }
  return kExitUsage;
}

}  // namespace fa_lab::cli
