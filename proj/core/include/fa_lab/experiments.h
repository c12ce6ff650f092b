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

#ifndef FA_LAB_EXPERIMENTS_H_
#define FA_LAB_EXPERIMENTS_H_

// Named scenarios for the figure reproductions and closed-form checks, their
// execution over (cell, seed) pairs, and the summary/manifest documents
// written next to the metrics tables.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fa_lab/dynamics.h"
#include "fa_lab/metrics.h"
#include "fa_lab/problem.h"

namespace fa_lab {

inline constexpr std::uint64_t kDefaultSeed = 42;

enum class ScenarioKind {
  kDynamics,    // Euler runs of the configured cells
  kSeparation,  // closed-form separation trials, one per seed
  kOverlap,     // closed-form rank-1 overlap trials, one per seed
};

enum class TargetKind { kSpectrum, kGaussianProduct, kUnitVector };
enum class WInit { kGaussian, kOptimal };
enum class FeedbackKind { kGaussian, kNegW0 };

// Per-cell acceptance check applied to the recorded trajectory.
enum class CellCheck {
  kNone,              // the run completes
  kFinalError,        // final error within [min_final_error, max_final_error]
  kRiseThenFall,      // residual_sq nondecreasing then nonincreasing, with a rise
  kSignChanges,       // >= min_sign_changes sign changes of diff(residual_sq)
  kAlignmentMonotone, // tracks and min_eig_A nondecreasing within slack
  kBoundHit,          // min residual_sq <= eps at some t <= time_bound
  kFinalResidual,     // final residual_sq <= max_final_residual
};

struct CellSpec {
  std::string label;  // written to the "rule" column
  Rule rule = Rule::kGd;
  double eta = 0.1;
  std::optional<double> eta_w;
  WInit w_init = WInit::kGaussian;
  long max_steps = 1000;
  // When set, max_steps = ceil(bound_multiple * time_bound / eta).
  std::optional<double> bound_multiple;
  std::optional<double> stop_residual;  // overrides the scenario value
  std::optional<long> record_stride;    // overrides the scenario value
  CellCheck check = CellCheck::kNone;
  std::optional<double> max_final_error;
  std::optional<double> min_final_error;
  std::optional<double> max_final_residual;
  double min_pass_fraction = 1.0;  // over seeds
};

struct ScenarioSpec {
  std::string name;
  std::string title;
  ScenarioKind kind = ScenarioKind::kDynamics;
  int n = 20;
  int m = 20;
  int r = 5;
  TargetKind target = TargetKind::kSpectrum;
  std::string spectrum = "flat(5,0.4472135954999579)";
  int k = 5;  // inner width of the Gaussian product target
  ZInit z_init = ZInit::Gaussian(1e-3);
  double w_std = 1e-3;
  FeedbackKind feedback = FeedbackKind::kGaussian;
  std::vector<CellSpec> cells;
  long record_stride = 1;
  double stop_residual = 0.0;
  int tracked = 0;  // random unit directions x tracked via x^T A x
  double eps = 0.1;
  double slack = 1e-8;
  int min_sign_changes = 3;
  bool spectral = false;  // closed-form trials in the singular basis
  std::vector<std::uint64_t> seeds{kDefaultSeed};
  std::filesystem::path out_dir;
  std::map<std::string, std::string> overrides;  // echoed in the summary

  void Validate() const;
};

std::vector<std::string> ScenarioNames();
// Throws kUnknownScenario.
ScenarioSpec Scenario(std::string_view name);
// Base spec for ad-hoc runs: a small flat-spectrum problem with all rules.
ScenarioSpec CustomScenario();

// Large-constant separation regime (r = 2 * scale,
// n = 40010 * r), evaluated with the spectral path.
ScenarioSpec HeavySeparationScenario(int scale = 1);

// Applies one key=value override. Keys: n, m, r, k, spectrum, target,
// z_init, z_std, w_init, w_std, eta, eta_w, steps, record_stride,
// stop_residual, tracked, eps, slack, seed, seeds, rule. "seed" shifts the
// seed list to start at the given value; "seeds" sets the trial count;
// "rule" keeps only the cells of that rule. Throws kConfig.
void ApplyOverride(ScenarioSpec& spec, std::string_view key, std::string_view value);
void ApplyOverride(ScenarioSpec& spec, std::string_view assignment);  // "key=value"

// Seed list becomes seed, seed+1, ... with the same length.
void OverrideSeed(ScenarioSpec& spec, std::uint64_t seed);

// `key = value` lines, '#' comments. "scenario" selects the base spec and
// must come first if present.
ScenarioSpec ParseConfig(std::string_view text);
ScenarioSpec LoadConfig(const std::filesystem::path& path);

struct CellFailure {
  std::string label;
  std::uint64_t seed = 0;
  std::string code;
  std::string message;
  long step = -1;
};

struct ScenarioData {
  MetricsTable metrics;
  TrackTable tracks;
  OracleTable oracle;
  std::vector<CellFailure> failures;
};

struct CellStats {
  long records = 0;
  long last_step = 0;
  double final_error = 0.0;
  double final_residual = 0.0;
  double min_residual = 0.0;
  std::optional<double> min_residual_t;
  int residual_sign_changes = 0;
  double max_error_rise = 0.0;
  std::optional<double> max_min_eig_drop;
  std::optional<double> max_track_drop;
  std::optional<double> max_trace_potential_rise;
  std::optional<long> residual_peak_step;
};

struct CellSummary {
  std::string rule;
  std::uint64_t seed = 0;
  double final_error = 0.0;
  bool passed = false;
  std::string notes;
  std::optional<CellStats> stats;
};

struct GroupSummary {
  std::string rule;
  int passed = 0;
  int total = 0;
  double required_fraction = 1.0;
  bool ok = false;
};

struct SummaryReport {
  std::string scenario;
  std::vector<CellSummary> cells;
  std::vector<GroupSummary> groups;
  std::map<std::string, std::string> overrides;
  bool passed = false;
};

struct RunOptions {
  int jobs = 0;  // 0: hardware concurrency
};

// Executes every (cell, seed) pair. Failing cells are recorded in
// `failures` with whatever trajectory they produced; siblings continue.
ScenarioData ExecuteScenario(const ScenarioSpec& spec, const RunOptions& options = {});

// Derived purely from the spec's predicates and the recorded data.
SummaryReport Summarize(const ScenarioSpec& spec, const ScenarioData& data);

CellStats ComputeCellStats(const MetricsTable& rows, const TrackTable& tracks);

std::string SummaryJson(const SummaryReport& report);
SummaryReport ParseSummaryJson(std::string_view text);

// Plot manifest for the plotting component: figures, axis labels and the
// CSV series (file, column filter, x, y, label, y scale) they draw.
std::string ManifestJson(const ScenarioSpec& spec);

struct ScenarioOutcome {
  ScenarioData data;
  SummaryReport summary;
};

// ExecuteScenario + Summarize, then writes metrics.csv, tracks.csv (when
// any), oracle.csv (when any), summary.json and manifest.json into
// spec.out_dir when it is nonempty.
ScenarioOutcome RunScenario(const ScenarioSpec& spec, const RunOptions& options = {});

void WriteOutputs(const ScenarioSpec& spec, const ScenarioOutcome& outcome);

// One run per point of the Cartesian product of `grid` (key -> values),
// each with its overrides applied on top of `spec`. A point whose
// overrides are rejected yields a failed summary carrying the message; the
// other points still run. Output directories get a "key=value,..." suffix.
struct SweepPoint {
  std::map<std::string, std::string> assignment;
  SummaryReport summary;
  std::optional<std::string> error;
};

std::vector<SweepPoint> Sweep(const ScenarioSpec& spec,
                              const std::map<std::string, std::vector<std::string>>& grid,
                              const RunOptions& options = {});

}  // namespace fa_lab

#endif  // FA_LAB_EXPERIMENTS_H_
