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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "fa_lab/error.h"
#include "fa_lab/experiments.h"
#include "fa_lab/metrics.h"

namespace fa_lab {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::kConfig,
              "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double AsReal(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    BadValue(key, value);
  }
  return out;
}

template <typename T>
T AsInt(std::string_view key, std::string_view value) {
  T out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) BadValue(key, value);
  return out;
}

std::string Flat(int k) {
  return "flat(" + std::to_string(k) + "," + FormatReal(1.0 / std::sqrt(k)) + ")";
}

std::vector<std::uint64_t> SeedRange(std::uint64_t first, int count) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) seeds[static_cast<std::size_t>(i)] = first + i;
  return seeds;
}

CellSpec Cell(std::string label, Rule rule, double eta, WInit w_init, long max_steps,
              CellCheck check) {
  CellSpec c;
  c.label = std::move(label);
  c.rule = rule;
  c.eta = eta;
  c.w_init = w_init;
  c.max_steps = max_steps;
  c.check = check;
  return c;
}

// n = m = 100, r = 99, Y = A B^T / ||A B^T||_F, orthonormal Z(0).
ScenarioSpec DynamicsBase(std::string name, std::string title) {
  ScenarioSpec s;
  s.name = std::move(name);
  s.title = std::move(title);
  s.n = s.m = 100;
  s.r = 99;
  s.k = 99;
  s.target = TargetKind::kGaussianProduct;
  s.spectrum.clear();
  s.z_init = ZInit::Orthonormal();
  return s;
}

ScenarioSpec Fig2a() {
  ScenarioSpec s;
  s.name = "fig2a";
  s.title = "GD, FA and FA* converge when r >= rank(Y)";
  s.n = s.m = 500;
  s.r = s.k = 50;
  s.spectrum = Flat(50);
  for (auto [label, rule, eta, w_init, steps] :
       {std::tuple{"GD", Rule::kGd, 1.0, WInit::kGaussian, 300L},
        std::tuple{"FA", Rule::kFa, 0.1, WInit::kGaussian, 1000L},
        std::tuple{"FA_STAR", Rule::kFaStar, 0.1, WInit::kOptimal, 300L}}) {
    CellSpec c = Cell(label, rule, eta, w_init, steps, CellCheck::kFinalError);
    c.max_final_error = 1e-3;
    s.cells.push_back(c);
  }
  return s;
}

ScenarioSpec Fig2b() {
  ScenarioSpec s;
  s.name = "fig2b";
  s.title = "FA stationary error stays far above the GD optimum when r < rank(Y)";
  s.n = s.m = s.k = 500;
  s.r = 50;
  s.spectrum = "separation(500,50)";
  s.stop_residual = 1e-12;
  s.seeds = SeedRange(kDefaultSeed, 5);
  CellSpec gd = Cell("GD", Rule::kGd, 1.0, WInit::kGaussian, 600, CellCheck::kFinalError);
  gd.max_final_error = 0.51;
  s.cells.push_back(gd);
  for (auto [label, rule, w_init] : {std::tuple{"FA", Rule::kFa, WInit::kGaussian},
                                     std::tuple{"FA_STAR", Rule::kFaStar, WInit::kOptimal}}) {
    CellSpec c = Cell(label, rule, 0.1, w_init, 600, CellCheck::kFinalError);
    c.min_final_error = 0.70;
    c.min_pass_fraction = 0.8;
    s.cells.push_back(c);
  }
  return s;
}

ScenarioSpec Fig3a() {
  ScenarioSpec s;
  s.name = "fig3a";
  s.title = "1-D residual rises then falls";
  s.n = 100;
  s.m = 1;
  s.r = 50;
  s.target = TargetKind::kUnitVector;
  s.spectrum.clear();
  s.feedback = FeedbackKind::kNegW0;
  // With c = -w(0) and ||w(0)|| ~ 1e3 the Euler step must resolve a time
  // scale of 1/||c||^2; eta = 0.1 overshoots on the first step.
  s.cells.push_back(
      Cell("FA_STAR", Rule::kFaStar, 1e-6, WInit::kOptimal, 3000, CellCheck::kRiseThenFall));
  return s;
}

ScenarioSpec Fig3b() {
  ScenarioSpec s = DynamicsBase("fig3b", "FA* residual is non-monotone for general Y");
  s.cells.push_back(
      Cell("FA_STAR", Rule::kFaStar, 0.1, WInit::kOptimal, 4000, CellCheck::kSignChanges));
  return s;
}

ScenarioSpec Fig4() {
  ScenarioSpec s = DynamicsBase("fig4", "FA* alignment x^T A x and min eig(A) grow");
  s.tracked = 10;
  s.slack = 1e-6;
  // eta = 0.1 shows O(eta^2) dips in min eig(A) of a few 1e-6 per step.
  s.record_stride = 5;
  s.cells.push_back(Cell("FA_STAR", Rule::kFaStar, 0.02, WInit::kOptimal, 15000,
                         CellCheck::kAlignmentMonotone));
  return s;
}

ScenarioSpec Fig5() {
  ScenarioSpec s = DynamicsBase("fig5", "FA with optimal W(0) tracks FA*");
  s.cells.push_back(Cell("FA", Rule::kFa, 0.1, WInit::kOptimal, 2000, CellCheck::kNone));
  CellSpec fast_w = Cell("FA_ETAW_0.5", Rule::kFa, 0.1, WInit::kOptimal, 2000, CellCheck::kNone);
  fast_w.eta_w = 0.5;
  s.cells.push_back(fast_w);
  s.cells.push_back(
      Cell("FA_STAR", Rule::kFaStar, 0.1, WInit::kOptimal, 2000, CellCheck::kNone));
  return s;
}

ScenarioSpec Fig7() {
  ScenarioSpec s = DynamicsBase("fig7", "FA with random W(0)");
  s.w_std = 1e-3;
  s.cells.push_back(Cell("FA", Rule::kFa, 0.1, WInit::kGaussian, 2000, CellCheck::kNone));
  return s;
}

ScenarioSpec Thm42() {
  ScenarioSpec s;
  s.name = "thm42";
  s.title = "FA and FA* reach Y when r = rank(Y)";
  s.n = s.m = 30;
  s.r = s.k = 8;
  s.spectrum = Flat(8);
  s.stop_residual = 1e-14;
  s.record_stride = 10;
  s.seeds = SeedRange(kDefaultSeed, 3);
  for (auto [label, rule, w_init] : {std::tuple{"FA", Rule::kFa, WInit::kGaussian},
                                     std::tuple{"FA_STAR", Rule::kFaStar, WInit::kOptimal}}) {
    CellSpec c = Cell(label, rule, 0.1, w_init, 20000, CellCheck::kFinalError);
    c.max_final_error = 1e-4;
    s.cells.push_back(c);
  }
  return s;
}

ScenarioSpec Thm43() {
  ScenarioSpec s;
  s.name = "thm43";
  s.title = "Separation: FA stationary error vs GD optimum, Monte Carlo";
  s.kind = ScenarioKind::kSeparation;
  s.n = s.m = 500;
  s.r = 50;
  s.spectrum.clear();
  s.seeds = SeedRange(kDefaultSeed, 50);
  CellSpec fa = Cell("FA", Rule::kFa, 0.0, WInit::kGaussian, 0, CellCheck::kFinalError);
  fa.min_final_error = 0.70;
  fa.min_pass_fraction = 48.0 / 50.0;
  CellSpec gd = Cell("GD", Rule::kGd, 0.0, WInit::kGaussian, 0, CellCheck::kFinalError);
  gd.min_final_error = 0.5 - 1e-12;
  gd.max_final_error = 0.5 + 1e-12;
  s.cells = {fa, gd};
  return s;
}

ScenarioSpec Thm44() {
  ScenarioSpec s;
  s.name = "thm44";
  s.title = "Rank-1 FA and GD factors are almost orthogonal, Monte Carlo";
  s.kind = ScenarioKind::kOverlap;
  s.n = s.m = 10000;
  s.r = 1;
  s.eps = 0.5;
  s.spectrum.clear();
  s.spectral = true;
  s.seeds = SeedRange(kDefaultSeed, 20);
  CellSpec fa = Cell("FA", Rule::kFa, 0.0, WInit::kGaussian, 0, CellCheck::kNone);
  fa.min_pass_fraction = 0.9;
  s.cells = {fa};
  return s;
}

ScenarioSpec Thm31Bound() {
  ScenarioSpec s;
  s.name = "thm31bound";
  s.title = "FA* residual falls below eps before the convergence-time bound";
  s.n = s.m = 20;
  s.r = 5;
  s.k = 20;
  s.spectrum = Flat(20);
  s.z_init = ZInit::Orthonormal();
  s.eps = 0.1;
  s.record_stride = 10;
  s.seeds = SeedRange(kDefaultSeed, 5);
  CellSpec hit = Cell("FA_STAR", Rule::kFaStar, 1e-2, WInit::kOptimal, 0, CellCheck::kBoundHit);
  hit.bound_multiple = 1.0;
  hit.stop_residual = s.eps;
  CellSpec settle =
      Cell("FA_STAR_4T", Rule::kFaStar, 1e-2, WInit::kOptimal, 0, CellCheck::kFinalResidual);
  // Full 4T horizon, no early stop: the residual must have settled.
  settle.bound_multiple = 4.0;
  settle.record_stride = 1000;
  settle.max_final_residual = 1e-6;
  s.cells = {hit, settle};
  return s;
}

}  // namespace

void ScenarioSpec::Validate() const {
  if (name.empty()) throw Error(ErrorCode::kConfig, "scenario needs a name");
  if (seeds.empty()) throw Error(ErrorCode::kConfig, "scenario needs at least one seed");
  if (cells.empty()) throw Error(ErrorCode::kConfig, "scenario has no cells to run");
  if (n < 1 || m < 1 || r < 1) {
    throw Error(ErrorCode::kInvalidShape, "n, m and r must be >= 1");
  }
  if (kind == ScenarioKind::kDynamics) {
    // Z (n x r) must be able to have full column rank.
    if (r > n) {
      throw Error(ErrorCode::kInvalidShape,
                  "r = " + std::to_string(r) + " exceeds n = " + std::to_string(n));
    }
    if (target == TargetKind::kUnitVector && m != 1) {
      throw Error(ErrorCode::kInvalidShape, "unit-vector target needs m = 1");
    }
    if (target == TargetKind::kGaussianProduct && k < 1) {
      throw Error(ErrorCode::kInvalidShape, "k must be >= 1");
    }
  }
  if (kind == ScenarioKind::kSeparation && r >= n) {
    throw Error(ErrorCode::kInvalidShape, "separation needs r < n");
  }
  if (kind == ScenarioKind::kOverlap && !(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorCode::kConfig, "eps must lie in (0, 1)");
  }
  if (record_stride < 1) throw Error(ErrorCode::kConfig, "record_stride must be >= 1");
  if (tracked < 0) throw Error(ErrorCode::kConfig, "tracked must be >= 0");
  for (const CellSpec& c : cells) {
    if (kind == ScenarioKind::kDynamics) {
      if (!(c.eta > 0.0)) throw Error(ErrorCode::kConfig, "eta must be positive");
      if (c.max_steps < 0) throw Error(ErrorCode::kConfig, "steps must be >= 0");
    }
  }
}

std::vector<std::string> ScenarioNames() {
  return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4",  "fig5",
          "fig7",  "thm42", "thm43", "thm44", "thm31bound"};
}

ScenarioSpec Scenario(std::string_view name) {
  if (name == "fig2a") return Fig2a();
  if (name == "fig2b") return Fig2b();
  if (name == "fig3a") return Fig3a();
  if (name == "fig3b") return Fig3b();
  if (name == "fig4") return Fig4();
  if (name == "fig5") return Fig5();
  if (name == "fig7") return Fig7();
  if (name == "thm42") return Thm42();
  if (name == "thm43") return Thm43();
  if (name == "thm44") return Thm44();
  if (name == "thm31bound") return Thm31Bound();
  if (name == "custom") return CustomScenario();
  throw Error(ErrorCode::kUnknownScenario, "unknown scenario '" + std::string(name) + "'");
}

ScenarioSpec CustomScenario() {
  ScenarioSpec s;
  s.name = "custom";
  s.title = "Ad-hoc run";
  s.n = s.m = 20;
  s.r = s.k = 5;
  s.spectrum = Flat(5);
  s.cells = {Cell("GD", Rule::kGd, 1.0, WInit::kGaussian, 1000, CellCheck::kNone),
             Cell("FA", Rule::kFa, 0.1, WInit::kGaussian, 1000, CellCheck::kNone),
             Cell("FA_STAR", Rule::kFaStar, 0.1, WInit::kOptimal, 1000, CellCheck::kNone)};
  return s;
}

ScenarioSpec HeavySeparationScenario(int scale) {
  if (scale < 1) throw Error(ErrorCode::kConfig, "scale must be >= 1");
  ScenarioSpec s = Thm43();
  s.name = "thm43heavy";
  s.title = "Separation at the large scale n = 40010 r";
  s.r = 2 * scale;
  s.n = s.m = 40010 * s.r;
  s.spectral = true;
  s.seeds = SeedRange(kDefaultSeed, 10);
  s.cells[0].min_final_error = 0.74;
  s.cells[0].min_pass_fraction = 1.0;
  return s;
}

void OverrideSeed(ScenarioSpec& spec, std::uint64_t seed) {
  spec.seeds = SeedRange(seed, static_cast<int>(spec.seeds.size()));
}

void ApplyOverride(ScenarioSpec& spec, std::string_view key, std::string_view value) {
  key = Trim(key);
  value = Trim(value);
  if (value.empty()) BadValue(key, value);
  const std::string k(key);
  if (k == "n") {
    spec.n = AsInt<int>(key, value);
  } else if (k == "m") {
    spec.m = AsInt<int>(key, value);
  } else if (k == "r") {
    spec.r = AsInt<int>(key, value);
  } else if (k == "k") {
    spec.k = AsInt<int>(key, value);
  } else if (k == "spectrum") {
    ParseSpectrum(value);
    spec.spectrum = std::string(value);
    spec.target = TargetKind::kSpectrum;
  } else if (k == "target") {
    if (value == "spectrum") {
      spec.target = TargetKind::kSpectrum;
    } else if (value == "gaussian_product") {
      spec.target = TargetKind::kGaussianProduct;
    } else if (value == "unit_vector") {
      spec.target = TargetKind::kUnitVector;
    } else {
      BadValue(key, value);
    }
  } else if (k == "z_init") {
    if (value == "orthonormal") {
      spec.z_init = ZInit::Orthonormal();
    } else if (value == "gaussian") {
      spec.z_init = ZInit::Gaussian(spec.z_init.mode == ZInit::Mode::kGaussian
                                        ? spec.z_init.stddev
                                        : 1e-3);
    } else {
      BadValue(key, value);
    }
  } else if (k == "z_std") {
    spec.z_init = ZInit::Gaussian(AsReal(key, value));
  } else if (k == "w_init") {
    WInit w;
    if (value == "optimal") {
      w = WInit::kOptimal;
    } else if (value == "gaussian") {
      w = WInit::kGaussian;
    } else {
      BadValue(key, value);
    }
    for (CellSpec& c : spec.cells) {
      if (c.rule != Rule::kFaStar) c.w_init = w;
    }
  } else if (k == "w_std") {
    spec.w_std = AsReal(key, value);
  } else if (k == "eta") {
    const double eta = AsReal(key, value);
    for (CellSpec& c : spec.cells) c.eta = eta;
  } else if (k == "eta_w") {
    const double eta_w = AsReal(key, value);
    for (CellSpec& c : spec.cells) {
      if (c.rule == Rule::kFa) c.eta_w = eta_w;
    }
  } else if (k == "steps") {
    const long steps = AsInt<long>(key, value);
    for (CellSpec& c : spec.cells) {
      c.max_steps = steps;
      c.bound_multiple.reset();
    }
  } else if (k == "record_stride") {
    spec.record_stride = AsInt<long>(key, value);
    for (CellSpec& c : spec.cells) c.record_stride.reset();
  } else if (k == "stop_residual") {
    spec.stop_residual = AsReal(key, value);
    for (CellSpec& c : spec.cells) c.stop_residual.reset();
  } else if (k == "tracked") {
    spec.tracked = AsInt<int>(key, value);
  } else if (k == "eps") {
    spec.eps = AsReal(key, value);
  } else if (k == "slack") {
    spec.slack = AsReal(key, value);
  } else if (k == "seed") {
    OverrideSeed(spec, AsInt<std::uint64_t>(key, value));
  } else if (k == "seeds") {
    const int count = AsInt<int>(key, value);
    if (count < 1) BadValue(key, value);
    spec.seeds = SeedRange(spec.seeds.empty() ? kDefaultSeed : spec.seeds.front(), count);
  } else if (k == "rule") {
    const Rule rule = ParseRule(value);
    std::erase_if(spec.cells, [rule](const CellSpec& c) { return c.rule != rule; });
    if (spec.cells.empty()) {
      throw Error(ErrorCode::kConfig, "scenario '" + spec.name + "' has no " +
                                          std::string(RuleName(rule)) + " cell");
    }
  } else {
    throw Error(ErrorCode::kConfig, "unknown key '" + k + "'");
  }
  spec.overrides[k] = std::string(value);
}

void ApplyOverride(ScenarioSpec& spec, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::kConfig,
                "expected key=value, got '" + std::string(assignment) + "'");
  }
  ApplyOverride(spec, assignment.substr(0, eq), assignment.substr(eq + 1));
}

ScenarioSpec ParseConfig(std::string_view text) {
  ScenarioSpec spec = CustomScenario();
  bool any_key = false;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig,
                  "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    try {
      if (key == "scenario") {
        if (any_key) throw Error(ErrorCode::kConfig, "'scenario' must come first");
        spec = Scenario(value);
      } else if (key == "out") {
        spec.out_dir = std::string(value);
      } else {
        ApplyOverride(spec, key, value);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kUnknownScenario) throw;
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.detail());
    }
    any_key = true;
  }
  return spec;
}

ScenarioSpec LoadConfig(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kConfig, "config file not found: " + path.string());
  }
  return ParseConfig(ReadFile(path));
}

}  // namespace fa_lab
