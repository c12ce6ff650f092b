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

#include "fa_lab/verify.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fa_lab/diagnostics.h"
#include "fa_lab/dynamics.h"
#include "fa_lab/error.h"
#include "fa_lab/rng.h"
#include "fa_lab/stationary.h"

namespace fa_lab {
namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

PredicateResult AtMost(std::string suite, std::string name, double measured, double limit,
                       std::string detail = {}) {
  return {std::move(suite), std::move(name), measured, "<=", Num(limit),
          measured <= limit, std::move(detail)};
}

PredicateResult AtLeast(std::string suite, std::string name, double measured, double limit,
                        std::string detail = {}) {
  return {std::move(suite), std::move(name), measured, ">=", Num(limit),
          measured >= limit, std::move(detail)};
}

// One predicate per cell group of the scenario: the passing fraction.
void ScenarioPredicates(const std::string& suite, const ScenarioSpec& spec,
                        const VerifyOptions& options, std::vector<PredicateResult>& out) {
  const SummaryReport report = RunScenario(spec, RunOptions{options.jobs}).summary;
  for (const GroupSummary& g : report.groups) {
    std::string detail = std::to_string(g.passed) + "/" + std::to_string(g.total) + " cells";
    for (const CellSummary& c : report.cells) {
      if (c.rule == g.rule && !c.passed) {
        detail += "; seed " + std::to_string(c.seed) + ": " + c.notes;
        break;
      }
    }
    PredicateResult r = AtLeast(suite, spec.name + "." + g.rule + ".pass_fraction",
                                g.total > 0 ? static_cast<double>(g.passed) / g.total : 0.0,
                                g.required_fraction, detail);
    r.passed = g.ok;
    out.push_back(std::move(r));
  }
}

// Random n x m target with a decaying spectrum, scaled to ||Y||_F = 1.
TargetMatrix SmallTarget(int n, int m, std::uint64_t seed) {
  return MakeGaussianProductTarget(n, m, std::min(n, m), seed);
}

void FactsSuite(const VerifyOptions& o, std::vector<PredicateResult>& out) {
  const std::string suite = "facts";
  const std::uint64_t seed = o.seed;

  {  // Z^T (Y - Yhat) = 0 after every FA* step.
    const TargetMatrix target = SmallTarget(30, 30, seed);
    FactorState state = FaStarInit(30, 10, target, seed, ZInit::Orthonormal());
    const FeedbackMatrix fb = MakeFeedback(10, 30, seed);
    double worst = (state.z().transpose() * (target.y - state.yhat())).norm();
    for (int step = 0; step < 500; ++step) {
      state = FaStarStep(state, target.y, fb.c, 0.05);
      worst = std::max(worst, (state.z().transpose() * (target.y - state.yhat())).norm());
    }
    out.push_back(AtMost(suite, "fa_star_normal_equations", worst / target.y.norm(), 1e-8,
                         "max ||Z^T(Y - Yhat)||_F / ||Y||_F over 500 steps"));
  }

  {  // Z^T Z drift under FA* is first order in eta.
    const TargetMatrix target = SmallTarget(30, 30, seed + 1);
    const FactorState init = FaStarInit(30, 10, target, seed + 1, ZInit::Orthonormal());
    const FeedbackMatrix fb = MakeFeedback(10, 30, seed + 1);
    const Matrix g0 = init.z().transpose() * init.z();
    auto drift = [&](double eta) {
      FactorState s = init;
      const long steps = std::lround(2.0 / eta);
      for (long i = 0; i < steps; ++i) s = FaStarStep(s, target.y, fb.c, eta);
      return (s.z().transpose() * s.z() - g0).norm();
    };
    // Halving eta should halve the drift, within 50%: drift(eta / 2) / drift(eta)
    // in [0.25, 0.75].
    const double ratio = drift(0.01) / drift(0.02);
    PredicateResult r{suite, "fa_star_gram_drift_halving", ratio, "in", "[0.25, 0.75]",
                      ratio >= 0.25 && ratio <= 0.75,
                      "drift(eta / 2) / drift(eta) over t = 2"};
    out.push_back(r);
  }

  {  // GD increment against central differences of 1/2 ||ZW - Y||^2.
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      Rng rng(seed, "facts.fd." + std::to_string(trial));
      const Matrix y = rng.Gaussian(5, 4);
      const FactorState s(rng.Gaussian(5, 3), rng.Gaussian(3, 4));
      const double eta = 1e-3;
      const FactorState next = GdStep(s, y, eta);
      const Matrix dz = (next.z() - s.z()) / eta;
      const Matrix dw = (next.w() - s.w()) / eta;
      auto loss = [&](const Matrix& z, const Matrix& w) {
        return 0.5 * (z * w - y).squaredNorm();
      };
      const double h = 1e-6;
      Matrix gz(dz.rows(), dz.cols());
      Matrix gw(dw.rows(), dw.cols());
      for (Eigen::Index i = 0; i < gz.size(); ++i) {
        Matrix zp = s.z(), zm = s.z();
        zp(i) += h;
        zm(i) -= h;
        gz(i) = (loss(zp, s.w()) - loss(zm, s.w())) / (2 * h);
      }
      for (Eigen::Index i = 0; i < gw.size(); ++i) {
        Matrix wp = s.w(), wm = s.w();
        wp(i) += h;
        wm(i) -= h;
        gw(i) = (loss(s.z(), wp) - loss(s.z(), wm)) / (2 * h);
      }
      const double num = std::sqrt((dz + gz).squaredNorm() + (dw + gw).squaredNorm());
      const double den = std::sqrt(gz.squaredNorm() + gw.squaredNorm());
      worst = std::max(worst, num / den);
    }
    out.push_back(AtMost(suite, "gd_step_is_negative_gradient", worst, 1e-5,
                         "relative error vs central differences, 5 instances"));
  }

  {  // Exact solutions are fixed points.
    Rng rng(seed, "facts.fixed");
    const Matrix z = rng.Gaussian(8, 3);
    const Matrix w = rng.Gaussian(3, 6);
    const Matrix y = z * w;
    const Matrix c = rng.Gaussian(3, 6);
    const FactorState s(z, w);
    const bool fixed = GdStep(s, y, 0.1) == s && FaStep(s, y, c, 0.1, 0.1) == s &&
                       FaStarStep(s, y, c, 0.1) == s;
    out.push_back({suite, "exact_solution_fixed", fixed ? 1.0 : 0.0, "==", "1", fixed,
                   "GD, FA and FA* leave Y = ZW unchanged bitwise"});
  }

  {  // Linear network with isotropic input follows the factorization.
    const int n = 10;
    const TargetMatrix target = SmallTarget(n, 6, seed + 2);
    const Matrix x = Orthonormalize(Rng(seed, "facts.x").Gaussian(20, n));
    const FeedbackMatrix fb = MakeFeedback(4, 6, seed + 2);
    const FactorState gauss = GaussianInit(n, 4, 6, 0.1, seed + 2);
    const FactorState opt = OptimalWInit(gauss.z(), target);
    for (Rule rule : {Rule::kGd, Rule::kFa, Rule::kFaStar}) {
      double gap = 0.0;
      const double dev = NnEquivalenceCheck(x, target, rule == Rule::kFaStar ? opt : gauss,
                                            rule == Rule::kGd ? nullptr : &fb, rule, 0.1,
                                            100, &gap);
      out.push_back(AtMost(suite, "nn_equivalence." + std::string(RuleName(rule)), dev, 1e-10,
                           "training error gap " + Num(gap)));
    }
  }
}

void ProjectionSuite(const VerifyOptions& o, std::vector<PredicateResult>& out) {
  const std::string suite = "lemma41";
  const int n = 40;
  for (int r : {3, 5, 10}) {
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(r);
    const TargetMatrix target = MakeTarget(n, n, FlatSpectrum(n, 1.0 / std::sqrt(n)), seed);
    const FeedbackMatrix fb = MakeFeedback(r, n, seed);
    const FactorState init = FaStarInit(n, r, target, seed, ZInit::Orthonormal());
    TrainerConfig config;
    config.rule = Rule::kFaStar;
    config.eta = 0.5;
    config.max_steps = 200000;
    config.record_stride = 1000;
    config.stop_residual = 1e-20;
    const RunResult run = Run(target, init, &fb, config);
    const Matrix predicted = PredictedSolution(target, fb);
    const double gap = (run.final_state.yhat() - predicted).norm() / target.y.norm();
    out.push_back(AtMost(suite, "converged_yhat_matches_projection.r" + std::to_string(r), gap,
                         1e-3,
                         "final residual_sq " + Num(run.records.back().residual_sq) +
                             " at step " + std::to_string(run.records.back().step)));

    const Matrix a = target.y * fb.c.transpose();
    const double formula = ProjectionError(target, a);
    const double direct = (target.y - ColumnProjector(a) * target.y).squaredNorm();
    out.push_back(AtMost(suite, "projection_error_formula.r" + std::to_string(r),
                         std::abs(formula - direct) / direct, 1e-10,
                         "sum sigma_i^2 (1 - ||P_A u_i||^2) vs ||Y - P_A Y||_F^2"));
  }
}

void Thm42Suite(const VerifyOptions& o, std::vector<PredicateResult>& out) {
  ScenarioSpec spec = Scenario("thm42");
  OverrideSeed(spec, o.seed);
  ScenarioPredicates("thm42", spec, o, out);
  double worst = 0.0;
  for (std::uint64_t seed : spec.seeds) {
    const TargetMatrix target = MakeTarget(spec.n, spec.m, ParseSpectrum(spec.spectrum), seed);
    const FeedbackMatrix fb = MakeFeedback(spec.r, spec.m, seed);
    worst = std::max(worst, (PredictedSolution(target, fb) - target.y).squaredNorm());
  }
  out.push_back(AtMost("thm42", "predicted_error_is_zero", worst, 1e-12,
                       "||P_{YC^T} Y - Y||_F^2 at r = rank(Y)"));
}

void Thm43Suite(const VerifyOptions& o, std::vector<PredicateResult>& out) {
  ScenarioSpec spec = o.heavy ? HeavySeparationScenario() : Scenario("thm43");
  OverrideSeed(spec, o.seed);
  ScenarioPredicates("thm43", spec, o, out);
}

void Thm44Suite(const VerifyOptions& o, std::vector<PredicateResult>& out) {
  ScenarioSpec spec = Scenario("thm44");
  OverrideSeed(spec, o.seed);
  ScenarioPredicates("thm44", spec, o, out);
}

void Thm31Suite(const VerifyOptions& o, std::vector<PredicateResult>& out) {
  ScenarioSpec spec = Scenario("thm31bound");
  OverrideSeed(spec, o.seed);
  ScenarioPredicates("thm31", spec, o, out);
}

void HeavySeparationSuite(const VerifyOptions& o, std::vector<PredicateResult>& out) {
  const std::string suite = "appendixE";
  const int n = 10, r = 3;
  const TargetMatrix target = SmallTarget(n, n, o.seed);
  const FeedbackMatrix fb = MakeFeedback(r, n, o.seed);
  const FactorState init = GaussianInit(n, r, n, 0.1, o.seed);
  const double sigma1 = target.svd.singular_values(0);

  {  // Tr(V) never increases along a stable FA run.
    const double eta = 0.05 / (sigma1 * sigma1);
    FactorState s = init;
    double prev = TracePotential(s, target.y, fb.c);
    double worst = 0.0;
    for (int step = 0; step < 2000; ++step) {
      s = FaStep(s, target.y, fb.c, eta, eta);
      const double v = TracePotential(s, target.y, fb.c);
      worst = std::max(worst, v - prev);
      prev = v;
    }
    out.push_back(AtMost(suite, "trace_potential_nonincreasing", worst, 1e-8,
                         "max per-step rise over 2000 FA steps"));
  }

  {  // d Tr(V)/dt = -||(Y - Yhat) C^T||_F^2, Richardson at eta and eta / 2.
    const double eta = 1e-4;
    const double v0 = TracePotential(init, target.y, fb.c);
    auto rate = [&](double h) {
      const FactorState next = FaStep(init, target.y, fb.c, h, h);
      return (TracePotential(next, target.y, fb.c) - v0) / h;
    };
    const double extrapolated = 2.0 * rate(eta / 2) - rate(eta);
    const double expected = -RuleResidualSq(Rule::kFa, init, target.y, &fb.c);
    out.push_back(AtMost(suite, "trace_potential_rate", std::abs(extrapolated - expected) /
                                                            std::abs(expected),
                         5e-2, "relative gap to -||(Y - Yhat) C^T||_F^2"));
  }
}

using SuiteFn = void (*)(const VerifyOptions&, std::vector<PredicateResult>&);

SuiteFn Lookup(std::string_view name) {
  if (name == "facts") return FactsSuite;
  if (name == "lemma41") return ProjectionSuite;
  if (name == "thm42") return Thm42Suite;
  if (name == "thm43") return Thm43Suite;
  if (name == "thm44") return Thm44Suite;
  if (name == "thm31") return Thm31Suite;
  if (name == "appendixE") return HeavySeparationSuite;
  return nullptr;
}

}  // namespace

std::vector<std::string> VerifySuiteNames() {
  return {"facts", "lemma41", "thm42", "thm43", "thm44", "thm31", "appendixE"};
}

std::vector<PredicateResult> RunVerifySuite(std::string_view suite,
                                            const VerifyOptions& options) {
  std::vector<PredicateResult> out;
  if (suite == "all") {
    for (const std::string& name : VerifySuiteNames()) {
      std::vector<PredicateResult> part = RunVerifySuite(name, options);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  const SuiteFn fn = Lookup(suite);
  if (fn == nullptr) {
    throw Error(ErrorCode::kConfig, "unknown verify suite '" + std::string(suite) + "'");
  }
  try {
    fn(options, out);
  } catch (const Error& e) {
    out.push_back({std::string(suite), "suite_completed", 0.0, "==", "1", false,
                   std::string(ErrorCodeName(e.code())) + ": " + e.detail()});
  }
  return out;
}

std::string FormatPredicate(const PredicateResult& r) {
  std::string line = std::string(r.passed ? "PASS" : "FAIL") + " " + r.suite + "." + r.name +
                     " measured=" + Num(r.measured) + " " + r.relation + " " + r.threshold;
  if (!r.detail.empty()) line += " (" + r.detail + ")";
  return line;
}

}  // namespace fa_lab
