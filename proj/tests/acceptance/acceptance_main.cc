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

// Acceptance run: one PASS/FAIL line per criterion. Scenario data comes from
// the library; every threshold comparison and every reference value is
// computed here, from the raw draws, without the library's own oracles.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fa_lab/dynamics.h"
#include "fa_lab/error.h"
#include "fa_lab/experiments.h"
#include "fa_lab/numerics.h"
#include "fa_lab/problem.h"
#include "fa_lab/rng.h"
#include "fa_lab/stationary.h"

namespace {

using fa_lab::FactorState;
using fa_lab::Matrix;
using fa_lab::MetricsRow;
using fa_lab::MetricsTable;
using fa_lab::ScenarioData;
using fa_lab::TargetMatrix;
using fa_lab::Vector;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string Precise(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8g", v);
  return buf;
}

class Detail {
 public:
  template <typename T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  Detail& operator<<(double v) {
    os_ << Num(v);
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

// P_A Y through the normal equations of A.
Matrix ProjectOnto(const Matrix& a, const Matrix& y) {
  const Matrix gram = a.transpose() * a;
  return a * gram.ldlt().solve(a.transpose() * y);
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

MetricsTable CellRows(const ScenarioData& data, const std::string& label, std::uint64_t seed) {
  MetricsTable rows;
  for (const MetricsRow& r : data.metrics) {
    if (r.rule == label && r.seed == seed) rows.push_back(r);
  }
  return rows;
}

bool Failed(const ScenarioData& data, const std::string& label, std::uint64_t seed) {
  for (const auto& f : data.failures) {
    if (f.label == label && f.seed == seed) return true;
  }
  return false;
}

double FinalError(const ScenarioData& data, const std::string& label, std::uint64_t seed) {
  const MetricsTable rows = CellRows(data, label, seed);
  if (rows.empty() || Failed(data, label, seed)) return std::nan("");
  return rows.back().error;
}

ScenarioData RunNamed(const std::string& name, double* seconds = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  const fa_lab::ScenarioSpec spec = fa_lab::Scenario(name);
  ScenarioData data = fa_lab::ExecuteScenario(spec);
  if (seconds != nullptr) *seconds = Seconds(start);
  return data;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// --- criteria ---------------------------------------------------------------

Outcome FullRankConvergence() {
  double seconds = 0.0;
  const ScenarioData data = RunNamed("fig2a", &seconds);
  const fa_lab::ScenarioSpec spec = fa_lab::Scenario("fig2a");
  const TargetMatrix target =
      fa_lab::MakeTarget(500, 500, fa_lab::FlatSpectrum(50, 1.0 / std::sqrt(50.0)), 42);
  bool ok = std::abs(target.y.norm() - 1.0) <= 1e-12 && seconds <= 120.0;
  Detail d;
  d << "||Y||_F=" << target.y.norm();
  for (const auto& cell : spec.cells) {
    const double e = FinalError(data, cell.label, spec.seeds[0]);
    ok = ok && e <= 1e-3;
    d << " " << cell.label << "=" << e << " (" << CellRows(data, cell.label, 42).back().step
      << " steps)";
  }
  d << " limit=1e-3 runtime=" << seconds << "s";
  return {ok, d.str()};
}

Outcome Separation() {
  Detail d;
  // GD optimum is the tail energy: 450 squared singular values of 1/900.
  const double optimum = 450.0 / 900.0;
  const double library_opt =
      fa_lab::OptimalRankRError(fa_lab::SeparationSpectrum(500, 50), 50);
  bool ok = std::abs(library_opt - optimum) <= 1e-12;
  d << "optimum=" << library_opt << " (|diff from 0.5|=" << std::abs(library_opt - optimum) << ")";

  // Full dynamics, 5 seeds.
  const fa_lab::ScenarioSpec dyn = fa_lab::Scenario("fig2b");
  const ScenarioData data = RunNamed("fig2b");
  std::map<std::string, int> hits;
  double gd_worst = 0.0;
  for (std::uint64_t seed : dyn.seeds) {
    gd_worst = std::max(gd_worst, FinalError(data, "GD", seed));
    for (const char* label : {"FA", "FA_STAR"}) {
      if (FinalError(data, label, seed) >= 0.70) ++hits[label];
    }
  }
  const int n_dyn = static_cast<int>(dyn.seeds.size());
  ok = ok && gd_worst <= 0.51 && hits["FA"] * 5 >= 4 * n_dyn && hits["FA_STAR"] * 5 >= 4 * n_dyn;
  d << " dynamics: GD max=" << gd_worst << " (<=0.51) FA>=0.70 in " << hits["FA"] << "/"
    << n_dyn << " FA*>=0.70 in " << hits["FA_STAR"] << "/" << n_dyn;

  // Closed form over 50 seeds, recomputed with a normal-equation projector
  // and compared with the library's trial values.
  const fa_lab::ScenarioSpec mc = fa_lab::Scenario("thm43");
  const ScenarioData trials = RunNamed("thm43");
  int mc_hits = 0;
  double worst_gap = 0.0;
  for (std::uint64_t seed : mc.seeds) {
    const TargetMatrix t = fa_lab::MakeTarget(500, 500, fa_lab::SeparationSpectrum(500, 50), seed);
    const Matrix c = fa_lab::MakeFeedback(50, 500, seed).c;
    const double err = (ProjectOnto(t.y * c.transpose(), t.y) - t.y).squaredNorm();
    if (err >= 0.70) ++mc_hits;
    for (const auto& row : trials.oracle) {
      if (row.seed == seed && row.quantity == "fa_error") {
        worst_gap = std::max(worst_gap, std::abs(row.value - err));
      }
    }
  }
  ok = ok && mc_hits >= 48 && worst_gap <= 1e-9;
  d << " closed form: FA>=0.70 in " << mc_hits << "/50 (need 48), library gap=" << worst_gap;
  return {ok, d.str()};
}

Outcome ProjectionEquivalence() {
  const int n = 40;
  bool ok = true;
  Detail d;
  for (int r : {3, 5, 10}) {
    const std::uint64_t seed = 42 + static_cast<std::uint64_t>(r);
    const TargetMatrix t = fa_lab::MakeTarget(n, n, fa_lab::FlatSpectrum(n, 1.0 / std::sqrt(n)), seed);
    const fa_lab::FeedbackMatrix fb = fa_lab::MakeFeedback(r, n, seed);
    const FactorState init = fa_lab::FaStarInit(n, r, t, seed, fa_lab::ZInit::Orthonormal());
    fa_lab::TrainerConfig config;
    config.rule = fa_lab::Rule::kFaStar;
    config.eta = 0.5;
    config.max_steps = 200000;
    config.record_stride = 1000;
    config.stop_residual = 1e-20;
    const fa_lab::RunResult run = fa_lab::Run(t, init, &fb, config);
    const Matrix a = t.y * fb.c.transpose();
    const Matrix predicted = ProjectOnto(a, t.y);
    const double gap = (run.final_state.yhat() - predicted).norm() / t.y.norm();
    const double direct = (t.y - predicted).squaredNorm();
    const double rel = std::abs(fa_lab::ProjectionError(t, a) - direct) / direct;
    ok = ok && gap <= 1e-3 && rel <= 1e-10;
    d << "r=" << r << ": yhat gap=" << gap << " formula rel=" << rel << "; ";
  }
  d << "limits 1e-3 ||Y||_F and 1e-10";
  return {ok, d.str()};
}

Outcome ExactRecovery() {
  const fa_lab::ScenarioSpec spec = fa_lab::Scenario("thm42");
  const ScenarioData data = RunNamed("thm42");
  bool ok = data.failures.empty();
  double worst_dyn = 0.0;
  double worst_pred = 0.0;
  for (std::uint64_t seed : spec.seeds) {
    for (const auto& cell : spec.cells) {
      const double e = FinalError(data, cell.label, seed);
      ok = ok && e <= 1e-4;
      worst_dyn = std::max(worst_dyn, e);
    }
    const TargetMatrix t =
        fa_lab::MakeTarget(30, 30, fa_lab::FlatSpectrum(8, 1.0 / std::sqrt(8.0)), seed);
    const Matrix c = fa_lab::MakeFeedback(8, 30, seed).c;
    worst_pred = std::max(worst_pred, (ProjectOnto(t.y * c.transpose(), t.y) - t.y).squaredNorm());
  }
  ok = ok && worst_pred <= 1e-12;
  Detail d;
  d << "dynamics max error=" << worst_dyn << " (<=1e-4) over " << spec.seeds.size()
    << " seeds x FA, FA*; predicted error max=" << worst_pred << " (<=1e-12)";
  return {ok, d.str()};
}

Outcome RankOneOverlap() {
  const auto start = std::chrono::steady_clock::now();
  const fa_lab::ScenarioSpec spec = fa_lab::Scenario("thm44");
  const ScenarioData data = RunNamed("thm44");
  const int n = 10000;
  const double eps = 0.5;
  int hits = 0;
  double worst_overlap = 0.0;
  double worst_ratio = 0.0;
  double worst_gap = 0.0;
  for (std::uint64_t seed : spec.seeds) {
    // Singular basis: Y = diag(1, eps, ..., eps), a = Y c.
    const Matrix c = fa_lab::MakeFeedback(1, n, seed).c;
    const double c0 = c(0, 0) * c(0, 0);
    const double tail = c.squaredNorm() - c0;
    const double a_sq = c0 + eps * eps * tail;
    const double overlap = std::sqrt(c0 / a_sq);
    const double captured = (c0 + std::pow(eps, 4) * tail) / a_sq;
    const double gd = eps * eps * (n - 1);
    const double ratio = (1.0 + gd - captured) / gd;
    if (overlap <= 0.08 && ratio <= 1.0008) ++hits;
    worst_overlap = std::max(worst_overlap, overlap);
    worst_ratio = std::max(worst_ratio, ratio);
    for (const auto& row : data.oracle) {
      if (row.seed != seed) continue;
      if (row.quantity == "overlap") worst_gap = std::max(worst_gap, std::abs(row.value - overlap));
      if (row.quantity == "error_ratio") worst_gap = std::max(worst_gap, std::abs(row.value - ratio));
    }
  }
  const double seconds = Seconds(start);
  Detail d;
  d << hits << "/" << spec.seeds.size() << " seeds within overlap<=0.08 and ratio<=1.0008 (need 18)"
    << " max overlap=" << worst_overlap << " max ratio=" << Precise(worst_ratio)
    << " library gap=" << worst_gap << " runtime=" << seconds << "s";
  return {hits >= 18 && worst_gap <= 1e-9, d.str()};
}

Outcome TimeBound() {
  const fa_lab::ScenarioSpec spec = fa_lab::Scenario("thm31bound");
  const ScenarioData data = RunNamed("thm31bound");
  int hits = 0;
  int settled = 0;
  double worst_final = 0.0;
  double worst_bound_gap = 0.0;
  Detail d;
  for (std::uint64_t seed : spec.seeds) {
    const TargetMatrix t =
        fa_lab::MakeTarget(20, 20, fa_lab::FlatSpectrum(20, 1.0 / std::sqrt(20.0)), seed);
    const Matrix c = fa_lab::MakeFeedback(5, 20, seed).c;
    const Matrix z0 = fa_lab::FaStarInit(20, 5, t, seed, fa_lab::ZInit::Orthonormal()).z();
    Eigen::JacobiSVD<Matrix> ys(t.y), cs(c), zs(z0);
    const double z_max = zs.singularValues()(0);
    const double z_min = zs.singularValues()(4);
    const double bound = (24.0 / 0.1) * ys.singularValues()(0) * cs.singularValues()(0) *
                         std::pow(z_max, 6) * std::sqrt(5.0 * 20.0) / std::pow(z_min, 5);
    for (const auto& row : data.oracle) {
      if (row.seed == seed && row.quantity == "time_bound") {
        worst_bound_gap = std::max(worst_bound_gap, std::abs(row.value - bound) / bound);
      }
    }
    double best = INFINITY;
    double best_t = 0.0;
    for (const MetricsRow& row : CellRows(data, "FA_STAR", seed)) {
      if (row.t <= bound && row.residual_sq < best) {
        best = row.residual_sq;
        best_t = row.t;
      }
    }
    if (best <= 0.1) ++hits;
    const MetricsTable long_rows = CellRows(data, "FA_STAR_4T", seed);
    const bool full_horizon = !long_rows.empty() && long_rows.back().t >= 4.0 * bound - 1e-2;
    const double final = long_rows.empty() ? INFINITY : long_rows.back().residual_sq;
    if (full_horizon && final <= 1e-6 && !Failed(data, "FA_STAR_4T", seed)) ++settled;
    worst_final = std::max(worst_final, final);
    d << "seed " << seed << ": T=" << bound << " hit " << best << " at t=" << best_t << "; ";
  }
  d << "hits " << hits << "/5, 4T final residual max=" << worst_final << " (" << settled
    << "/5 <= 1e-6), library T gap=" << worst_bound_gap;
  return {hits == 5 && settled == 5 && worst_bound_gap <= 1e-9, d.str()};
}

double MaxDrop(const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) worst = std::max(worst, v[i - 1] - v[i]);
  return worst;
}

Outcome FlowInvariants() {
  bool ok = true;
  Detail d;

  {  // Normal equations after every FA* step.
    const TargetMatrix t = fa_lab::MakeGaussianProductTarget(30, 30, 30, 7);
    const Matrix c = fa_lab::MakeFeedback(10, 30, 7).c;
    FactorState s = fa_lab::FaStarInit(30, 10, t, 7, fa_lab::ZInit::Orthonormal());
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      s = fa_lab::FaStarStep(s, t.y, c, 0.05);
      worst = std::max(worst, (s.z().transpose() * (t.y - s.z() * s.w())).norm() / t.y.norm());
    }
    ok = ok && worst <= 1e-8;
    d << "normal eq=" << worst << " (<=1e-8)";
  }

  {  // Gram drift halves with eta.
    const TargetMatrix t = fa_lab::MakeGaussianProductTarget(30, 30, 30, 8);
    const Matrix c = fa_lab::MakeFeedback(10, 30, 8).c;
    const FactorState init = fa_lab::FaStarInit(30, 10, t, 8, fa_lab::ZInit::Orthonormal());
    const Matrix g0 = init.z().transpose() * init.z();
    auto drift = [&](double eta) {
      FactorState s = init;
      for (long i = 0; i < std::lround(2.0 / eta); ++i) s = fa_lab::FaStarStep(s, t.y, c, eta);
      return (s.z().transpose() * s.z() - g0).norm();
    };
    const double ratio = drift(0.01) / drift(0.02);
    ok = ok && ratio >= 0.25 && ratio <= 0.75;
    d << "; gram drift ratio=" << ratio << " (in [0.25, 0.75])";
  }

  {  // Alignment tracks and min eigenvalue along the tracked run.
    const ScenarioData data = RunNamed("fig4");
    std::map<int, std::vector<double>> tracks;
    for (const auto& row : data.tracks) tracks[row.track].push_back(row.value);
    double track_drop = 0.0;
    for (const auto& [k, v] : tracks) track_drop = std::max(track_drop, MaxDrop(v));
    std::vector<double> eig;
    for (const MetricsRow& row : data.metrics) {
      if (row.min_eig_a) eig.push_back(*row.min_eig_a);
    }
    const double eig_drop = MaxDrop(eig);
    ok = ok && tracks.size() == 10 && !eig.empty() && track_drop <= 1e-6 && eig_drop <= 1e-6 &&
         data.failures.empty();
    d << "; fig4 (eta 0.02): " << tracks.size() << " track drop=" << track_drop
      << " min_eig drop=" << eig_drop << " (<=1e-6)";
  }

  {  // Trace potential on every FA run of fig5 and fig7.
    double worst = 0.0;
    std::size_t steps = 0;
    bool contiguous = true;
    for (const char* name : {"fig5", "fig7"}) {
      const ScenarioData data = RunNamed(name);
      for (const auto& cell : fa_lab::Scenario(name).cells) {
        if (cell.rule != fa_lab::Rule::kFa) continue;
        const MetricsTable rows = CellRows(data, cell.label, 42);
        for (std::size_t i = 1; i < rows.size(); ++i) {
          contiguous = contiguous && rows[i].step == rows[i - 1].step + 1;
          worst = std::max(worst, *rows[i].trace_potential - *rows[i - 1].trace_potential);
        }
        steps += rows.size() - 1;
      }
    }
    ok = ok && contiguous && steps > 0 && worst <= 1e-8;
    d << "; Tr(V) max step rise=" << worst << " over " << steps << " FA steps (<=1e-8)";
  }

  {  // GD step against central differences.
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      fa_lab::Rng rng(100 + trial);
      const Matrix y = rng.Gaussian(6, 5);
      const FactorState s(rng.Gaussian(6, 3), rng.Gaussian(3, 5));
      const double eta = 1e-3;
      const FactorState next = fa_lab::GdStep(s, y, eta);
      auto loss = [&](const Matrix& z, const Matrix& w) { return 0.5 * (z * w - y).squaredNorm(); };
      const double h = 1e-6;
      double num = 0.0, den = 0.0;
      for (Eigen::Index i = 0; i < s.z().size(); ++i) {
        Matrix zp = s.z(), zm = s.z();
        zp(i) += h;
        zm(i) -= h;
        const double g = (loss(zp, s.w()) - loss(zm, s.w())) / (2 * h);
        num += std::pow((next.z()(i) - s.z()(i)) / eta + g, 2);
        den += g * g;
      }
      for (Eigen::Index i = 0; i < s.w().size(); ++i) {
        Matrix wp = s.w(), wm = s.w();
        wp(i) += h;
        wm(i) -= h;
        const double g = (loss(s.z(), wp) - loss(s.z(), wm)) / (2 * h);
        num += std::pow((next.w()(i) - s.w()(i)) / eta + g, 2);
        den += g * g;
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    ok = ok && worst <= 1e-5;
    d << "; GD vs finite differences rel=" << worst << " (<=1e-5)";
  }
  return {ok, d.str()};
}

int SignChanges(const MetricsTable& rows) {
  int changes = 0;
  int last = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double diff = rows[i].residual_sq - rows[i - 1].residual_sq;
    const int s = (diff > 0) - (diff < 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Direction runs of residual_sq, ignoring moves within the slack.
std::string Phases(const MetricsTable& rows, double slack) {
  std::string phases;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double diff = rows[i].residual_sq - rows[i - 1].residual_sq;
    const char dir = diff > slack ? 'u' : diff < -slack ? 'd' : 0;
    if (dir != 0 && (phases.empty() || phases.back() != dir)) phases += dir;
  }
  return phases;
}

Outcome NonMonotoneResidual() {
  const ScenarioData b = RunNamed("fig3b");
  const ScenarioData a = RunNamed("fig3a");
  const int changes = SignChanges(CellRows(b, "FA_STAR", 42));
  const std::string phases = Phases(CellRows(a, "FA_STAR", 42), 1e-8);
  Detail d;
  d << "fig3b sign changes=" << changes << " (>=3); fig3a phases='" << phases
    << "' (want 'ud' at slack 1e-8)";
  return {changes >= 3 && phases == "ud" && a.failures.empty() && b.failures.empty(), d.str()};
}

Outcome NetworkEquivalence() {
  const int n = 12, m = 9, r = 4;
  const TargetMatrix t = fa_lab::MakeGaussianProductTarget(n, m, 6, 3);
  const fa_lab::FeedbackMatrix fb = fa_lab::MakeFeedback(r, m, 3);
  const Matrix& c = fb.c;
  const Matrix x = fa_lab::Orthonormalize(fa_lab::Rng(3).Gaussian(30, n));
  const Matrix o = x * t.y;
  const FactorState gauss = fa_lab::GaussianInit(n, r, m, 0.1, 3);
  const double eta = 0.1;
  bool ok = true;
  Detail d;
  for (fa_lab::Rule rule : {fa_lab::Rule::kGd, fa_lab::Rule::kFa, fa_lab::Rule::kFaStar}) {
    const bool star = rule == fa_lab::Rule::kFaStar;
    FactorState fac = star ? fa_lab::OptimalWInit(gauss.z(), t) : gauss;
    Matrix z = fac.z(), w = fac.w();
    double dev = 0.0;
    for (int step = 0; step < 100; ++step) {
      // Network side: inputs X, targets O = X Y, backward signal X^T (O - X Z W).
      const Matrix back = x.transpose() * (o - x * z * w);
      const Matrix dz = back * (rule == fa_lab::Rule::kGd ? w : c).transpose();
      const Matrix dw = z.transpose() * back;
      z += eta * dz;
      if (star) {
        const Matrix xz = x * z;
        w = (xz.transpose() * xz).ldlt().solve(xz.transpose() * o);
      } else {
        w += eta * dw;
      }
      switch (rule) {
        case fa_lab::Rule::kGd: fac = fa_lab::GdStep(fac, t.y, eta); break;
        case fa_lab::Rule::kFa: fac = fa_lab::FaStep(fac, t.y, c, eta, eta); break;
        case fa_lab::Rule::kFaStar: fac = fa_lab::FaStarStep(fac, t.y, c, eta); break;
      }
      dev = std::max(dev, std::sqrt((z - fac.z()).squaredNorm() + (w - fac.w()).squaredNorm()));
    }
    const double library =
        fa_lab::NnEquivalenceCheck(x, t, star ? fa_lab::OptimalWInit(gauss.z(), t) : gauss,
                                   rule == fa_lab::Rule::kGd ? nullptr : &fb, rule, eta, 100);
    ok = ok && dev <= 1e-10 && library <= 1e-10;
    d << fa_lab::RuleName(rule) << ": " << dev << " (library " << library << "); ";
  }
  d << "limit 1e-10 over 100 steps";
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"fig2a: GD, FA and FA* reach error <= 1e-3 when r = rank(Y)", FullRankConvergence},
      {"fig2b/thm43: FA stationary error separated from the GD optimum", Separation},
      {"lemma41: converged FA* equals the projection of Y onto span(YC^T)",
       ProjectionEquivalence},
      {"thm42: exact recovery at r = rank(Y)", ExactRecovery},
      {"thm44: rank-1 FA factor nearly orthogonal to the top singular vector", RankOneOverlap},
      {"thm31bound: FA* residual below eps before the time bound, settled by 4T", TimeBound},
      {"flow invariants: normal equations, Gram drift, alignment, Tr(V), GD gradient",
       FlowInvariants},
      {"non-monotone residual: fig3b oscillates, fig3a rises once then falls",
       NonMonotoneResidual},
      {"linear network with orthonormal inputs matches the factorization", NetworkEquivalence},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << " ["
              << Num(Seconds(start)) << "s]" << std::endl;
  }
  std::cout << (failures == 0 ? "acceptance: PASS" : "acceptance: FAIL") << " ("
            << criteria.size() - failures << "/" << criteria.size() << ")" << std::endl;
  return failures == 0 ? 0 : 1;
}
