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

#include "fa_lab/dynamics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fa_lab/diagnostics.h"

namespace fa_lab {
namespace {

void CheckFinite(const Matrix& z, const Matrix& w) {
  if (!z.allFinite() || !w.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "factor entries overflowed; step size too large");
  }
}

void CheckTarget(const FactorState& state, const Matrix& y) {
  if (y.rows() != state.n() || y.cols() != state.m()) {
    throw Error(ErrorCode::kInvalidShape, "target shape does not match the factors");
  }
}

void CheckFeedback(const FactorState& state, const Matrix& c) {
  if (c.rows() != state.r() || c.cols() != state.m()) {
    throw Error(ErrorCode::kInvalidShape,
                "feedback must be " + std::to_string(state.r()) + "x" +
                    std::to_string(state.m()));
  }
}

FactorState Advance(Rule rule, const FactorState& state, const Matrix& y,
                    const Matrix* c, const TrainerConfig& config) {
  switch (rule) {
    case Rule::kGd:
      return GdStep(state, y, config.eta);
    case Rule::kFa:
      return FaStep(state, y, *c, config.eta, config.eta_w.value_or(config.eta));
    case Rule::kFaStar:
      return FaStarStep(state, y, *c, config.eta);
  }
  return state;
}

// Per-run context for the recorded diagnostics.
struct Recorder {
  const TargetMatrix& problem;
  const Matrix* c;
  const TrainerConfig& config;
  std::optional<GramWeighting> gram;

  TrajectoryRecord Make(long step, const FactorState& state, double residual_sq) const {
    TrajectoryRecord rec;
    rec.step = step;
    rec.t = static_cast<double>(step) * config.eta;
    rec.error = (state.yhat() - problem.y).squaredNorm();
    rec.residual_sq = residual_sq;
    if (c != nullptr && gram) {
      const Matrix r = ResidualMatrix(state, problem.y, *c);
      const Matrix a = AlignmentMatrix(state.w(), *c, *gram);
      rec.align_loss = (r * gram->inverse_sqrt).squaredNorm();
      rec.min_eig_a = SymEigMin(a);
      const Matrix& dirs = config.tracked_directions;
      for (Eigen::Index j = 0; j < dirs.cols(); ++j) {
        rec.tracks.push_back(dirs.col(j).dot(a * dirs.col(j)));
      }
    }
    if (c != nullptr && config.rule == Rule::kFa) {
      rec.trace_potential = TracePotential(state, problem.y, *c);
    }
    return rec;
  }
};

}  // namespace

std::string_view RuleName(Rule rule) {
  switch (rule) {
    case Rule::kGd: return "GD";
    case Rule::kFa: return "FA";
    case Rule::kFaStar: return "FA_STAR";
  }
  return "?";
}

Rule ParseRule(std::string_view name) {
  if (name == "GD") return Rule::kGd;
  if (name == "FA") return Rule::kFa;
  if (name == "FA_STAR" || name == "FA*") return Rule::kFaStar;
  throw Error(ErrorCode::kConfig, "unknown rule '" + std::string(name) +
                                      "' (expected GD, FA or FA_STAR)");
}

void TrainerConfig::Validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::kConfig, "eta must be positive");
  }
  if (eta_w && (!(*eta_w > 0.0) || !std::isfinite(*eta_w))) {
    throw Error(ErrorCode::kConfig, "eta_w must be positive");
  }
  if (max_steps < 0) throw Error(ErrorCode::kConfig, "max_steps must be >= 0");
  if (record_stride < 1) throw Error(ErrorCode::kConfig, "record_stride must be >= 1");
  if (!(stop_residual >= 0.0)) {
    throw Error(ErrorCode::kConfig, "stop_residual must be >= 0");
  }
}

FactorState GdStep(const FactorState& state, const Matrix& y, double eta) {
  CheckTarget(state, y);
  const Matrix e = y - state.yhat();
  Matrix z = state.z() + eta * (e * state.w().transpose());
  Matrix w = state.w() + eta * (state.z().transpose() * e);
  CheckFinite(z, w);
  return FactorState(std::move(z), std::move(w));
}

FactorState FaStep(const FactorState& state, const Matrix& y, const Matrix& c,
                   double eta_z, double eta_w) {
  CheckTarget(state, y);
  CheckFeedback(state, c);
  const Matrix e = y - state.yhat();
  Matrix z = state.z() + eta_z * (e * c.transpose());
  Matrix w = state.w() + eta_w * (state.z().transpose() * e);
  CheckFinite(z, w);
  return FactorState(std::move(z), std::move(w));
}

FactorState FaStarStep(const FactorState& state, const Matrix& y,
                       const Matrix& c, double eta) {
  CheckTarget(state, y);
  CheckFeedback(state, c);
  const Matrix r = (y - state.yhat()) * c.transpose();
  // W is a function of Z alone; an unchanged Z keeps the current W.
  if ((r.array() == 0.0).all()) return state;
  Matrix z = state.z() + eta * r;
  if (!z.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "factor entries overflowed; step size too large");
  }
  Matrix w = LeastSquares(z, y);
  CheckFinite(z, w);
  return FactorState(std::move(z), std::move(w));
}

double RuleResidualSq(Rule rule, const FactorState& state, const Matrix& y,
                      const Matrix* c) {
  const Matrix e = y - state.yhat();
  if (rule == Rule::kGd) {
    return (e * state.w().transpose()).squaredNorm() +
           (state.z().transpose() * e).squaredNorm();
  }
  if (c == nullptr) throw Error(ErrorCode::kInvalidShape, "FA residual needs C");
  return (e * c->transpose()).squaredNorm();
}

RunResult Run(const TargetMatrix& problem, const FactorState& init,
              const FeedbackMatrix* feedback, const TrainerConfig& config) {
  config.Validate();
  CheckTarget(init, problem.y);
  const Matrix* c = feedback != nullptr ? &feedback->c : nullptr;
  if (config.rule != Rule::kGd && c == nullptr) {
    throw Error(ErrorCode::kInvalidShape,
                std::string(RuleName(config.rule)) + " needs a feedback matrix");
  }
  if (c != nullptr) CheckFeedback(init, *c);
  if (config.tracked_directions.size() > 0 &&
      config.tracked_directions.rows() != init.r()) {
    throw Error(ErrorCode::kInvalidShape, "tracked directions must have r rows");
  }

  Recorder recorder{problem, c, config, std::nullopt};
  try {
    recorder.gram = GramWeighting::From(init.z().transpose() * init.z());
  } catch (const Error&) {
    // Singular Z(0)^T Z(0): Gram-weighted diagnostics stay unset.
  }

  RunResult result;
  FactorState state = init;
  for (long step = 0;; ++step) {
    const double residual = RuleResidualSq(config.rule, state, problem.y, c);
    const bool stop = config.stop_residual > 0.0 && residual <= config.stop_residual;
    const bool last = stop || step >= config.max_steps;
    if (last || step % config.record_stride == 0) {
      result.records.push_back(recorder.Make(step, state, residual));
    }
    if (last) {
      result.stopped_on_residual = stop;
      break;
    }
    try {
      state = Advance(config.rule, state, problem.y, c, config);
    } catch (const Error& e) {
      if (result.records.back().step != step) {
        result.records.push_back(recorder.Make(step, state, residual));
      }
      result.final_state = state;
      throw RunFailure(e.WithStep(step + 1), std::move(result));
    }
  }
  result.final_state = std::move(state);
  return result;
}

double NnEquivalenceCheck(const Matrix& x, const TargetMatrix& target,
                          const FactorState& init, const FeedbackMatrix* feedback,
                          Rule rule, double eta, long steps,
                          double* training_error_gap) {
  const Eigen::Index n = target.n();
  if (x.cols() != n) {
    throw Error(ErrorCode::kInvalidShape, "X must have n columns");
  }
  if ((x.transpose() * x - Matrix::Identity(n, n)).norm() > 1e-8) {
    throw Error(ErrorCode::kNotIsotropic, "||X^T X - I||_F exceeds 1e-8");
  }
  CheckTarget(init, target.y);
  const Matrix* c = feedback != nullptr ? &feedback->c : nullptr;
  if (rule != Rule::kGd && c == nullptr) {
    throw Error(ErrorCode::kInvalidShape, "FA rules need a feedback matrix");
  }
  const Matrix& y = target.y;
  const Matrix o = x * y;

  FactorState fac = init;
  FactorState nn = init;
  double max_dev = 0.0;
  double max_gap = 0.0;
  for (long step = 0;; ++step) {
    const double dev = std::sqrt((nn.z() - fac.z()).squaredNorm() +
                                 (nn.w() - fac.w()).squaredNorm());
    max_dev = std::max(max_dev, dev);
    const double nn_error = (x * nn.yhat() - o).squaredNorm();
    max_gap = std::max(max_gap, std::abs(nn_error - (nn.yhat() - y).squaredNorm()));
    if (step >= steps) break;

    TrainerConfig config;
    config.rule = rule;
    config.eta = eta;
    fac = Advance(rule, fac, y, c, config);

    // Back-propagated error of the network, X^T (O - X Z W).
    const Matrix back = x.transpose() * (o - x * nn.yhat());
    switch (rule) {
      case Rule::kGd:
        nn = FactorState(nn.z() + eta * (back * nn.w().transpose()),
                         nn.w() + eta * (nn.z().transpose() * back));
        break;
      case Rule::kFa:
        nn = FactorState(nn.z() + eta * (back * c->transpose()),
                         nn.w() + eta * (nn.z().transpose() * back));
        break;
      case Rule::kFaStar: {
        Matrix z = nn.z() + eta * (back * c->transpose());
        Matrix w = LeastSquares(x * z, o);
        nn = FactorState(std::move(z), std::move(w));
        break;
      }
    }
    CheckFinite(nn.z(), nn.w());
  }
  if (training_error_gap != nullptr) *training_error_gap = max_gap;
  return max_dev;
}

}  // namespace fa_lab
