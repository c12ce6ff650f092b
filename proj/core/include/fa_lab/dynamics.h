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

#ifndef FA_LAB_DYNAMICS_H_
#define FA_LAB_DYNAMICS_H_

// Forward-Euler integrators for the three learning flows on
// min ||Z W - Y||_F^2:
//
//   GD   dZ/dt = (Y - Yhat) W^T     dW/dt = Z^T (Y - Yhat)
//   FA   dZ/dt = (Y - Yhat) C^T     dW/dt = Z^T (Y - Yhat)
//   FA*  dZ/dt = (Y - Yhat) C^T     W = (Z^T Z)^{-1} Z^T Y
//
// Each step uses increments computed from the pre-step state. A discrete
// trajectory tracks the flow to O(eta); identities that hold exactly along
// the flow (Z^T Z conserved under FA*, for instance) hold here only up to
// that order.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fa_lab/error.h"
#include "fa_lab/factor_state.h"
#include "fa_lab/numerics.h"
#include "fa_lab/problem.h"

namespace fa_lab {

enum class Rule { kGd, kFa, kFaStar };

std::string_view RuleName(Rule rule);  // "GD", "FA", "FA_STAR"
Rule ParseRule(std::string_view name);

struct TrainerConfig {
  Rule rule = Rule::kGd;
  double eta = 0.1;
  // W learning rate for FA; defaults to eta. Ignored by GD and FA*.
  std::optional<double> eta_w;
  long max_steps = 1000;
  long record_stride = 1;
  // Stop once the rule's residual_sq falls to this value; 0 disables.
  double stop_residual = 0.0;
  std::uint64_t seed = 0;
  // Optional r x k matrix of unit directions x; each record then carries
  // x^T A x for every column.
  Matrix tracked_directions;

  void Validate() const;
};

struct TrajectoryRecord {
  long step = 0;
  double t = 0.0;
  double error = 0.0;        // ||Z W - Y||_F^2
  double residual_sq = 0.0;  // ||(Y - Yhat) C^T||_F^2, or ||grad||_F^2 for GD
  std::optional<double> align_loss;
  std::optional<double> min_eig_a;
  std::optional<double> trace_potential;  // FA only
  std::vector<double> tracks;
};

struct RunResult {
  std::vector<TrajectoryRecord> records;
  FactorState final_state;
  bool stopped_on_residual = false;
};

// Thrown by Run when a step fails; carries the trajectory recorded so far
// (including the last good state as its final record).
class RunFailure : public Error {
 public:
  RunFailure(const Error& cause, RunResult partial)
      : Error(cause), partial_(std::move(partial)) {}
  const RunResult& partial() const { return partial_; }

 private:
  RunResult partial_;
};

FactorState GdStep(const FactorState& state, const Matrix& y, double eta);

FactorState FaStep(const FactorState& state, const Matrix& y, const Matrix& c,
                   double eta_z, double eta_w);

FactorState FaStarStep(const FactorState& state, const Matrix& y,
                       const Matrix& c, double eta);

// ||(Y - Yhat) C^T||_F^2 for FA and FA*, ||grad of 1/2||ZW - Y||^2||_F^2
// for GD.
double RuleResidualSq(Rule rule, const FactorState& state, const Matrix& y,
                      const Matrix* c);

// Iterates the configured rule. Records step 0, every record_stride steps,
// and the final step. The Gram-weighted diagnostics use G = Z(0)^T Z(0)
// and are left unset when G is singular or no feedback matrix is given.
RunResult Run(const TargetMatrix& problem, const FactorState& init,
              const FeedbackMatrix* feedback, const TrainerConfig& config);

// Runs the two-layer linear network update with O = X Y next to the
// factorization update from the same start and returns the largest
// ||state_nn - state_fac||_F seen over `steps` steps. `training_error_gap`,
// if given, receives max | ||X Z W - O||_F^2 - ||Z W - Y||_F^2 |.
double NnEquivalenceCheck(const Matrix& x, const TargetMatrix& target,
                          const FactorState& init, const FeedbackMatrix* feedback,
                          Rule rule, double eta, long steps,
                          double* training_error_gap = nullptr);

}  // namespace fa_lab

#endif  // FA_LAB_DYNAMICS_H_
