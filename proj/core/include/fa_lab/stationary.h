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

#ifndef FA_LAB_STATIONARY_H_
#define FA_LAB_STATIONARY_H_

// Closed-form predictions for the stationary points of feedback alignment.
//
// At any FA/FA* stationary point with Gaussian feedback C, Yhat is almost
// surely the projection of Y onto the column span of A = Y C^T, so the
// error is sum_i sigma_i^2 (1 - ||P_A u_i||^2). Gradient flow instead
// reaches the best rank-r error sum_{i>r} sigma_i^2.

#include <cstdint>
#include <optional>

#include "fa_lab/factor_state.h"
#include "fa_lab/numerics.h"
#include "fa_lab/problem.h"

namespace fa_lab {

struct StationaryReport {
  Matrix predicted_yhat;
  double predicted_error = 0.0;
  double optimal_error = 0.0;
  std::optional<double> achieved_error;
  std::optional<double> overlap;  // r = 1 only
};

// P_{Y C^T} Y. Throws kZeroFeedbackImage when Y C^T = 0.
Matrix PredictedSolution(const TargetMatrix& target, const FeedbackMatrix& feedback);

// sum_i sigma_i^2 (1 - ||P_A u_i||^2) from the stored SVD of Y.
double ProjectionError(const TargetMatrix& target, const Matrix& a);

// sum_{i > r} sigma_i^2.
double OptimalRankRError(const TargetMatrix& target, int r);
double OptimalRankRError(const SpectrumSpec& spectrum, int r);

// Prediction for (target, feedback); `state`, if given, fills
// achieved_error, and r = 1 fills the overlap between P_{YC^T} and u_1.
StationaryReport MakeStationaryReport(const TargetMatrix& target,
                                      const FeedbackMatrix& feedback,
                                      const FactorState* state = nullptr);

struct SeparationTrial {
  double fa_error = 0.0;
  double gd_error = 0.0;
};

// n x n target with SeparationSpectrum(n, r) (MakeTarget seed `seed`),
// feedback MakeFeedback(r, n, seed).
SeparationTrial RunSeparationTrial(int n, int r, std::uint64_t seed);

// Same quantities computed in the singular basis of Y (U = V = I), where
// A = diag(sigma) C^T. The error and overlap statistics are invariant
// under the choice of singular vectors, so this path scales to n far beyond
// what a dense n x n target allows. Feedback draw label "feedback.c".
SeparationTrial RunSeparationTrialSpectral(int n, int r, std::uint64_t seed);

struct OverlapTrial {
  double overlap = 0.0;      // |<A / ||A||, u_1>|
  double error_ratio = 0.0;  // ProjectionError / OptimalRankRError, r = 1
  double fa_error = 0.0;
  double gd_error = 0.0;
};

// Rank-1 construction with RepSpectrum(n, eps), evaluated in the singular
// basis (see RunSeparationTrialSpectral). m = n.
OverlapTrial RepresentationOverlap(int n, double eps, std::uint64_t seed);

// Same statistics for an explicit target and 1 x m feedback.
OverlapTrial RepresentationOverlap(const TargetMatrix& target,
                                   const FeedbackMatrix& feedback);

// (24 / eps) sigma_1(Y) sigma_1(C) sigma_1(Z0)^6 sqrt(r min(m, n)) /
// sigma_r(Z0)^5. Throws kRankDeficient if sigma_r(Z0) is numerically zero.
double ConvergenceTimeBound(const TargetMatrix& target, const FeedbackMatrix& feedback,
                            const Matrix& z0, double eps);

// ||(Y - Yhat) C^T||_F <= tol ||Y||_F ||C||_F and
// ||Z^T (Y - Yhat)||_F <= tol ||Z||_F ||Y||_F.
bool StationarityCheck(const FactorState& state, const Matrix& y, const Matrix& c,
                       double tol);

}  // namespace fa_lab

#endif  // FA_LAB_STATIONARY_H_
