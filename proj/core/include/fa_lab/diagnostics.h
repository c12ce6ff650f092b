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

#ifndef FA_LAB_DIAGNOSTICS_H_
#define FA_LAB_DIAGNOSTICS_H_

// Alignment quantities along a trajectory. With G = Z(0)^T Z(0):
//
//   R   = (Y - Yhat) C^T                       n x r residual
//   A   = G^{-1} C W^T + W C^T G^{-1}          r x r alignment matrix
//   ell = ||R G^{-1/2}||_F^2                   alignment loss
//
// G = I recovers A = C W^T + W C^T and ell = ||R||_F^2.

#include <optional>
#include <vector>

#include "fa_lab/factor_state.h"
#include "fa_lab/numerics.h"

namespace fa_lab {

// Precomputed inverse and inverse square root of a positive definite Gram
// matrix.
struct GramWeighting {
  Matrix gram;
  Matrix inverse;
  Matrix inverse_sqrt;

  // Throws kNotPositiveDefinite per InverseSqrtPd.
  static GramWeighting From(const Matrix& gram);
  static GramWeighting Identity(Eigen::Index r);
};

struct AlignmentSnapshot {
  Matrix r;
  Matrix a;
  double ell = 0.0;
  double min_eig_a = 0.0;
  // R_i^T A R_i / ||R_i||^2 per row; unset for zero rows.
  std::vector<std::optional<double>> rayleigh_rows;
};

Matrix ResidualMatrix(const FactorState& state, const Matrix& y, const Matrix& c);

Matrix AlignmentMatrix(const Matrix& w, const Matrix& c, const GramWeighting& g);

AlignmentSnapshot Snapshot(const FactorState& state, const Matrix& y,
                           const Matrix& c, const GramWeighting& g);
AlignmentSnapshot Snapshot(const FactorState& state, const Matrix& y,
                           const Matrix& c, const Matrix& ztz0);

// Flow-level d ell / dt = -Tr(R A R^T) evaluated at a snapshot.
double LossDerivative(const AlignmentSnapshot& snap);

// (ell_next - ell) / eta.
double DiscreteLossDerivative(const AlignmentSnapshot& snap,
                              const AlignmentSnapshot& snap_next, double eta);

// x^T (A_next - A) x / eta.
double AlignmentGrowth(const AlignmentSnapshot& snap,
                       const AlignmentSnapshot& snap_next, const Vector& x,
                       double eta);

// Flow-level FA* rate x^T (dA/dt) x = 2 ||R G^{-1} x||^2.
double AlignmentGrowthRate(const AlignmentSnapshot& snap, const Vector& x,
                           const GramWeighting& g);

struct ResidualSplit {
  double norm_le_sq = 0.0;
  double norm_gt_sq = 0.0;
};

// Partitions the rows of R by Rayleigh quotient against A. Zero rows count
// toward the <= k bucket.
ResidualSplit SplitResidual(const AlignmentSnapshot& snap, double k);

// Tr(V) with V = 1/2 (C W^T W C^T - C Y^T Z - Z^T Y C^T).
double TracePotential(const FactorState& state, const Matrix& y, const Matrix& c);

// dA/dt under FA, A = C W^T + W C^T: C E^T Z + Z^T E C^T with E = Y - Yhat.
Matrix FaAlignmentFirstDerivative(const FactorState& state, const Matrix& y,
                                  const Matrix& c);

// d^2A/dt^2 under FA:
//   2 R^T R - Z^T E C^T W C^T - C W^T C E^T Z - Z^T Z Z^T E C^T - C E^T Z Z^T Z
// The third term is the transpose of the second.
Matrix FaAlignmentSecondDerivative(const FactorState& state, const Matrix& y,
                                   const Matrix& c);

}  // namespace fa_lab

#endif  // FA_LAB_DIAGNOSTICS_H_
