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

#ifndef FA_LAB_NUMERICS_H_
#define FA_LAB_NUMERICS_H_

// Dense linear-algebra services shared by the rest of the library. Matrices
// are plain Eigen column-major dense matrices; vectors are one-column
// matrices where the distinction does not matter.

#include <Eigen/Dense>

namespace fa_lab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultAtol = 1e-12;

// Thin SVD M = U diag(singular_values) V^T with singular values sorted
// nonincreasing.
struct SvdFactors {
  Matrix u;
  Vector singular_values;
  Matrix v;

  Matrix Reconstruct() const;
};

// |a - b| <= atol + rtol * |b|.
bool ApproxEqual(double a, double b, double rtol, double atol = kDefaultAtol);

// Throws kNonFinite if any entry is NaN or infinite.
void RequireFinite(const Matrix& m, const char* what);

// Numerical-rank threshold: sigma <= RankTolerance(rows, cols, sigma_max)
// counts as zero.
double RankTolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max);

// argmin_W ||Z W - Y||_F for a full-column-rank Z, via Householder QR.
// Throws kRankDeficient when Z is numerically rank deficient.
Matrix LeastSquares(const Matrix& z, const Matrix& y);

// Orthogonal projector onto the column span of `a`. The zero matrix maps to
// the zero projector.
Matrix ColumnProjector(const Matrix& a);

// Orthonormal basis of the column span of `a` (rank-revealing; may have
// fewer columns than `a`).
Matrix ColumnBasis(const Matrix& a);

SvdFactors Svd(const Matrix& m);

// Singular values only, nonincreasing.
Vector SingularValues(const Matrix& m);

// Smallest eigenvalue of a symmetric matrix. The input is symmetrized before
// solving; throws kNotSymmetric if ||S - S^T||_F > 1e-8 ||S||_F.
double SymEigMin(const Matrix& s);

// Q with Q^T Q = I spanning the same columns as `m`. Column signs are fixed
// so that the triangular factor has a positive diagonal.
Matrix Orthonormalize(const Matrix& m);

// Symmetric inverse square root of a positive definite matrix. Eigenvalues
// below 1e-14 * lambda_max raise kNotPositiveDefinite.
Matrix InverseSqrtPd(const Matrix& g);

}  // namespace fa_lab

#endif  // FA_LAB_NUMERICS_H_
