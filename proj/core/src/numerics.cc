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

#include "fa_lab/numerics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fa_lab/error.h"

namespace fa_lab {
namespace {

std::string ShapeOf(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix SvdFactors::Reconstruct() const {
  return u * singular_values.asDiagonal() * v.transpose();
}

bool ApproxEqual(double a, double b, double rtol, double atol) {
  return std::abs(a - b) <= atol + rtol * std::abs(b);
}

void RequireFinite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kNonFinite, std::string(what) + " has non-finite entries");
  }
}

double RankTolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max) {
  return 1e-10 * static_cast<double>(std::max(rows, cols)) * sigma_max;
}

Matrix LeastSquares(const Matrix& z, const Matrix& y) {
  if (z.rows() != y.rows()) {
    throw Error(ErrorCode::kInvalidShape,
                "least squares with Z " + ShapeOf(z) + " and Y " + ShapeOf(y));
  }
  const Eigen::Index n = z.rows();
  const Eigen::Index r = z.cols();
  if (r == 0 || n < r) {
    throw Error(ErrorCode::kRankDeficient,
                "Z " + ShapeOf(z) + " cannot have full column rank");
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  // Z and its triangular factor share singular values.
  const Matrix tri =
      qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const Vector sigma = SingularValues(tri);
  const double sigma_max = sigma(0);
  const double sigma_min = sigma(r - 1);
  if (!(sigma_max > 0.0) || sigma_min <= RankTolerance(n, r, sigma_max)) {
    throw Error(ErrorCode::kRankDeficient,
                "sigma_min(Z) = " + std::to_string(sigma_min) +
                    ", sigma_max(Z) = " + std::to_string(sigma_max));
  }
  return qr.solve(y);
}

Matrix ColumnBasis(const Matrix& a) {
  if (a.size() == 0) return Matrix(a.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure, "SVD of " + ShapeOf(a));
  }
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  if (!(sigma_max > 0.0)) return Matrix(a.rows(), 0);
  const double tol = RankTolerance(a.rows(), a.cols(), sigma_max);
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol) ++rank;
  return svd.matrixU().leftCols(rank);
}

Matrix ColumnProjector(const Matrix& a) {
  const Matrix basis = ColumnBasis(a);
  return basis * basis.transpose();
}

SvdFactors Svd(const Matrix& m) {
  RequireFinite(m, "SVD input");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure, "SVD of " + ShapeOf(m));
  }
  return SvdFactors{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Vector SingularValues(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure, "SVD of " + ShapeOf(m));
  }
  return svd.singularValues();
}

double SymEigMin(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw Error(ErrorCode::kInvalidShape, "eigenvalues of " + ShapeOf(s));
  }
  const double asym = (s - s.transpose()).norm();
  if (asym > 1e-8 * s.norm()) {
    throw Error(ErrorCode::kNotSymmetric,
                "||S - S^T||_F = " + std::to_string(asym));
  }
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure, "eigenvalues of " + ShapeOf(s));
  }
  return eig.eigenvalues()(0);
}

Matrix Orthonormalize(const Matrix& m) {
  const Eigen::Index n = m.rows();
  const Eigen::Index r = m.cols();
  if (r == 0 || n < r) {
    throw Error(ErrorCode::kRankDeficient,
                "cannot orthonormalize " + ShapeOf(m));
  }
  Eigen::HouseholderQR<Matrix> qr(m);
  const Matrix tri =
      qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const Vector sigma = SingularValues(tri);
  if (!(sigma(0) > 0.0) || sigma(r - 1) <= RankTolerance(n, r, sigma(0))) {
    throw Error(ErrorCode::kRankDeficient,
                "orthonormalize: sigma_min = " + std::to_string(sigma(r - 1)));
  }
  Matrix q = qr.householderQ() * Matrix::Identity(n, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    if (tri(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Matrix InverseSqrtPd(const Matrix& g) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    throw Error(ErrorCode::kInvalidShape, "inverse square root of " + ShapeOf(g));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()));
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure, "eigendecomposition of Gram matrix");
  }
  const Vector& lambda = eig.eigenvalues();
  const double lambda_max = lambda(lambda.size() - 1);
  if (!(lambda_max > 0.0) || lambda(0) <= 1e-14 * lambda_max) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "lambda_min = " + std::to_string(lambda(0)));
  }
  const Vector inv_sqrt = lambda.array().rsqrt();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace fa_lab
