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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "fa_lab/error.h"
#include "fa_lab/rng.h"

namespace fa_lab {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no fa_lab::Error thrown";
  return ErrorCode::kConfig;
}

TEST(LeastSquaresTest, IdentityReturnsTarget) {
  const Matrix y = Rng(1).Gaussian(4, 3);
  EXPECT_TRUE(LeastSquares(Matrix::Identity(4, 4), y).isApprox(y, 1e-14));
}

TEST(LeastSquaresTest, ExactFitRecoversCoefficients) {
  Rng rng(2);
  const Matrix q = Orthonormalize(rng.Gaussian(7, 3));
  const Matrix g = rng.Gaussian(3, 5);
  EXPECT_LE((LeastSquares(q, q * g) - g).norm(), 1e-12);
}

TEST(LeastSquaresTest, MatchesNormalEquations) {
  Rng rng(3);
  const Matrix z = rng.Gaussian(6, 3);
  const Matrix y = rng.Gaussian(6, 4);
  const Matrix oracle = (z.transpose() * z).inverse() * z.transpose() * y;
  EXPECT_LE((LeastSquares(z, y) - oracle).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(LeastSquaresTest, ResidualIsOrthogonalToColumns) {
  Rng rng(4);
  const Matrix z = rng.Gaussian(30, 7);
  const Matrix y = rng.Gaussian(30, 9);
  const Matrix w = LeastSquares(z, y);
  EXPECT_LE((z.transpose() * (z * w - y)).norm(), 1e-8 * y.norm());
}

TEST(LeastSquaresTest, PerturbationsNeverImprove) {
  Rng rng(5);
  const Matrix z = rng.Gaussian(12, 4);
  const Matrix y = rng.Gaussian(12, 5);
  const Matrix w = LeastSquares(z, y);
  const double best = (z * w - y).squaredNorm();
  for (int i = 0; i < 20; ++i) {
    Matrix delta = rng.Gaussian(4, 5);
    delta *= 1e-4 / delta.norm();
    EXPECT_GE((z * (w + delta) - y).squaredNorm(), best - 1e-12);
  }
}

TEST(LeastSquaresTest, RankDeficientThrows) {
  Matrix z = Rng(6).Gaussian(5, 3);
  z.col(2) = z.col(0);
  EXPECT_EQ(CodeOf([&] { LeastSquares(z, Matrix::Ones(5, 2)); }), ErrorCode::kRankDeficient);
}

TEST(ColumnProjectorTest, FirstBasisVector) {
  Matrix e1 = Matrix::Zero(4, 1);
  e1(0) = 1.0;
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  EXPECT_TRUE(ColumnProjector(e1).isApprox(expected, 1e-14));
}

TEST(ColumnProjectorTest, DuplicateColumnsDoNotChangeSpan) {
  const Matrix a = Rng(7).Gaussian(6, 1);
  Matrix twice(6, 2);
  twice << a, a;
  EXPECT_LE((ColumnProjector(twice) - ColumnProjector(a)).norm(), 1e-12);
}

TEST(ColumnProjectorTest, RandomProjectorIdentities) {
  const Matrix a = Rng(8).Gaussian(5, 2);
  const Matrix p = ColumnProjector(a);
  EXPECT_LE((p * a - a).norm(), 1e-10);
  EXPECT_NEAR(p.trace(), 2.0, 1e-10);
  EXPECT_LE((p * p - p).norm(), 1e-10);
  EXPECT_LE((p - p.transpose()).norm(), 1e-12);
}

TEST(ColumnProjectorTest, ZeroMatrixGivesZeroProjector) {
  EXPECT_EQ(ColumnProjector(Matrix::Zero(3, 2)), Matrix::Zero(3, 3));
}

TEST(SvdTest, Diagonal) {
  Matrix m(2, 2);
  m << 3, 0, 0, 1;
  const SvdFactors f = Svd(m);
  EXPECT_NEAR(f.singular_values(0), 3.0, 1e-14);
  EXPECT_NEAR(f.singular_values(1), 1.0, 1e-14);
}

TEST(SvdTest, ZeroMatrix) {
  EXPECT_EQ(Svd(Matrix::Zero(3, 2)).singular_values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(SvdTest, RandomReconstructionAndOrthonormality) {
  const Matrix m = Rng(9).Gaussian(8, 5);
  const SvdFactors f = Svd(m);
  EXPECT_LE((f.Reconstruct() - m).norm(), 1e-9 * m.norm());
  EXPECT_LE((f.u.transpose() * f.u - Matrix::Identity(5, 5)).norm(), 1e-10);
  EXPECT_LE((f.v.transpose() * f.v - Matrix::Identity(5, 5)).norm(), 1e-10);
  for (Eigen::Index i = 1; i < f.singular_values.size(); ++i) {
    EXPECT_GE(f.singular_values(i - 1), f.singular_values(i));
  }
}

TEST(SymEigMinTest, SmallCases) {
  Matrix d(2, 2);
  d << 2, 0, 0, -1;
  EXPECT_DOUBLE_EQ(SymEigMin(d), -1.0);
  EXPECT_NEAR(SymEigMin(Matrix::Identity(3, 3)), 1.0, 1e-15);
}

TEST(SymEigMinTest, TwoByTwoCharacteristicRoot) {
  Matrix s(2, 2);
  s << 1.5, 0.7, 0.7, -0.3;
  // Smaller root of x^2 - tr x + det.
  const double tr = s.trace();
  const double det = s.determinant();
  const double root = 0.5 * (tr - std::sqrt(tr * tr - 4 * det));
  EXPECT_NEAR(SymEigMin(s), root, 1e-14);
}

TEST(SymEigMinTest, ThreeByThreeTridiagonal) {
  // Eigenvalues of tridiag(-1, 2, -1) are 2 - 2 cos(k pi / 4).
  Matrix s(3, 3);
  s << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  EXPECT_NEAR(SymEigMin(s), 2.0 - std::sqrt(2.0), 1e-14);
}

TEST(SymEigMinTest, BelowEveryRayleighQuotient) {
  Rng rng(10);
  const Matrix g = rng.Gaussian(6, 6);
  const Matrix s = g + g.transpose();
  const double lambda = SymEigMin(s);
  double best = 1e300;
  for (int i = 0; i < 10000; ++i) {
    const Vector x = rng.UnitVector(6);
    best = std::min(best, x.dot(s * x));
  }
  EXPECT_LE(lambda, best + 1e-12);
  EXPECT_LE(best - lambda, 0.5);  // sampled minimum lands near the true one
}

TEST(SymEigMinTest, AsymmetricThrows) {
  Matrix s(2, 2);
  s << 1, 2, 0, 1;
  EXPECT_EQ(CodeOf([&] { SymEigMin(s); }), ErrorCode::kNotSymmetric);
}

TEST(OrthonormalizeTest, OrthonormalInputStaysOrthonormal) {
  const Matrix q = Orthonormalize(Rng(11).Gaussian(6, 3));
  const Matrix q2 = Orthonormalize(q);
  EXPECT_LE((q2.transpose() * q2 - Matrix::Identity(3, 3)).norm(), 1e-10);
  EXPECT_LE((q2 - q).norm(), 1e-12);
}

TEST(OrthonormalizeTest, ScaledBasisVector) {
  Matrix m = Matrix::Zero(3, 1);
  m(0) = 2.0;
  const Matrix q = Orthonormalize(m);
  EXPECT_NEAR(std::abs(q(0)), 1.0, 1e-15);
  EXPECT_NEAR(q.col(0).tail(2).norm(), 0.0, 1e-15);
}

TEST(OrthonormalizeTest, SameSpan) {
  const Matrix m = Rng(12).Gaussian(7, 3);
  const Matrix q = Orthonormalize(m);
  EXPECT_LE((q.transpose() * q - Matrix::Identity(3, 3)).norm(), 1e-10);
  const Matrix pm = m * (m.transpose() * m).inverse() * m.transpose();
  EXPECT_LE((q * q.transpose() - pm).norm(), 1e-9);
}

TEST(OrthonormalizeTest, RankDeficientThrows) {
  Matrix m = Rng(13).Gaussian(5, 2);
  m.col(1) = 3.0 * m.col(0);
  EXPECT_EQ(CodeOf([&] { Orthonormalize(m); }), ErrorCode::kRankDeficient);
}

TEST(InverseSqrtPdTest, WhitensTheMatrix) {
  const Matrix b = Rng(14).Gaussian(5, 4);
  const Matrix g = b.transpose() * b;
  const Matrix s = InverseSqrtPd(g);
  EXPECT_LE((s * g * s - Matrix::Identity(4, 4)).norm(), 1e-10);
  EXPECT_LE((s - s.transpose()).norm(), 1e-12);
}

TEST(InverseSqrtPdTest, SingularThrows) {
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 1.0;
  EXPECT_EQ(CodeOf([&] { InverseSqrtPd(g); }), ErrorCode::kNotPositiveDefinite);
}

TEST(ApproxEqualTest, HybridTolerance) {
  EXPECT_TRUE(ApproxEqual(1.0 + 1e-9, 1.0, 1e-8));
  EXPECT_FALSE(ApproxEqual(1.0 + 1e-7, 1.0, 1e-8));
  EXPECT_TRUE(ApproxEqual(1e-13, 0.0, 0.0));
}

TEST(RequireFiniteTest, RejectsNan) {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = std::nan("");
  EXPECT_EQ(CodeOf([&] { RequireFinite(m, "m"); }), ErrorCode::kNonFinite);
}

}  // namespace
}  // namespace fa_lab
