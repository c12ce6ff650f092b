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

#include "fa_lab/diagnostics.h"

#include <string>

#include "fa_lab/error.h"

namespace fa_lab {
namespace {

void CheckShapes(const FactorState& state, const Matrix& y, const Matrix& c) {
  if (y.rows() != state.n() || y.cols() != state.m() || c.rows() != state.r() ||
      c.cols() != state.m()) {
    throw Error(ErrorCode::kInvalidShape,
                "state " + std::to_string(state.n()) + "x" +
                    std::to_string(state.r()) + "x" + std::to_string(state.m()) +
                    " vs Y " + std::to_string(y.rows()) + "x" +
                    std::to_string(y.cols()) + " and C " +
                    std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
  }
}

}  // namespace

GramWeighting GramWeighting::From(const Matrix& gram) {
  GramWeighting g;
  g.inverse_sqrt = InverseSqrtPd(gram);
  g.inverse = g.inverse_sqrt * g.inverse_sqrt;
  g.gram = gram;
  return g;
}

GramWeighting GramWeighting::Identity(Eigen::Index r) {
  const Matrix eye = Matrix::Identity(r, r);
  return GramWeighting{eye, eye, eye};
}

Matrix ResidualMatrix(const FactorState& state, const Matrix& y, const Matrix& c) {
  CheckShapes(state, y, c);
  return (y - state.yhat()) * c.transpose();
}

Matrix AlignmentMatrix(const Matrix& w, const Matrix& c, const GramWeighting& g) {
  const Matrix cwt = c * w.transpose();
  const Matrix half = g.inverse * cwt;
  // G^{-1} C W^T + (G^{-1} C W^T)^T, exactly symmetric in floating point.
  return half + half.transpose();
}

AlignmentSnapshot Snapshot(const FactorState& state, const Matrix& y,
                           const Matrix& c, const GramWeighting& g) {
  if (g.gram.rows() != state.r()) {
    throw Error(ErrorCode::kInvalidShape, "Gram matrix does not match r");
  }
  AlignmentSnapshot snap;
  snap.r = ResidualMatrix(state, y, c);
  snap.a = AlignmentMatrix(state.w(), c, g);
  snap.ell = (snap.r * g.inverse_sqrt).squaredNorm();
  snap.min_eig_a = SymEigMin(snap.a);
  const Matrix ra = snap.r * snap.a;
  snap.rayleigh_rows.resize(static_cast<std::size_t>(snap.r.rows()));
  for (Eigen::Index i = 0; i < snap.r.rows(); ++i) {
    const double norm_sq = snap.r.row(i).squaredNorm();
    if (norm_sq > 0.0) {
      snap.rayleigh_rows[static_cast<std::size_t>(i)] =
          ra.row(i).dot(snap.r.row(i)) / norm_sq;
    }
  }
  return snap;
}

AlignmentSnapshot Snapshot(const FactorState& state, const Matrix& y,
                           const Matrix& c, const Matrix& ztz0) {
  return Snapshot(state, y, c, GramWeighting::From(ztz0));
}

double LossDerivative(const AlignmentSnapshot& snap) {
  return -(snap.r * snap.a).cwiseProduct(snap.r).sum();
}

double DiscreteLossDerivative(const AlignmentSnapshot& snap,
                              const AlignmentSnapshot& snap_next, double eta) {
  return (snap_next.ell - snap.ell) / eta;
}

double AlignmentGrowth(const AlignmentSnapshot& snap,
                       const AlignmentSnapshot& snap_next, const Vector& x,
                       double eta) {
  return x.dot((snap_next.a - snap.a) * x) / eta;
}

double AlignmentGrowthRate(const AlignmentSnapshot& snap, const Vector& x,
                           const GramWeighting& g) {
  return 2.0 * (snap.r * (g.inverse * x)).squaredNorm();
}

ResidualSplit SplitResidual(const AlignmentSnapshot& snap, double k) {
  ResidualSplit split;
  for (Eigen::Index i = 0; i < snap.r.rows(); ++i) {
    const double norm_sq = snap.r.row(i).squaredNorm();
    const auto& q = snap.rayleigh_rows[static_cast<std::size_t>(i)];
    if (!q || *q <= k) {
      split.norm_le_sq += norm_sq;
    } else {
      split.norm_gt_sq += norm_sq;
    }
  }
  return split;
}

double TracePotential(const FactorState& state, const Matrix& y, const Matrix& c) {
  CheckShapes(state, y, c);
  // Tr(C W^T W C^T) = ||W C^T||_F^2 and Tr(C Y^T Z) = Tr(Z^T Y C^T).
  const double quadratic = (state.w() * c.transpose()).squaredNorm();
  const double cross = (state.z().transpose() * y).cwiseProduct(c).sum();
  return 0.5 * quadratic - cross;
}

Matrix FaAlignmentFirstDerivative(const FactorState& state, const Matrix& y,
                                  const Matrix& c) {
  CheckShapes(state, y, c);
  const Matrix zte_ct = state.z().transpose() * (y - state.yhat()) * c.transpose();
  return zte_ct + zte_ct.transpose();
}

Matrix FaAlignmentSecondDerivative(const FactorState& state, const Matrix& y,
                                   const Matrix& c) {
  CheckShapes(state, y, c);
  const Matrix& z = state.z();
  const Matrix e = y - state.yhat();
  const Matrix r = e * c.transpose();
  const Matrix zte_ct = z.transpose() * r;
  const Matrix sandwich = zte_ct * (state.w() * c.transpose());
  const Matrix gram_term = (z.transpose() * z) * zte_ct;
  const Matrix out = 2.0 * r.transpose() * r - sandwich - sandwich.transpose() -
                     gram_term - gram_term.transpose();
  return out;
}

}  // namespace fa_lab
