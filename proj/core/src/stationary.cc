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

#include "fa_lab/stationary.h"

#include <cmath>
#include <string>

#include "fa_lab/error.h"
#include "fa_lab/rng.h"

namespace fa_lab {
namespace {

// sum_i sigma_i^2 (1 - ||P u_i||^2) where P = Q Q^T and `proj_norms_sq(i)`
// holds ||Q^T u_i||^2.
double WeightedMiss(const Vector& sigma, const Vector& proj_norms_sq) {
  return (sigma.array().square() * (1.0 - proj_norms_sq.array())).sum();
}

// Projection error and overlap in the singular basis of Y, where
// A = diag(sigma) C^T. `c` is r x n.
SeparationTrial SpectralTrial(const SpectrumSpec& spectrum, const Matrix& c, int r) {
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  const Vector sigma = Eigen::Map<const Vector>(spectrum.values().data(), n);
  const Matrix a = sigma.asDiagonal() * c.transpose();
  const Matrix basis = ColumnBasis(a);
  if (basis.cols() == 0) {
    throw Error(ErrorCode::kZeroFeedbackImage, "Y C^T = 0");
  }
  // With U = I, ||P_A u_i||^2 is the squared norm of row i of the basis.
  const Vector row_norms_sq = basis.rowwise().squaredNorm();
  SeparationTrial out;
  out.fa_error = WeightedMiss(sigma, row_norms_sq);
  out.gd_error = OptimalRankRError(spectrum, r);
  return out;
}

}  // namespace

Matrix PredictedSolution(const TargetMatrix& target, const FeedbackMatrix& feedback) {
  if (feedback.c.cols() != target.m()) {
    throw Error(ErrorCode::kInvalidShape, "feedback width must equal m");
  }
  const Matrix a = target.y * feedback.c.transpose();
  const Matrix basis = ColumnBasis(a);
  if (basis.cols() == 0) {
    throw Error(ErrorCode::kZeroFeedbackImage, "Y C^T = 0");
  }
  return basis * (basis.transpose() * target.y);
}

double ProjectionError(const TargetMatrix& target, const Matrix& a) {
  if (a.rows() != target.n()) {
    throw Error(ErrorCode::kInvalidShape, "A must have n rows");
  }
  const Matrix basis = ColumnBasis(a);
  const Vector& sigma = target.svd.singular_values;
  if (basis.cols() == 0) return sigma.squaredNorm();
  const Vector proj_norms_sq =
      (basis.transpose() * target.svd.u).colwise().squaredNorm().transpose();
  return WeightedMiss(sigma, proj_norms_sq);
}

double OptimalRankRError(const TargetMatrix& target, int r) {
  if (r < 0) throw Error(ErrorCode::kInvalidShape, "r must be >= 0");
  const Vector& sigma = target.svd.singular_values;
  if (r >= sigma.size()) return 0.0;
  return sigma.tail(sigma.size() - r).squaredNorm();
}

double OptimalRankRError(const SpectrumSpec& spectrum, int r) {
  if (r < 0) throw Error(ErrorCode::kInvalidShape, "r must be >= 0");
  double sum = 0.0;
  for (std::size_t i = static_cast<std::size_t>(r); i < spectrum.size(); ++i) {
    sum += spectrum.values()[i] * spectrum.values()[i];
  }
  return sum;
}

StationaryReport MakeStationaryReport(const TargetMatrix& target,
                                      const FeedbackMatrix& feedback,
                                      const FactorState* state) {
  StationaryReport report;
  report.predicted_yhat = PredictedSolution(target, feedback);
  report.predicted_error = (report.predicted_yhat - target.y).squaredNorm();
  const auto r = static_cast<int>(feedback.c.rows());
  report.optimal_error = OptimalRankRError(target, r);
  if (state != nullptr) {
    report.achieved_error = (state->yhat() - target.y).squaredNorm();
  }
  if (r == 1) report.overlap = RepresentationOverlap(target, feedback).overlap;
  return report;
}

SeparationTrial RunSeparationTrial(int n, int r, std::uint64_t seed) {
  const SpectrumSpec spectrum = SeparationSpectrum(n, r);
  const TargetMatrix target = MakeTarget(n, n, spectrum, seed);
  const FeedbackMatrix feedback = MakeFeedback(r, n, seed);
  SeparationTrial out;
  out.fa_error = ProjectionError(target, target.y * feedback.c.transpose());
  out.gd_error = OptimalRankRError(spectrum, r);
  return out;
}

SeparationTrial RunSeparationTrialSpectral(int n, int r, std::uint64_t seed) {
  const SpectrumSpec spectrum = SeparationSpectrum(n, r);
  return SpectralTrial(spectrum, MakeFeedback(r, n, seed).c, r);
}

OverlapTrial RepresentationOverlap(int n, double eps, std::uint64_t seed) {
  const SpectrumSpec spectrum = RepSpectrum(n, eps);
  const Matrix c = MakeFeedback(1, n, seed).c;
  const SeparationTrial errors = SpectralTrial(spectrum, c, 1);
  const Vector sigma = Eigen::Map<const Vector>(spectrum.values().data(), n);
  const Vector a = sigma.cwiseProduct(c.row(0).transpose());
  OverlapTrial out;
  out.overlap = std::abs(a(0)) / a.norm();
  out.fa_error = errors.fa_error;
  out.gd_error = errors.gd_error;
  out.error_ratio = out.fa_error / out.gd_error;
  return out;
}

OverlapTrial RepresentationOverlap(const TargetMatrix& target,
                                   const FeedbackMatrix& feedback) {
  if (feedback.c.rows() != 1) {
    throw Error(ErrorCode::kInvalidShape, "representation overlap needs r = 1");
  }
  const Vector a = target.y * feedback.c.row(0).transpose();
  const double norm = a.norm();
  if (norm == 0.0) throw Error(ErrorCode::kZeroFeedbackImage, "Y C^T = 0");
  OverlapTrial out;
  out.overlap = std::abs(a.dot(target.svd.u.col(0))) / norm;
  out.fa_error = ProjectionError(target, a);
  out.gd_error = OptimalRankRError(target, 1);
  out.error_ratio = out.fa_error / out.gd_error;
  return out;
}

double ConvergenceTimeBound(const TargetMatrix& target, const FeedbackMatrix& feedback,
                            const Matrix& z0, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kConfig, "eps must be positive");
  const Vector z_sigma = SingularValues(z0);
  const Eigen::Index r = z0.cols();
  if (z_sigma.size() < r || r == 0) {
    throw Error(ErrorCode::kRankDeficient, "Z(0) has fewer rows than columns");
  }
  const double z_max = z_sigma(0);
  const double z_min = z_sigma(r - 1);
  if (!(z_max > 0.0) || z_min <= RankTolerance(z0.rows(), r, z_max)) {
    throw Error(ErrorCode::kRankDeficient, "sigma_r(Z(0)) is numerically zero");
  }
  const double y_max = target.svd.singular_values.size() > 0
                           ? target.svd.singular_values(0)
                           : 0.0;
  const double c_max = SingularValues(feedback.c)(0);
  const double width = std::sqrt(static_cast<double>(r) *
                                 static_cast<double>(std::min(target.n(), target.m())));
  return (24.0 / eps) * y_max * c_max * std::pow(z_max, 6) * width / std::pow(z_min, 5);
}

bool StationarityCheck(const FactorState& state, const Matrix& y, const Matrix& c,
                       double tol) {
  const Matrix e = y - state.yhat();
  const double feedback_residual = (e * c.transpose()).norm();
  const double z_residual = (state.z().transpose() * e).norm();
  return feedback_residual <= tol * y.norm() * c.norm() &&
         z_residual <= tol * state.z().norm() * y.norm();
}

}  // namespace fa_lab
