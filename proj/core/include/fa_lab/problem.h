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

#ifndef FA_LAB_PROBLEM_H_
#define FA_LAB_PROBLEM_H_

// Seeded constructors for targets, initial factors and feedback matrices.
// Every generator is a pure function of (shape, parameters, seed); sub-draws
// use DeriveSeed(seed, label) with the labels documented per function.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fa_lab/factor_state.h"
#include "fa_lab/numerics.h"

namespace fa_lab {

// Nonincreasing, nonnegative singular values.
class SpectrumSpec {
 public:
  explicit SpectrumSpec(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double SumOfSquares() const;

 private:
  std::vector<double> values_;
};

// k copies of `scale`.
SpectrumSpec FlatSpectrum(int k, double scale);
// 1/sqrt(2r) for the first r values, 1/sqrt(2(n-r)) for the remaining n-r.
SpectrumSpec SeparationSpectrum(int n, int r);
// [1, eps, ..., eps] of length n, 0 < eps < 1.
SpectrumSpec RepSpectrum(int n, double eps);

// Accepts an explicit list "0.5,0.25" or a family "flat(k,scale)",
// "separation(n,r)", "rep(n,eps)".
SpectrumSpec ParseSpectrum(std::string_view text);

struct TargetMatrix {
  Matrix y;
  SvdFactors svd;
  int rank = 0;

  Eigen::Index n() const { return y.rows(); }
  Eigen::Index m() const { return y.cols(); }
  double FrobeniusSq() const { return y.squaredNorm(); }

  // Computes the SVD of an arbitrary finite matrix.
  static TargetMatrix FromMatrix(Matrix y);
  // Assembles Y = U diag(sigma) V^T from known factors (orthonormal columns
  // assumed, sigma nonincreasing).
  static TargetMatrix FromFactors(Matrix u, const SpectrumSpec& sigma, Matrix v);
};

struct FeedbackMatrix {
  Matrix c;
  std::uint64_t seed = 0;
};

// U, V are orthonormalized standard Gaussian n x k and m x k draws (labels
// "target.u", "target.v").
TargetMatrix MakeTarget(int n, int m, const SpectrumSpec& spectrum,
                        std::uint64_t seed);

// Y = A B^T / ||A B^T||_F with A, B standard Gaussian n x k and m x k
// (labels "target.a", "target.b").
TargetMatrix MakeGaussianProductTarget(int n, int m, int k, std::uint64_t seed);

// A single random unit column (label "target.y").
TargetMatrix MakeUnitVectorTarget(int n, std::uint64_t seed);

// Z (n x r) and W (r x m) with i.i.d. N(0, stddev^2) entries (labels
// "init.z", "init.w").
FactorState GaussianInit(int n, int r, int m, double stddev, std::uint64_t seed);

struct ZInit {
  enum class Mode { kGaussian, kOrthonormal };
  Mode mode = Mode::kGaussian;
  double stddev = 1e-3;

  static ZInit Gaussian(double stddev) { return {Mode::kGaussian, stddev}; }
  static ZInit Orthonormal() { return {Mode::kOrthonormal, 1.0}; }
};

// Z drawn per `z_init` (label "init.z", retries use "init.z.retry<k>"), and
// W = LeastSquares(Z, Y). Gives up with kRankDeficient after 8 attempts.
FactorState FaStarInit(int n, int r, const TargetMatrix& target,
                       std::uint64_t seed, ZInit z_init);

inline constexpr int kFaStarInitAttempts = 8;

// Retry loop behind FaStarInit: `draw_z(attempt)` supplies the candidate Z
// for attempt 0, 1, ...
FactorState FaStarInitFrom(const std::function<Matrix(int)>& draw_z,
                           const TargetMatrix& target);

// Same as FaStarInit for a caller-supplied Z; no retries.
FactorState OptimalWInit(Matrix z, const TargetMatrix& target);

// Standard Gaussian r x m feedback (label "feedback.c").
FeedbackMatrix MakeFeedback(int r, int m, std::uint64_t seed);

// Z(0) = -y c^T, w(0) = 0: the initialization under which FA alignment c^T w
// decreases at t = 0. `y` is n x 1, `c` is r x 1.
FactorState Adversarial1dInit(const Matrix& y, const Matrix& c);

}  // namespace fa_lab

#endif  // FA_LAB_PROBLEM_H_
