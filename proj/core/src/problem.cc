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

#include "fa_lab/problem.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "fa_lab/error.h"
#include "fa_lab/rng.h"

namespace fa_lab {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double ParseNumber(std::string_view s) {
  s = Trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kConfig, "bad number '" + std::string(s) + "'");
  }
  return value;
}

std::vector<double> ParseList(std::string_view s) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(ParseNumber(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

int AsCount(double x, std::string_view what) {
  if (x != std::floor(x) || x < 0 || x > 1e9) {
    throw Error(ErrorCode::kConfig,
                std::string(what) + " must be a nonnegative integer");
  }
  return static_cast<int>(x);
}

}  // namespace

SpectrumSpec::SpectrumSpec(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorCode::kInvalidShape, "empty spectrum");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw Error(ErrorCode::kInvalidShape, "spectrum entries must be finite and >= 0");
    }
    if (i > 0 && values_[i] > values_[i - 1]) {
      throw Error(ErrorCode::kInvalidShape, "spectrum must be nonincreasing");
    }
  }
}

double SpectrumSpec::SumOfSquares() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return sum;
}

SpectrumSpec FlatSpectrum(int k, double scale) {
  if (k < 1) throw Error(ErrorCode::kInvalidShape, "flat spectrum needs k >= 1");
  return SpectrumSpec(std::vector<double>(k, scale));
}

SpectrumSpec SeparationSpectrum(int n, int r) {
  if (r < 1 || r >= n) {
    throw Error(ErrorCode::kInvalidShape,
                "separation spectrum needs 1 <= r < n, got n=" +
                    std::to_string(n) + " r=" + std::to_string(r));
  }
  std::vector<double> values(n, 1.0 / std::sqrt(2.0 * (n - r)));
  std::fill_n(values.begin(), r, 1.0 / std::sqrt(2.0 * r));
  return SpectrumSpec(std::move(values));
}

SpectrumSpec RepSpectrum(int n, double eps) {
  if (n < 1) throw Error(ErrorCode::kInvalidShape, "rep spectrum needs n >= 1");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorCode::kInvalidShape, "rep spectrum needs 0 < eps < 1");
  }
  std::vector<double> values(n, eps);
  values[0] = 1.0;
  return SpectrumSpec(std::move(values));
}

SpectrumSpec ParseSpectrum(std::string_view text) {
  text = Trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos) return SpectrumSpec(ParseList(text));
  if (text.back() != ')') {
    throw Error(ErrorCode::kConfig, "unterminated spectrum '" + std::string(text) + "'");
  }
  const std::string_view family = Trim(text.substr(0, open));
  const std::vector<double> args =
      ParseList(text.substr(open + 1, text.size() - open - 2));
  if (args.size() != 2) {
    throw Error(ErrorCode::kConfig, "spectrum family takes two arguments");
  }
  if (family == "flat") return FlatSpectrum(AsCount(args[0], "k"), args[1]);
  if (family == "separation") {
    return SeparationSpectrum(AsCount(args[0], "n"), AsCount(args[1], "r"));
  }
  if (family == "rep") return RepSpectrum(AsCount(args[0], "n"), args[1]);
  throw Error(ErrorCode::kConfig, "unknown spectrum family '" + std::string(family) + "'");
}

TargetMatrix TargetMatrix::FromMatrix(Matrix y) {
  RequireFinite(y, "target");
  TargetMatrix t;
  t.svd = Svd(y);
  t.y = std::move(y);
  const Vector& s = t.svd.singular_values;
  const double tol = s.size() > 0 ? RankTolerance(t.y.rows(), t.y.cols(), s(0)) : 0.0;
  t.rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++t.rank;
  }
  return t;
}

TargetMatrix TargetMatrix::FromFactors(Matrix u, const SpectrumSpec& sigma,
                                       Matrix v) {
  const auto k = static_cast<Eigen::Index>(sigma.size());
  if (u.cols() != k || v.cols() != k) {
    throw Error(ErrorCode::kInvalidShape, "factor widths must match the spectrum");
  }
  TargetMatrix t;
  t.svd.u = std::move(u);
  t.svd.v = std::move(v);
  t.svd.singular_values =
      Eigen::Map<const Vector>(sigma.values().data(), k);
  t.y = t.svd.Reconstruct();
  const double tol = RankTolerance(t.y.rows(), t.y.cols(), sigma.values()[0]);
  t.rank = static_cast<int>(std::count_if(sigma.values().begin(), sigma.values().end(),
                                          [tol](double s) { return s > tol; }));
  return t;
}

TargetMatrix MakeTarget(int n, int m, const SpectrumSpec& spectrum,
                        std::uint64_t seed) {
  const auto k = static_cast<int>(spectrum.size());
  if (n < 1 || m < 1 || k > std::min(n, m)) {
    throw Error(ErrorCode::kInvalidShape,
                "spectrum of length " + std::to_string(k) + " does not fit " +
                    std::to_string(n) + "x" + std::to_string(m));
  }
  Matrix u = Orthonormalize(Rng(seed, "target.u").Gaussian(n, k));
  Matrix v = Orthonormalize(Rng(seed, "target.v").Gaussian(m, k));
  return TargetMatrix::FromFactors(std::move(u), spectrum, std::move(v));
}

TargetMatrix MakeGaussianProductTarget(int n, int m, int k, std::uint64_t seed) {
  if (n < 1 || m < 1 || k < 1) {
    throw Error(ErrorCode::kInvalidShape, "gaussian product target needs positive sizes");
  }
  const Matrix a = Rng(seed, "target.a").Gaussian(n, k);
  const Matrix b = Rng(seed, "target.b").Gaussian(m, k);
  Matrix y = a * b.transpose();
  y /= y.norm();
  return TargetMatrix::FromMatrix(std::move(y));
}

TargetMatrix MakeUnitVectorTarget(int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::kInvalidShape, "unit vector target needs n >= 1");
  Matrix y = Rng(seed, "target.y").UnitVector(n);
  return TargetMatrix::FromMatrix(std::move(y));
}

FactorState GaussianInit(int n, int r, int m, double stddev, std::uint64_t seed) {
  if (n < 1 || r < 1 || m < 1 || !(stddev >= 0.0)) {
    throw Error(ErrorCode::kInvalidShape, "gaussian init needs positive sizes, std >= 0");
  }
  return FactorState(Rng(seed, "init.z").Gaussian(n, r, stddev),
                     Rng(seed, "init.w").Gaussian(r, m, stddev));
}

FactorState OptimalWInit(Matrix z, const TargetMatrix& target) {
  Matrix w = LeastSquares(z, target.y);
  return FactorState(std::move(z), std::move(w));
}

FactorState FaStarInitFrom(const std::function<Matrix(int)>& draw_z,
                           const TargetMatrix& target) {
  for (int attempt = 0;; ++attempt) {
    try {
      return OptimalWInit(draw_z(attempt), target);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRankDeficient) throw;
      if (attempt + 1 >= kFaStarInitAttempts) {
        throw Error(ErrorCode::kRankDeficient,
                    "no full-rank Z after " + std::to_string(kFaStarInitAttempts) +
                        " draws");
      }
    }
  }
}

FactorState FaStarInit(int n, int r, const TargetMatrix& target,
                       std::uint64_t seed, ZInit z_init) {
  if (target.n() != n || r < 1) {
    throw Error(ErrorCode::kInvalidShape, "FA* init shape mismatch");
  }
  return FaStarInitFrom(
      [&](int attempt) {
        const std::string label =
            attempt == 0 ? "init.z" : "init.z.retry" + std::to_string(attempt);
        Rng rng(seed, label);
        if (z_init.mode == ZInit::Mode::kOrthonormal) {
          return Orthonormalize(rng.Gaussian(n, r));
        }
        return rng.Gaussian(n, r, z_init.stddev);
      },
      target);
}

FeedbackMatrix MakeFeedback(int r, int m, std::uint64_t seed) {
  if (r < 1 || m < 1) throw Error(ErrorCode::kInvalidShape, "feedback needs r, m >= 1");
  return FeedbackMatrix{Rng(seed, "feedback.c").Gaussian(r, m), seed};
}

FactorState Adversarial1dInit(const Matrix& y, const Matrix& c) {
  if (y.cols() != 1 || c.cols() != 1) {
    throw Error(ErrorCode::kInvalidShape, "adversarial init expects column vectors");
  }
  return FactorState(-y * c.transpose(), Matrix::Zero(c.rows(), 1));
}

}  // namespace fa_lab
