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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <set>

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
  return ErrorCode::kIo;
}

TEST(SpectrumTest, RejectsIncreasingOrNegative) {
  EXPECT_EQ(CodeOf([] { SpectrumSpec({0.5, 1.0}); }), ErrorCode::kInvalidShape);
  EXPECT_EQ(CodeOf([] { SpectrumSpec({1.0, -0.1}); }), ErrorCode::kInvalidShape);
  EXPECT_NO_THROW(SpectrumSpec({1.0, 1.0, 0.0}));
}

TEST(SpectrumTest, SeparationValues) {
  const SpectrumSpec s = SeparationSpectrum(500, 50);
  ASSERT_EQ(s.size(), 500u);
  EXPECT_DOUBLE_EQ(s.values()[0], 1.0 / std::sqrt(100.0));
  EXPECT_DOUBLE_EQ(s.values()[49], 1.0 / std::sqrt(100.0));
  EXPECT_DOUBLE_EQ(s.values()[50], 1.0 / std::sqrt(900.0));
  EXPECT_DOUBLE_EQ(s.values()[499], 1.0 / std::sqrt(900.0));

  const SpectrumSpec two = SeparationSpectrum(2, 1);
  EXPECT_DOUBLE_EQ(two.values()[0], 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(two.values()[1], 1.0 / std::sqrt(2.0));
}

TEST(SpectrumTest, SeparationHasUnitEnergy) {
  for (auto [n, r] : {std::pair{10, 3}, {37, 1}, {500, 50}, {1000, 500}}) {
    const SpectrumSpec s = SeparationSpectrum(n, r);
    double sum = 0.0;
    for (double v : s.values()) sum += v * v;
    EXPECT_NEAR(sum, 1.0, 1e-12) << n << " " << r;
  }
}

TEST(SpectrumTest, SeparationNeedsRBelowN) {
  EXPECT_EQ(CodeOf([] { SeparationSpectrum(10, 10); }), ErrorCode::kInvalidShape);
  EXPECT_EQ(CodeOf([] { SeparationSpectrum(10, 0); }), ErrorCode::kInvalidShape);
  // More than half the values on top would make the profile increase.
  EXPECT_EQ(CodeOf([] { SeparationSpectrum(10, 6); }), ErrorCode::kInvalidShape);
}

TEST(SpectrumTest, RepValuesAndBounds) {
  const SpectrumSpec s = RepSpectrum(3, 0.5);
  EXPECT_EQ(s.values(), (std::vector<double>{1.0, 0.5, 0.5}));
  EXPECT_NO_THROW(RepSpectrum(4, 0.999));
  EXPECT_ANY_THROW(RepSpectrum(4, 1.0));
  EXPECT_ANY_THROW(RepSpectrum(4, 0.0));
}

TEST(SpectrumTest, RepTailEnergy) {
  const SpectrumSpec s = RepSpectrum(10000, 0.5);
  double tail = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) tail += s.values()[i] * s.values()[i];
  EXPECT_NEAR(tail, 0.25 * 9999, 1e-9);
}

TEST(SpectrumTest, ParseFamiliesAndLists) {
  EXPECT_EQ(ParseSpectrum("0.5, 0.25").values(), (std::vector<double>{0.5, 0.25}));
  EXPECT_EQ(ParseSpectrum("flat(3, 2)").values(), (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(ParseSpectrum("separation(4,1)").size(), 4u);
  EXPECT_EQ(ParseSpectrum(" rep(3,0.5) ").values(), RepSpectrum(3, 0.5).values());
}

TEST(SpectrumTest, ParseRejectsGarbage) {
  EXPECT_EQ(CodeOf([] { ParseSpectrum("flat(3)"); }), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ParseSpectrum("wobbly(3,1)"); }), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ParseSpectrum("1,x"); }), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ParseSpectrum("flat(2.5,1)"); }), ErrorCode::kConfig);
}

TEST(MakeTargetTest, SingleValue) {
  const TargetMatrix t = MakeTarget(3, 3, SpectrumSpec({1.0}), 1);
  EXPECT_EQ(t.rank, 1);
  EXPECT_NEAR(t.y.norm(), 1.0, 1e-12);
  EXPECT_NEAR(SingularValues(t.y)(1), 0.0, 1e-12);
}

TEST(MakeTargetTest, FlatSpectrumAtFigureShape) {
  const TargetMatrix t = MakeTarget(500, 500, FlatSpectrum(50, 1.0 / std::sqrt(50.0)), 42);
  EXPECT_NEAR(t.FrobeniusSq(), 1.0, 1e-12);
  EXPECT_EQ(t.rank, 50);
}

TEST(MakeTargetTest, Deterministic) {
  const SpectrumSpec s({1.0, 0.5, 0.1});
  EXPECT_EQ(MakeTarget(6, 5, s, 9).y, MakeTarget(6, 5, s, 9).y);
  EXPECT_NE(MakeTarget(6, 5, s, 9).y, MakeTarget(6, 5, s, 10).y);
}

TEST(MakeTargetTest, RecomputedSpectrumMatches) {
  const SpectrumSpec s({2.0, 1.0, 1.0, 0.3});
  const TargetMatrix t = MakeTarget(9, 7, s, 3);
  const Vector sv = SingularValues(t.y);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(sv(i), s.values()[i], 1e-8);
  EXPECT_NEAR(sv(4), 0.0, 1e-8);
  EXPECT_LE((t.svd.Reconstruct() - t.y).norm(), 1e-9 * t.y.norm());
}

TEST(MakeTargetTest, SpectrumTooLong) {
  EXPECT_EQ(CodeOf([] { MakeTarget(3, 2, SpectrumSpec({1, 1, 1}), 1); }),
            ErrorCode::kInvalidShape);
}

TEST(MakeTargetTest, GaussianProductIsNormalized) {
  const TargetMatrix t = MakeGaussianProductTarget(20, 15, 4, 5);
  EXPECT_NEAR(t.y.norm(), 1.0, 1e-12);
  EXPECT_EQ(t.rank, 4);
}

TEST(MakeTargetTest, UnitVector) {
  const TargetMatrix t = MakeUnitVectorTarget(100, 5);
  EXPECT_EQ(t.m(), 1);
  EXPECT_NEAR(t.y.norm(), 1.0, 1e-14);
}

TEST(GaussianInitTest, ZeroStdGivesZeros) {
  const FactorState s = GaussianInit(4, 2, 3, 0.0, 1);
  EXPECT_EQ(s.z(), Matrix::Zero(4, 2));
  EXPECT_EQ(s.w(), Matrix::Zero(2, 3));
}

TEST(GaussianInitTest, EmpiricalStd) {
  const FactorState s = GaussianInit(500, 50, 500, 1e-3, 42);
  for (const Matrix* m : {&s.z(), &s.w()}) {
    const double mean = m->mean();
    const double sd = std::sqrt((m->array() - mean).square().mean());
    EXPECT_NEAR(sd, 1e-3, 1e-4);
  }
}

TEST(GaussianInitTest, Deterministic) {
  EXPECT_EQ(GaussianInit(5, 2, 4, 0.1, 7), GaussianInit(5, 2, 4, 0.1, 7));
}

TEST(FaStarInitTest, OrthonormalMode) {
  const TargetMatrix t = MakeGaussianProductTarget(30, 20, 20, 1);
  const FactorState s = FaStarInit(30, 10, t, 1, ZInit::Orthonormal());
  EXPECT_LE((s.z().transpose() * s.z() - Matrix::Identity(10, 10)).norm(), 1e-10);
  EXPECT_LE((s.z().transpose() * (t.y - s.yhat())).norm(), 1e-8 * t.y.norm());
}

TEST(FaStarInitTest, GaussianModeAtFigureShape) {
  const TargetMatrix t = MakeGaussianProductTarget(100, 100, 99, 2);
  const FactorState s = FaStarInit(100, 99, t, 2, ZInit::Gaussian(1e-3));
  EXPECT_LE((s.z().transpose() * (t.y - s.yhat())).norm(), 1e-8 * t.y.norm());
}

TEST(FaStarInitTest, RetriesPastDegenerateDraw) {
  const TargetMatrix t = MakeGaussianProductTarget(6, 4, 4, 3);
  int calls = 0;
  const FactorState s = FaStarInitFrom(
      [&](int attempt) {
        ++calls;
        Matrix z = Rng(attempt + 100).Gaussian(6, 3);
        if (attempt == 0) z.col(1) = z.col(0);
        return z;
      },
      t);
  EXPECT_EQ(calls, 2);
  EXPECT_LE((s.z().transpose() * (t.y - s.yhat())).norm(), 1e-8);
}

TEST(FaStarInitTest, GivesUpAfterEightDraws) {
  const TargetMatrix t = MakeGaussianProductTarget(6, 4, 4, 3);
  int calls = 0;
  EXPECT_EQ(CodeOf([&] {
              FaStarInitFrom(
                  [&](int) {
                    ++calls;
                    return Matrix(Matrix::Ones(6, 3));
                  },
                  t);
            }),
            ErrorCode::kRankDeficient);
  EXPECT_EQ(calls, kFaStarInitAttempts);
}

TEST(MakeFeedbackTest, Moments) {
  const Matrix c = MakeFeedback(100, 200, 11).c;
  const double n = static_cast<double>(c.size());
  const double mean = c.mean();
  EXPECT_LE(std::abs(mean), 3.0 / std::sqrt(n));
  const double var = (c.array() - mean).square().sum() / (n - 1);
  EXPECT_NEAR(var, 1.0, 0.1);
}

TEST(MakeFeedbackTest, DeterministicAndShaped) {
  EXPECT_EQ(MakeFeedback(3, 7, 5).c, MakeFeedback(3, 7, 5).c);
  const FeedbackMatrix row = MakeFeedback(1, 9, 5);
  EXPECT_EQ(row.c.rows(), 1);
  EXPECT_EQ(row.c.cols(), 9);
}

TEST(AdversarialInitTest, Shapes) {
  const Matrix y = Matrix::Ones(4, 1);
  const Matrix c = Matrix::Constant(3, 1, 2.0);
  const FactorState s = Adversarial1dInit(y, c);
  EXPECT_EQ(s.z(), -y * c.transpose());
  EXPECT_EQ(s.w(), Matrix::Zero(3, 1));
}

TEST(DeriveSeedTest, LabelsSeparateStreams) {
  std::set<std::uint64_t> seen;
  for (const char* label : {"target.u", "target.v", "init.z", "init.w", "feedback.c"}) {
    seen.insert(DeriveSeed(42, label));
  }
  seen.insert(DeriveSeed(43, "init.z"));
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_EQ(DeriveSeed(42, "init.z"), DeriveSeed(42, "init.z"));
}

TEST(RngTest, UniformStaysInsideOpenInterval) {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace fa_lab
