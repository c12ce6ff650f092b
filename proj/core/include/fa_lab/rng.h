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

#ifndef FA_LAB_RNG_H_
#define FA_LAB_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

#include "fa_lab/numerics.h"

namespace fa_lab {

// Child seed for a named sub-draw: SplitMix64 finalizer over the parent seed
// mixed with the FNV-1a hash of `label`. Stable across platforms.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label);

// Reproducible random source. std::mt19937_64 is bit-specified by the
// standard; normals come from our own Box-Muller transform rather than
// std::normal_distribution, whose algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::string_view label)
      : engine_(DeriveSeed(seed, label)) {}

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double Uniform();
  double Normal();

  Matrix Gaussian(Eigen::Index rows, Eigen::Index cols, double stddev = 1.0);
  // Uniform on the unit sphere in R^dim.
  Vector UnitVector(Eigen::Index dim);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fa_lab

#endif  // FA_LAB_RNG_H_
