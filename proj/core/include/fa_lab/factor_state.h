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

#ifndef FA_LAB_FACTOR_STATE_H_
#define FA_LAB_FACTOR_STATE_H_

#include <utility>

#include "fa_lab/numerics.h"

namespace fa_lab {

// The trainable pair (Z, W) with the product Yhat = Z W kept in sync.
class FactorState {
 public:
  FactorState() = default;
  FactorState(Matrix z, Matrix w);

  const Matrix& z() const { return z_; }
  const Matrix& w() const { return w_; }
  const Matrix& yhat() const { return yhat_; }

  Eigen::Index n() const { return z_.rows(); }
  Eigen::Index r() const { return z_.cols(); }
  Eigen::Index m() const { return w_.cols(); }

  // Replaces both factors and refreshes the product.
  void Set(Matrix z, Matrix w);

  friend bool operator==(const FactorState& a, const FactorState& b) {
    return a.z_ == b.z_ && a.w_ == b.w_;
  }

 private:
  Matrix z_;
  Matrix w_;
  Matrix yhat_;
};

}  // namespace fa_lab

#endif  // FA_LAB_FACTOR_STATE_H_
