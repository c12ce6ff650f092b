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

#include "fa_lab/factor_state.h"

#include <string>

#include "fa_lab/error.h"

namespace fa_lab {

FactorState::FactorState(Matrix z, Matrix w) { Set(std::move(z), std::move(w)); }

void FactorState::Set(Matrix z, Matrix w) {
  if (z.cols() != w.rows()) {
    throw Error(ErrorCode::kInvalidShape,
                "Z has " + std::to_string(z.cols()) + " columns but W has " +
                    std::to_string(w.rows()) + " rows");
  }
  z_ = std::move(z);
  w_ = std::move(w);
  yhat_.noalias() = z_ * w_;
}

}  // namespace fa_lab
