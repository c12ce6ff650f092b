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

#ifndef FA_LAB_ERROR_H_
#define FA_LAB_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fa_lab {

enum class ErrorCode {
  kRankDeficient,
  kNotSymmetric,
  kConvergenceFailure,
  kInvalidShape,
  kNonFinite,
  kNotIsotropic,
  kNotPositiveDefinite,
  kZeroFeedbackImage,
  kUnknownScenario,
  kConfig,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library. `step()` is set when the error was
// raised while integrating a trajectory.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<long> step = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<long> step() const { return step_; }
  const std::string& detail() const { return detail_; }

  Error WithStep(long step) const { return Error(code_, detail_, step); }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<long> step_;
};

}  // namespace fa_lab

#endif  // FA_LAB_ERROR_H_
