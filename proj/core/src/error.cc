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

#include "fa_lab/error.h"

namespace fa_lab {
namespace {

std::string Format(ErrorCode code, const std::string& message,
                   std::optional<long> step) {
  std::string out(ErrorCodeName(code));
  if (step) out += " at step " + std::to_string(*step);
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kInvalidShape: return "InvalidShape";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kNotIsotropic: return "NotIsotropic";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kZeroFeedbackImage: return "ZeroFeedbackImage";
    case ErrorCode::kUnknownScenario: return "UnknownScenario";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<long> step)
    : std::runtime_error(Format(code, message, step)),
      code_(code),
      detail_(message),
      step_(step) {}

}  // namespace fa_lab
