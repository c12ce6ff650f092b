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

#ifndef FA_LAB_VERIFY_H_
#define FA_LAB_VERIFY_H_

// Property checks behind `fa_lab verify`. Each suite returns one result per
// predicate with the measured value and the threshold it was held to.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fa_lab/experiments.h"

namespace fa_lab {

struct PredicateResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  std::string relation;  // "<=", ">=", "in"
  std::string threshold;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  int jobs = 0;
  bool heavy = false;
  std::uint64_t seed = kDefaultSeed;
};

// facts, lemma41, thm42, thm43, thm44, thm31, appendixE
std::vector<std::string> VerifySuiteNames();

// "all" runs every suite. Throws kConfig for an unknown suite.
std::vector<PredicateResult> RunVerifySuite(std::string_view suite,
                                            const VerifyOptions& options = {});

std::string FormatPredicate(const PredicateResult& result);

}  // namespace fa_lab

#endif  // FA_LAB_VERIFY_H_
