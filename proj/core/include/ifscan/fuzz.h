// Copyright 2026 The ifscan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IFSCAN_FUZZ_H_
#define IFSCAN_FUZZ_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ifscan/ir.h"

namespace ifscan {

struct FuzzConfig {
  std::uint64_t seed = 1;
  int max_blocks = 10;
  int max_instrs_per_block = 50;
  double wide_fraction = 0.1;
  double invoke_fraction = 0.1;
  double loop_fraction = 0.2;
  int min_params = 0;
  int max_params = 4;
  // Invokes flagged !range.
  double range_fraction = 0.1;
  int max_invoke_args = 4;
  double foldable_fraction = 0.5;
  double two_address_fraction = 0.3;
  double clobber_fraction = 0.05;

  // Throws std::invalid_argument on out-of-range fields.
  void Validate() const;
};

// Structured control flow only: nested diamonds and counted loops, so every
// generated function terminates. Deterministic per config.
std::string FuzzFunctionText(const FuzzConfig& cfg);
Function FuzzFunction(const FuzzConfig& cfg);

// Parameter values for one run of `f`.
std::vector<std::int64_t> FuzzInputs(const Function& f, std::uint64_t seed);

// Straight-line function keeping `live_values` values live at once, each
// later read by a compare (a 4-bit operand under the default target).
Function ConstraintStressFunction(int live_values, std::uint64_t seed);

}  // namespace ifscan

#endif  // IFSCAN_FUZZ_H_
