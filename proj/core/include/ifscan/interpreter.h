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

#ifndef IFSCAN_INTERPRETER_H_
#define IFSCAN_INTERPRETER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ifscan/allocator.h"
#include "ifscan/ir.h"

namespace ifscan {

inline constexpr std::int64_t kDefaultStepCap = 1'000'000;

enum class ExecStatus : std::uint8_t { kReturned, kStepLimit, kError };

struct Execution {
  ExecStatus status = ExecStatus::kReturned;
  std::int64_t value = 0;
  std::int64_t steps = 0;
  std::string error;

  bool returned() const { return status == ExecStatus::kReturned; }
};

// Result of an invoke: sum of args[i] * (i + 1), plus 7. Arithmetic wraps.
std::int64_t InvokeResult(std::span<const std::int64_t> args);

// Runs over SSA values. Phis read the input of the edge taken.
Execution InterpretSsa(const Function& f, std::span<const std::int64_t> params,
                       std::int64_t step_cap = kDefaultStepCap);

// Runs over a register file. Phis are no-ops, parameters arrive in their
// registers, elided moves are skipped, and wide values keep their
// complement in the upper register.
Execution InterpretRegisters(const Function& f, const std::vector<int>& assignment,
                             int total_registers, const std::vector<bool>& elided,
                             std::span<const std::int64_t> params,
                             std::int64_t step_cap = kDefaultStepCap);

// Register-mode run of an allocation with moves emitted.
Execution InterpretAllocation(const AllocationResult& result,
                              std::span<const std::int64_t> params,
                              std::int64_t step_cap = kDefaultStepCap);

}  // namespace ifscan

#endif  // IFSCAN_INTERPRETER_H_
