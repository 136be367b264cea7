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

#ifndef IFSCAN_ALLOCATOR_H_
#define IFSCAN_ALLOCATOR_H_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ifscan/ir.h"
#include "ifscan/live_at_same_time.h"
#include "ifscan/prep.h"
#include "ifscan/stats.h"
#include "ifscan/target.h"

namespace ifscan {

inline constexpr int kNoRegister = -1;

enum class RetryKind : std::uint8_t { kGrowRegisters, kSplitLiveRange, kPreAllocateBlockMoves };

std::string_view RetryKindName(RetryKind kind);

struct RetryCause {
  RetryKind kind = RetryKind::kGrowRegisters;
  InstrId failing_instruction = kNoInstr;
  std::vector<InstrId> live_set_at_failure;
  // Class the failing definition had to fit.
  EncodingClass needed = EncodingClass::kReg16;
  // GrowRegisters: registers to add.
  int grow_by = 0;
  // PreAllocateBlockMoves: the invoke that switches to a block of moves.
  InstrId invoke = kNoInstr;
  // Values occupying the registers the failing definition could have used.
  std::vector<InstrId> blockers;
  std::string detail;
};

std::string DescribeRetry(const Function& f, const RetryCause& cause);

class RetryLimitExceeded : public std::runtime_error {
 public:
  RetryLimitExceeded(const std::string& message, std::vector<RetryCause> retries)
      : std::runtime_error(message), retries_(std::move(retries)) {}
  const std::vector<RetryCause>& retries() const { return retries_; }

 private:
  std::vector<RetryCause> retries_;
};

struct CostFactors {
  bool backward_coalescing = true;
  bool forward_coalescing = true;
  bool two_address = true;
  bool clobber_hint = true;
  bool even_alignment = true;
  // Rank registers without future occupants ahead of lower numbers, which
  // saves overlap queries. Off by default.
  bool prefer_unreserved = false;

  static CostFactors None() { return {false, false, false, false, false, false}; }
};

enum class FillStrategy : std::uint8_t { kCheapest, kPerUse, kSingleDominating };

struct AllocatorConfig {
  OrderKind order = OrderKind::kLayout;
  int max_retries = 100;
  PrepOptions prep;
  CostFactors costs;
  FillStrategy fill = FillStrategy::kCheapest;
  LatstVariant latst = LatstVariant::kOrdered;
  // Evaluate both query variants and argument orders on every call.
  bool cross_check_latst = false;
  // Check active/future-active disjointness after every step.
  bool debug_checks = false;
  bool record_timings = false;
  std::function<void(const LatstQuery&)> latst_observer;
};

struct AllocationResult {
  // The allocated function: prepared input plus every inserted instruction.
  Function function;
  LayoutOrder order;
  // Indexed by instruction id; kNoRegister for folded constants, removed
  // instructions and instructions without a result.
  std::vector<int> assignment;
  int total_registers = 0;
  std::vector<InstrId> inserted;
  std::vector<RetryCause> retries;
  AllocStats stats;

  int register_of(InstrId id) const { return assignment.at(id); }
};

// Lower bound on the register count: the widest program point, counting
// definitions and wide values twice, and never below the parameter width.
int RegisterLowerBound(const Function& f, const Liveness& live);

// Allocates a function that already went through Prepare. Throws
// RetryLimitExceeded when the retry cap is hit.
AllocationResult AllocateFunction(Function prepared, const TargetModel& target,
                                  const AllocatorConfig& config = {});

// Prepare followed by AllocateFunction.
AllocationResult PrepareAndAllocate(Function f, const TargetModel& target,
                                    const AllocatorConfig& config = {});

// Move emission with elision. `elided` is indexed by instruction id.
struct EmittedMoves {
  std::vector<InstrId> emitted;
  std::vector<InstrId> elided_moves;
  std::vector<bool> elided;
};

EmittedMoves EmitMoves(const Function& f, const LayoutOrder& order,
                       const std::vector<int>& assignment);

// Follows copies back to the value they duplicate. Phis resolve to the
// shared source when every input agrees, else to themselves. With
// `stop_at_swap`, swap-moves and spill-moves are their own source.
InstrId TopValue(const Function& f, InstrId id, bool stop_at_swap);

}  // namespace ifscan

#endif  // IFSCAN_ALLOCATOR_H_
