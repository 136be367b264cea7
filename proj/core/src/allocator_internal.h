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

#ifndef IFSCAN_SRC_ALLOCATOR_INTERNAL_H_
#define IFSCAN_SRC_ALLOCATOR_INTERNAL_H_

#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "ifscan/allocator.h"

namespace ifscan::internal {

// A phi and the phi-moves feeding it share one register.
struct PhiGroups {
  std::vector<int> group_of;  // -1 outside any group
  std::vector<std::vector<InstrId>> members;
};

PhiGroups ComputePhiGroups(const Function& f);

// Narrowest class among the result class of `id` and the operand classes of
// every user.
EncodingClass ValueClass(const Function& f, const UsesMap& uses, const TargetModel& target,
                         InstrId id, bool include_invokes = true);

struct AttemptContext {
  const Function& f;
  const TargetModel& target;
  const AllocatorConfig& config;
  const Liveness& live;
  const UsesMap& uses;
  const LayoutOrder& order;
  int total = 0;
  std::vector<EncodingClass> value_class;
  PhiGroups groups;
  std::vector<InstrId> coalesce_top;
  std::vector<InstrId> content_top;
  // Range invokes whose argument windows are placed before the scan.
  std::set<InstrId> preallocated;
};

struct Seeds {
  std::vector<std::vector<InstrId>> future;  // per register
  std::vector<int> reg;                      // per instruction
};

// Interference of two non-phi values defined in one block, read off their
// positions; nullopt when the pair needs the general query.
std::optional<bool> InterfereInBlock(const AttemptContext& ctx, InstrId a, InstrId b);

std::variant<Seeds, RetryCause> PreAllocate(const AttemptContext& ctx, LatstOracle& latst);

struct ScanOutcome {
  std::vector<int> reg;
  std::int64_t instructions_processed = 0;
  std::int64_t max_calls_per_instruction = 0;
  std::int64_t disjointness_violations = 0;
};

std::variant<ScanOutcome, RetryCause> RunMainLoop(const AttemptContext& ctx, Seeds seeds,
                                                  LatstOracle& latst, ScanOutcome& counters);

// Remedies. Each returns the ids of inserted instructions.
std::vector<InstrId> InsertGetParamMove(Function& f, InstrId param);
std::vector<InstrId> ConvertToRangeInvoke(Function& f, InstrId invoke);
// Splits one of `cause.blockers`; empty result when none qualifies.
std::vector<InstrId> SplitLiveRange(Function& f, const TargetModel& target,
                                    const RetryCause& cause, FillStrategy fill,
                                    std::set<InstrId>& already_split);

}  // namespace ifscan::internal

#endif  // IFSCAN_SRC_ALLOCATOR_INTERNAL_H_
