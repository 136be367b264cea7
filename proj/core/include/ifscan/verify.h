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

#ifndef IFSCAN_VERIFY_H_
#define IFSCAN_VERIFY_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "ifscan/allocator.h"
#include "ifscan/ir.h"
#include "ifscan/prep.h"
#include "ifscan/target.h"

namespace ifscan {

// Exact liveness at every instruction, recomputed from scratch. Only values
// that receive registers are tracked. Instructions are numbered linearly in
// the given block order.
struct PointLiveness {
  std::vector<InstrId> linear;
  // Linear index per instruction id; -1 for instructions not placed.
  std::vector<int> index_of;
  std::vector<boost::dynamic_bitset<>> live_before;
  std::vector<boost::dynamic_bitset<>> live_after;
  std::vector<boost::dynamic_bitset<>> block_live_in;
  std::vector<boost::dynamic_bitset<>> block_live_out;

  // Values read, defined, or live across the instruction at `index`.
  boost::dynamic_bitset<> LiveAt(const Function& f, int index) const;
};

PointLiveness ComputePointLiveness(const Function& f, const LayoutOrder& order);

struct Segment {
  int start = 0;
  int end = 0;  // exclusive
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Interval {
  InstrId value = kNoInstr;
  int width = 1;
  std::vector<Segment> segments;
  int reg = kNoRegister;

  int start() const { return segments.front().start; }
  int end() const { return segments.back().end; }
  bool Covers(int point) const;
};

// One interval per register-carrying value, sorted by start. A value defined
// at d and last read at u spans [d, u + 1), split wherever it is dead.
std::vector<Interval> BuildIntervals(const Function& f, const LayoutOrder& order);
std::vector<Interval> BuildIntervals(const Function& f, const PointLiveness& points);

class BaselineFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Classic linear scan without spilling, lowest free register first. Reads
// happen before the write of the same instruction, so a value whose last
// use is at d hands its register to the value defined at d. Registers are
// written into each interval; the result is indexed by value id. Throws
// BaselineFailure if `num_registers` runs out.
std::vector<int> BaselineLinearScan(std::vector<Interval>& intervals, std::size_t capacity,
                                    int num_registers = kMaxRegisters);

enum class AllocViolationKind : std::uint8_t {
  kInterference,
  kUnassigned,
  kFits,
  kPair,
  kRange,
  kPhiGroup,
  kParameter,
  kInvokeArity,
};

std::string_view AllocViolationKindName(AllocViolationKind kind);

struct AllocationViolation {
  AllocViolationKind kind = AllocViolationKind::kInterference;
  InstrId a = kNoInstr;
  InstrId b = kNoInstr;
  int reg = kNoRegister;
  // Linear index of the overlap, or of the constrained instruction.
  int point = -1;
  std::string message;
};

struct VerificationReport {
  std::vector<AllocationViolation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(AllocViolationKind kind) const;
  // One violation per line; empty for a sound allocation.
  std::string ToText() const;
};

VerificationReport VerifyAllocation(const Function& f, const LayoutOrder& order,
                                    const std::vector<int>& assignment, int total_registers,
                                    const TargetModel& target);
VerificationReport VerifyAllocation(const AllocationResult& result, const TargetModel& target);

}  // namespace ifscan

#endif  // IFSCAN_VERIFY_H_
