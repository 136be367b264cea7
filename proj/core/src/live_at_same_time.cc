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

#include "ifscan/live_at_same_time.h"

#include <algorithm>
#include <utility>

namespace ifscan {

namespace {

bool ReadsInBlock(const Instruction& user, InstrId value) {
  if (user.is_phi()) return false;
  return std::find(user.inputs.begin(), user.inputs.end(), value) != user.inputs.end();
}

bool ScanSameBlock(const Function& f, const Liveness& live, InstrId lhs, InstrId rhs,
                   BlockId block) {
  // Phis of one block are all defined on entry.
  if (f.instr(lhs).is_phi() && f.instr(rhs).is_phi()) return true;
  bool lhs_out = live.IsLiveOut(block, lhs);
  bool rhs_out = live.IsLiveOut(block, rhs);
  if (lhs_out && rhs_out) return true;
  const auto& list = f.block(block).instructions;
  if (!lhs_out && !rhs_out) {
    InstrId first = kNoInstr, last = kNoInstr;
    for (InstrId id : list) {
      if (id == lhs || id == rhs) {
        first = id;
        last = id == lhs ? rhs : lhs;
        break;
      }
    }
    for (auto it = list.rbegin(); it != list.rend(); ++it) {
      if (*it == last) return false;
      if (ReadsInBlock(f.instr(*it), first)) return true;
    }
    return false;
  }
  if (lhs_out) std::swap(lhs, rhs);
  // lhs dies in the block; rhs is live from its definition to the end.
  for (auto it = list.rbegin(); it != list.rend(); ++it) {
    if (*it == rhs) return false;
    if (*it == lhs || ReadsInBlock(f.instr(*it), lhs)) return true;
  }
  return false;
}

bool ScanInBlock(const Function& f, const Liveness& live, InstrId lhs, InstrId rhs,
                 BlockId lhs_block) {
  if (!live.IsLiveIn(lhs_block, rhs)) return false;
  if (live.IsLiveOut(lhs_block, rhs)) return true;
  const auto& list = f.block(lhs_block).instructions;
  for (auto it = list.rbegin(); it != list.rend(); ++it) {
    if (*it == lhs) return false;
    if (ReadsInBlock(f.instr(*it), rhs)) return true;
  }
  return false;
}

bool UsedInBlockAfter(const Function& f, const UsesMap& uses, InstrId value, BlockId block,
                      int position) {
  for (const Use& u : uses.of(value)) {
    const Instruction& user = f.instr(u.user);
    if (user.block == block && !user.is_phi() && user.position > position) return true;
  }
  return false;
}

bool OrderedSameBlock(const Function& f, const Liveness& live, const UsesMap& uses,
                      InstrId lhs, InstrId rhs, BlockId block) {
  // Phis of one block are all defined on entry.
  if (f.instr(lhs).is_phi() && f.instr(rhs).is_phi()) return true;
  bool lhs_out = live.IsLiveOut(block, lhs);
  bool rhs_out = live.IsLiveOut(block, rhs);
  if (lhs_out && rhs_out) return true;
  if (!lhs_out && !rhs_out) {
    bool lhs_first = f.instr(lhs).position < f.instr(rhs).position;
    InstrId first = lhs_first ? lhs : rhs;
    InstrId last = lhs_first ? rhs : lhs;
    return UsedInBlockAfter(f, uses, first, block, f.instr(last).position);
  }
  if (lhs_out) std::swap(lhs, rhs);
  if (f.instr(lhs).position > f.instr(rhs).position) return true;
  return UsedInBlockAfter(f, uses, lhs, block, f.instr(rhs).position);
}

bool OrderedInBlock(const Function& f, const Liveness& live, const UsesMap& uses, InstrId lhs,
                    InstrId rhs, BlockId lhs_block) {
  if (!live.IsLiveIn(lhs_block, rhs)) return false;
  if (live.IsLiveOut(lhs_block, rhs)) return true;
  return UsedInBlockAfter(f, uses, rhs, lhs_block, f.instr(lhs).position);
}

}  // namespace

bool LiveAtTheSameTimeScan(const Function& f, const Liveness& live, InstrId lhs, InstrId rhs) {
  BlockId lb = f.instr(lhs).block;
  BlockId rb = f.instr(rhs).block;
  if (lb == rb) return ScanSameBlock(f, live, lhs, rhs, lb);
  return ScanInBlock(f, live, lhs, rhs, lb) || ScanInBlock(f, live, rhs, lhs, rb);
}

bool LiveAtTheSameTimeOrdered(const Function& f, const Liveness& live, const UsesMap& uses,
                              InstrId lhs, InstrId rhs) {
  BlockId lb = f.instr(lhs).block;
  BlockId rb = f.instr(rhs).block;
  if (lb == rb) return OrderedSameBlock(f, live, uses, lhs, rhs, lb);
  return OrderedInBlock(f, live, uses, lhs, rhs, lb) ||
         OrderedInBlock(f, live, uses, rhs, lhs, rb);
}

bool LatstOracle::operator()(InstrId lhs, InstrId rhs) {
  bool same = f_.instr(lhs).block == f_.instr(rhs).block;
  (same ? same_block_ : cross_block_)++;
  bool result = variant_ == LatstVariant::kOrdered
                    ? LiveAtTheSameTimeOrdered(f_, live_, uses_, lhs, rhs)
                    : LiveAtTheSameTimeScan(f_, live_, lhs, rhs);
  if (cross_check_) {
    bool scan = LiveAtTheSameTimeScan(f_, live_, lhs, rhs);
    bool ordered = LiveAtTheSameTimeOrdered(f_, live_, uses_, lhs, rhs);
    if (scan != ordered) ++disagreements_;
    if (scan != LiveAtTheSameTimeScan(f_, live_, rhs, lhs) ||
        ordered != LiveAtTheSameTimeOrdered(f_, live_, uses_, rhs, lhs)) {
      ++asymmetries_;
    }
  }
  if (observer_) observer_(LatstQuery{lhs, rhs, same, result});
  return result;
}

}  // namespace ifscan
