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

#include <algorithm>
#include <tuple>

#include "allocator_internal.h"

namespace ifscan::internal {

namespace {

void Redirect(Function& f, InstrId user, InstrId from, InstrId to) {
  for (InstrId& src : f.instr(user).inputs) {
    if (src == from) src = to;
  }
}

std::vector<InstrId> DistinctUsers(const UsesMap& uses, InstrId id) {
  std::vector<InstrId> users;
  for (const Use& u : uses.of(id)) {
    if (users.empty() || users.back() != u.user) users.push_back(u.user);
  }
  return users;
}

InstrId InsertBefore(Function& f, Instruction proto, InstrId anchor) {
  return f.Insert(std::move(proto), f.instr(anchor).block, f.instr(anchor).position);
}

int PositionAfterDefinition(const Function& f, InstrId id) {
  const Instruction& in = f.instr(id);
  if (in.kind == Kind::kParam) return static_cast<int>(f.params.size());
  if (in.is_phi()) return f.FirstNonPhi(in.block);
  return in.position + 1;
}

std::vector<InstrId> Rematerialize(Function& f, const UsesMap& uses, InstrId c,
                                   std::set<InstrId>& split) {
  std::vector<InstrId> added;
  for (InstrId user : DistinctUsers(uses, c)) {
    auto fresh_copy = [&] {
      Instruction copy = f.instr(c);
      copy.name = f.FreshName(f.instr(c).name + ".");
      copy.inputs.clear();
      return copy;
    };
    if (f.instr(user).is_phi()) {
      const std::size_t arity = f.instr(user).inputs.size();
      for (std::size_t k = 0; k < arity; ++k) {
        if (f.instr(user).inputs[k] != c) continue;
        BlockId pred = f.instr(user).phi_blocks[k];
        int pos = static_cast<int>(f.block(pred).instructions.size()) - 1;
        InstrId dup = f.Insert(fresh_copy(), pred, pos);
        f.instr(user).inputs[k] = dup;
        added.push_back(dup);
        split.insert(dup);
      }
      continue;
    }
    InstrId dup = InsertBefore(f, fresh_copy(), user);
    Redirect(f, user, c, dup);
    added.push_back(dup);
    split.insert(dup);
  }
  f.Remove(c);
  return added;
}

bool Splittable(const Function& f, const UsesMap& uses, InstrId id,
                const std::set<InstrId>& split) {
  const Instruction& in = f.instr(id);
  if (in.removed || !in.needs_register() || split.contains(id)) return false;
  switch (in.kind) {
    case Kind::kPhiMove:
    case Kind::kSwapMove:
    case Kind::kSpillMove:
    case Kind::kFillMove:
      return false;
    default:
      break;
  }
  if (IsBlockMove(f, uses, id)) return false;
  return !uses.of(id).empty();
}

}  // namespace

std::vector<InstrId> InsertGetParamMove(Function& f, InstrId param) {
  UsesMap uses = ComputeUses(f);
  Instruction move;
  move.kind = Kind::kGetParamMove;
  move.width = f.instr(param).width;
  move.inputs = {param};
  move.name = f.FreshName(f.instr(param).name + ".");
  InstrId gpm = f.Insert(std::move(move), f.entry, static_cast<int>(f.params.size()));
  for (InstrId user : DistinctUsers(uses, param)) Redirect(f, user, param, gpm);
  return {gpm};
}

std::vector<InstrId> ConvertToRangeInvoke(Function& f, InstrId invoke) {
  return InsertBlockMoves(f, invoke);
}

std::vector<InstrId> SplitLiveRange(Function& f, const TargetModel& target,
                                    const RetryCause& cause, FillStrategy fill,
                                    std::set<InstrId>& already_split) {
  UsesMap uses = ComputeUses(f);
  const int needed_limit = ClassLimit(cause.needed);
  auto needs_fill = [&](InstrId user) {
    const Instruction& u = f.instr(user);
    return !u.is_phi() && ClassLimit(target.EncodingClassOf(u)) <= needed_limit;
  };

  // (not a constant, inserted moves, id)
  std::tuple<int, int, InstrId> best{2, 0, kNoInstr};
  for (InstrId id : cause.blockers) {
    if (!Splittable(f, uses, id, already_split)) continue;
    const Instruction& in = f.instr(id);
    std::vector<InstrId> users = DistinctUsers(uses, id);
    std::tuple<int, int, InstrId> key;
    if (in.kind == Kind::kConst) {
      key = {0, static_cast<int>(users.size()), id};
    } else if (in.kind == Kind::kParam) {
      key = {1, 1, id};
    } else {
      int fills = static_cast<int>(std::count_if(users.begin(), users.end(), needs_fill));
      key = {1, 1 + fills, id};
    }
    if (std::get<2>(best) == kNoInstr || key < best) best = key;
  }
  InstrId victim = std::get<2>(best);
  if (victim == kNoInstr) return {};

  already_split.insert(victim);
  const Instruction v = f.instr(victim);
  if (v.kind == Kind::kConst) return Rematerialize(f, uses, victim, already_split);
  if (v.kind == Kind::kParam) {
    auto added = InsertGetParamMove(f, victim);
    already_split.insert(added.begin(), added.end());
    return added;
  }

  std::vector<InstrId> users = DistinctUsers(uses, victim);
  std::vector<InstrId> added;
  Instruction spill;
  spill.kind = Kind::kSpillMove;
  spill.width = v.width;
  spill.inputs = {victim};
  spill.name = f.FreshName(v.name + ".spill");
  InstrId spill_id = f.Insert(std::move(spill), v.block, PositionAfterDefinition(f, victim));
  added.push_back(spill_id);

  std::vector<InstrId> narrow;
  for (InstrId user : users) {
    if (needs_fill(user)) {
      narrow.push_back(user);
    } else {
      Redirect(f, user, victim, spill_id);
    }
  }

  bool one_block = !narrow.empty() &&
                   std::all_of(narrow.begin(), narrow.end(), [&](InstrId u) {
                     return f.instr(u).block == f.instr(narrow.front()).block;
                   });
  bool single = false;
  switch (fill) {
    case FillStrategy::kCheapest: single = one_block && narrow.size() > 1; break;
    case FillStrategy::kPerUse: single = false; break;
    case FillStrategy::kSingleDominating: single = one_block; break;
  }

  auto make_fill = [&](InstrId anchor) {
    Instruction fm;
    fm.kind = Kind::kFillMove;
    fm.width = f.instr(victim).width;
    fm.inputs = {spill_id};
    fm.name = f.FreshName(f.instr(victim).name + ".fill");
    InstrId id = InsertBefore(f, std::move(fm), anchor);
    added.push_back(id);
    return id;
  };
  if (single) {
    InstrId first = *std::min_element(narrow.begin(), narrow.end(), [&](InstrId a, InstrId b) {
      return f.instr(a).position < f.instr(b).position;
    });
    InstrId fm = make_fill(first);
    for (InstrId user : narrow) Redirect(f, user, victim, fm);
  } else {
    for (InstrId user : narrow) Redirect(f, user, victim, make_fill(user));
  }
  already_split.insert(added.begin(), added.end());
  return added;
}

}  // namespace ifscan::internal
