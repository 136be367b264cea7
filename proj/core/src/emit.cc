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

#include "ifscan/allocator.h"

namespace ifscan {

namespace {

bool FallsThrough(const Function& f, BlockId prev, BlockId b) {
  if (prev == kNoBlock) return false;
  const auto& preds = f.block(b).predecessors;
  if (preds.size() != 1 || preds.front() != prev) return false;
  InstrId term = f.Terminator(prev);
  return term != kNoInstr && f.instr(term).kind == Kind::kBranch;
}

}  // namespace

EmittedMoves EmitMoves(const Function& f, const LayoutOrder& order,
                       const std::vector<int>& assignment) {
  EmittedMoves out;
  out.elided.assign(f.instr_capacity(), false);
  // Register -> value whose copy it holds.
  std::vector<InstrId> holds;
  auto content = [&](InstrId id) { return TopValue(f, id, false); };
  // The upper register of a pair holds the complement, marked separately.
  auto upper = [](InstrId value) { return -2 - value; };
  auto record = [&](int r, int width, InstrId value) {
    if (r < 0) return;
    if (static_cast<int>(holds.size()) < r + width) holds.resize(r + width, kNoInstr);
    holds[r] = value;
    if (width == 2) holds[r + 1] = upper(value);
  };
  auto holding = [&](int r, int width, InstrId value) {
    if (r < 0 || r + width > static_cast<int>(holds.size())) return false;
    return holds[r] == value && (width == 1 || holds[r + 1] == upper(value));
  };

  BlockId prev = kNoBlock;
  for (BlockId b : order.order) {
    if (!FallsThrough(f, prev, b)) holds.assign(holds.size(), kNoInstr);
    for (InstrId id : f.block(b).instructions) {
      const Instruction& in = f.instr(id);
      if (!in.needs_register()) continue;
      int dst = assignment[id];
      if (IsMoveKind(in.kind) && !in.inputs.empty()) {
        InstrId src = in.inputs.front();
        InstrId value = content(src);
        bool same_reg = !f.instr(src).is_folded_constant() && assignment[src] == dst &&
                        f.instr(src).width == in.width;
        bool already = holding(dst, in.width, value);
        if (same_reg || already) {
          out.elided[id] = true;
          out.elided_moves.push_back(id);
        } else {
          out.emitted.push_back(id);
        }
        record(dst, in.width, value);
      } else {
        record(dst, in.width, content(id));
      }
    }
    prev = b;
  }
  return out;
}

}  // namespace ifscan
