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

#include "ifscan/prep.h"

#include <algorithm>
#include <deque>
#include <set>

#include "ifscan/target.h"

namespace ifscan {

Function HoistConstants(Function f) {
  if (f.entry == kNoBlock) return f;
  int insert_at = static_cast<int>(f.params.size());
  for (BasicBlock& b : f.blocks()) {
    if (b.id == f.entry) continue;
    std::vector<InstrId> consts;
    for (InstrId id : b.instructions) {
      if (f.instr(id).kind == Kind::kConst) consts.push_back(id);
    }
    for (InstrId id : consts) {
      auto& list = b.instructions;
      list.erase(std::find(list.begin(), list.end(), id));
      auto& entry = f.block(f.entry).instructions;
      entry.insert(entry.begin() + insert_at++, id);
    }
    f.Renumber(b.id);
  }
  f.Renumber(f.entry);
  return f;
}

Function SplitCriticalEdges(Function f, int* inserted) {
  int count = 0;
  const std::size_t original = f.num_blocks();
  for (BlockId p = 0; p < static_cast<BlockId>(original); ++p) {
    if (f.block(p).successors.size() < 2) continue;
    for (std::size_t k = 0; k < f.block(p).successors.size(); ++k) {
      BlockId s = f.block(p).successors[k];
      if (f.block(s).predecessors.size() < 2) continue;
      BlockId n = f.AddBlock(f.FreshLabel("split"));
      Instruction br;
      br.kind = Kind::kBranch;
      br.width = 0;
      br.targets = {s};
      f.Insert(std::move(br), n, 0);
      f.block(n).predecessors = {p};
      f.block(n).successors = {s};

      f.block(p).successors[k] = n;
      f.instr(f.Terminator(p)).targets[k] = n;

      auto& preds = f.block(s).predecessors;
      auto it = std::find(preds.begin(), preds.end(), p);
      std::size_t slot = static_cast<std::size_t>(it - preds.begin());
      *it = n;
      for (InstrId id : f.block(s).instructions) {
        Instruction& in = f.instr(id);
        if (!in.is_phi()) break;
        if (slot < in.phi_blocks.size()) in.phi_blocks[slot] = n;
      }
      ++count;
    }
  }
  if (inserted) *inserted = count;
  MarkLoopHeaders(f);
  return f;
}

namespace {

struct Copy {
  InstrId dst_phi;
  InstrId src;
};

}  // namespace

Function InsertParallelCopies(Function f) {
  const std::size_t num_blocks = f.num_blocks();
  for (BlockId b = 0; b < static_cast<BlockId>(num_blocks); ++b) {
    std::vector<InstrId> phis;
    for (InstrId id : f.block(b).instructions) {
      if (!f.instr(id).is_phi()) break;
      phis.push_back(id);
    }
    if (phis.empty()) continue;
    const std::vector<BlockId> preds = f.block(b).predecessors;
    for (std::size_t k = 0; k < preds.size(); ++k) {
      BlockId p = preds[k];
      std::vector<Copy> pending;
      for (InstrId phi : phis) pending.push_back({phi, f.instr(phi).inputs[k]});

      auto insert_before_terminator = [&](Instruction in) {
        int pos = static_cast<int>(f.block(p).instructions.size());
        if (f.Terminator(p) != kNoInstr) --pos;
        return f.Insert(std::move(in), p, pos);
      };
      auto is_pending_source = [&](InstrId value, std::size_t except) {
        for (std::size_t j = 0; j < pending.size(); ++j) {
          if (j != except && pending[j].src == value) return true;
        }
        return false;
      };

      while (!pending.empty()) {
        std::size_t ready = pending.size();
        for (std::size_t j = 0; j < pending.size(); ++j) {
          if (!is_pending_source(pending[j].dst_phi, j)) {
            ready = j;
            break;
          }
        }
        if (ready == pending.size()) {
          // Only cycles remain: save the first destination's current value.
          InstrId saved = pending.front().dst_phi;
          Instruction swap;
          swap.kind = Kind::kSwapMove;
          swap.width = f.instr(saved).width;
          swap.inputs = {saved};
          swap.name = f.FreshName("sw");
          InstrId temp = insert_before_terminator(std::move(swap));
          for (std::size_t j = 1; j < pending.size(); ++j) {
            if (pending[j].src == saved) pending[j].src = temp;
          }
          ready = 0;
        }
        Copy c = pending[ready];
        pending.erase(pending.begin() + ready);
        Instruction move;
        move.kind = Kind::kPhiMove;
        move.width = f.instr(c.dst_phi).width;
        move.inputs = {c.src};
        move.name = f.FreshName("pm");
        InstrId pm = insert_before_terminator(std::move(move));
        f.instr(c.dst_phi).inputs[k] = pm;
      }
    }
  }
  return f;
}

Function SplitConstants(Function f, int threshold) {
  UsesMap uses = ComputeUses(f);
  std::vector<InstrId> consts;
  for (InstrId id : f.instructions()) {
    const Instruction& in = f.instr(id);
    if (in.kind == Kind::kConst && !in.foldable) consts.push_back(id);
  }
  for (InstrId c : consts) {
    std::vector<InstrId> users;
    for (const Use& u : uses.of(c)) {
      if (users.empty() || users.back() != u.user) users.push_back(u.user);
    }
    int n = static_cast<int>(users.size());
    if (n == 0 || n >= threshold) continue;
    for (InstrId user : users) {
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
          int pos = static_cast<int>(f.block(pred).instructions.size());
          if (f.Terminator(pred) != kNoInstr) --pos;
          f.instr(user).inputs[k] = f.Insert(fresh_copy(), pred, pos);
        }
        continue;
      }
      // A user reading the constant twice shares one copy.
      InstrId dup = f.Insert(fresh_copy(), f.instr(user).block, f.instr(user).position);
      for (InstrId& src : f.instr(user).inputs) {
        if (src == c) src = dup;
      }
    }
    f.Remove(c);
  }
  return f;
}

Function SinkToFirstUse(Function f) {
  UsesMap uses = ComputeUses(f);
  for (BasicBlock& b : f.blocks()) {
    std::vector<InstrId> order = b.instructions;
    // The copies ending the block stay together.
    int copies = static_cast<int>(order.size());
    for (InstrId id : order) {
      Kind k = f.instr(id).kind;
      if (k == Kind::kPhiMove || k == Kind::kSwapMove) {
        copies = f.instr(id).position;
        break;
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const Instruction& in = f.instr(*it);
      bool sinkable = (in.kind == Kind::kConst && !in.foldable) ||
                      in.kind == Kind::kUnaryOp || in.kind == Kind::kBinaryOp;
      if (!sinkable) continue;
      int first = -1;
      for (const Use& u : uses.of(*it)) {
        const Instruction& user = f.instr(u.user);
        if (user.block != b.id || user.is_phi()) continue;
        if (first < 0 || user.position < first) first = user.position;
      }
      if (first >= 0 && in.position < copies) first = std::min(first, copies);
      if (first > in.position + 1) f.MoveWithinBlock(*it, first - 1);
    }
  }
  return f;
}

std::vector<InstrId> InsertBlockMoves(Function& f, InstrId invoke) {
  std::vector<InstrId> moves;
  f.instr(invoke).range_invoke = true;
  for (std::size_t k = 0; k < f.instr(invoke).inputs.size(); ++k) {
    InstrId src = f.instr(invoke).inputs[k];
    Instruction move;
    move.kind = Kind::kMove;
    move.width = f.instr(src).width;
    move.inputs = {src};
    move.name = f.FreshName("bm");
    InstrId bm = f.Insert(std::move(move), f.instr(invoke).block, f.instr(invoke).position);
    f.instr(invoke).inputs[k] = bm;
    moves.push_back(bm);
  }
  return moves;
}

Function InsertRangeBlockMoves(Function f) {
  for (InstrId id : f.instructions()) {
    const Instruction& call = f.instr(id);
    if (call.kind != Kind::kInvoke) continue;
    int regs = 0;
    for (InstrId src : call.inputs) regs += std::max(1, f.instr(src).width);
    if (call.range_invoke || regs > kMaxNonRangeInvokeRegisters) InsertBlockMoves(f, id);
  }
  return f;
}

bool IsBlockMove(const Function& f, const UsesMap& uses, InstrId id) {
  const Instruction& in = f.instr(id);
  if (in.kind != Kind::kMove) return false;
  const auto& u = uses.of(id);
  if (u.size() != 1) return false;
  const Instruction& user = f.instr(u.front().user);
  return user.kind == Kind::kInvoke && user.range_invoke;
}

Function Prepare(Function f, const PrepOptions& options) {
  f = HoistConstants(std::move(f));
  f = SplitCriticalEdges(std::move(f));
  f = InsertParallelCopies(std::move(f));
  f = SplitConstants(std::move(f), options.constant_split_threshold);
  if (options.sink) f = SinkToFirstUse(std::move(f));
  f = InsertRangeBlockMoves(std::move(f));
  MarkLoopHeaders(f);
  f.RenumberAll();
  return f;
}

LayoutOrder ComputeLayoutOrder(const Function& f, OrderKind kind) {
  LayoutOrder out;
  out.kind = kind;
  if (f.entry == kNoBlock) return out;

  // DFS for post-order and back edges.
  const std::size_t n = f.num_blocks();
  std::vector<int> state(n, 0);  // 0 white, 1 on stack, 2 done
  std::vector<BlockId> post;
  std::set<std::pair<BlockId, BlockId>> back_edges;
  std::vector<std::pair<BlockId, std::size_t>> stack{{f.entry, 0}};
  state[f.entry] = 1;
  while (!stack.empty()) {
    auto& [b, next] = stack.back();
    const auto& succs = f.block(b).successors;
    if (next == succs.size()) {
      state[b] = 2;
      post.push_back(b);
      stack.pop_back();
      continue;
    }
    BlockId s = succs[next++];
    if (state[s] == 1) {
      back_edges.insert({b, s});
    } else if (state[s] == 0) {
      state[s] = 1;
      stack.emplace_back(s, 0);
    }
  }

  if (kind == OrderKind::kReversePostOrder) {
    out.order.assign(post.rbegin(), post.rend());
    return out;
  }

  // A block becomes ready once all of its forward predecessors are placed,
  // so every block follows its dominators.
  std::vector<int> waiting(n, 0);
  for (const BasicBlock& b : f.blocks()) {
    for (BlockId p : b.predecessors) {
      if (!back_edges.contains({p, b.id})) ++waiting[b.id];
    }
  }
  auto is_cold = [&](BlockId b) {
    const auto& list = f.block(b).instructions;
    return list.size() == 1 && f.instr(list.front()).kind == Kind::kReturn;
  };
  std::vector<bool> placed(n, false);
  std::deque<BlockId> queue{f.entry};
  while (!queue.empty()) {
    BlockId b = queue.front();
    queue.pop_front();
    if (placed[b]) continue;
    placed[b] = true;
    out.order.push_back(b);
    std::vector<BlockId> normal, headers;
    for (BlockId s : f.block(b).successors) {
      if (back_edges.contains({b, s})) continue;
      if (--waiting[s] != 0) continue;
      if (is_cold(s)) {
        queue.push_back(s);
      } else if (f.block(s).loop_header) {
        headers.push_back(s);
      } else {
        normal.push_back(s);
      }
    }
    for (auto it = normal.rbegin(); it != normal.rend(); ++it) queue.push_front(*it);
    for (auto it = headers.rbegin(); it != headers.rend(); ++it) queue.push_front(*it);
  }
  return out;
}

}  // namespace ifscan
