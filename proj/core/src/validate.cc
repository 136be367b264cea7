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
#include <set>

#include "ifscan/ir.h"

namespace ifscan {

namespace {

std::vector<BlockId> ReversePostOrder(const Function& f) {
  std::vector<BlockId> post;
  std::vector<bool> seen(f.num_blocks(), false);
  std::vector<std::pair<BlockId, std::size_t>> stack;
  stack.emplace_back(f.entry, 0);
  seen[f.entry] = true;
  while (!stack.empty()) {
    auto& [b, next] = stack.back();
    const auto& succs = f.block(b).successors;
    if (next == succs.size()) {
      post.push_back(b);
      stack.pop_back();
      continue;
    }
    BlockId s = succs[next++];
    if (!seen[s]) {
      seen[s] = true;
      stack.emplace_back(s, 0);
    }
  }
  std::reverse(post.begin(), post.end());
  return post;
}

}  // namespace

// Cooper, Harvey and Kennedy's iterative scheme over reverse post-order.
std::vector<BlockId> ComputeDominators(const Function& f) {
  std::vector<BlockId> idom(f.num_blocks(), kNoBlock);
  if (f.entry == kNoBlock) return idom;
  std::vector<BlockId> rpo = ReversePostOrder(f);
  std::vector<int> index(f.num_blocks(), -1);
  for (int i = 0; i < static_cast<int>(rpo.size()); ++i) index[rpo[i]] = i;
  idom[f.entry] = f.entry;
  auto intersect = [&](BlockId a, BlockId b) {
    while (a != b) {
      while (index[a] > index[b]) a = idom[a];
      while (index[b] > index[a]) b = idom[b];
    }
    return a;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (BlockId b : rpo) {
      if (b == f.entry) continue;
      BlockId next = kNoBlock;
      for (BlockId p : f.block(b).predecessors) {
        if (index[p] < 0 || idom[p] == kNoBlock) continue;
        next = next == kNoBlock ? p : intersect(p, next);
      }
      if (next != idom[b]) {
        idom[b] = next;
        changed = true;
      }
    }
  }
  return idom;
}

bool Dominates(const std::vector<BlockId>& idom, BlockId a, BlockId b) {
  if (b == kNoBlock || idom[b] == kNoBlock) return false;
  for (;;) {
    if (a == b) return true;
    if (idom[b] == b) return false;
    b = idom[b];
  }
}

std::vector<SsaViolation> ValidateSsa(const Function& f) {
  std::vector<SsaViolation> out;
  auto report = [&](ViolationKind kind, InstrId instr, BlockId block, std::string msg) {
    out.push_back(SsaViolation{kind, instr, block, std::move(msg)});
  };
  if (f.entry == kNoBlock) {
    report(ViolationKind::kEntry, kNoInstr, kNoBlock, "function has no entry block");
    return out;
  }
  if (!f.block(f.entry).predecessors.empty()) {
    report(ViolationKind::kEntry, kNoInstr, f.entry, "entry block has predecessors");
  }

  // Edge consistency.
  for (const BasicBlock& b : f.blocks()) {
    for (BlockId s : b.successors) {
      const auto& preds = f.block(s).predecessors;
      if (std::count(preds.begin(), preds.end(), b.id) !=
          std::count(b.successors.begin(), b.successors.end(), s)) {
        report(ViolationKind::kEdges, kNoInstr, b.id,
               "edge " + b.label + "->" + f.block(s).label + " is not mirrored");
      }
    }
    for (BlockId p : b.predecessors) {
      const auto& succs = f.block(p).successors;
      if (std::find(succs.begin(), succs.end(), b.id) == succs.end()) {
        report(ViolationKind::kEdges, kNoInstr, b.id,
               "predecessor " + f.block(p).label + " does not branch to " + b.label);
      }
    }
  }

  std::vector<BlockId> idom = ComputeDominators(f);
  for (const BasicBlock& b : f.blocks()) {
    if (idom[b.id] == kNoBlock) {
      report(ViolationKind::kUnreachable, kNoInstr, b.id, "block " + b.label + " is unreachable");
    }
  }

  for (const BasicBlock& b : f.blocks()) {
    // Terminator: exactly one and last.
    int terminators = 0;
    for (InstrId id : b.instructions) {
      if (IsTerminatorKind(f.instr(id).kind)) ++terminators;
    }
    if (terminators != 1 || f.Terminator(b.id) == kNoInstr) {
      report(ViolationKind::kTerminator, kNoInstr, b.id,
             "block " + b.label + " must end in exactly one terminator");
    }
    InstrId term = f.Terminator(b.id);
    if (term != kNoInstr && f.instr(term).kind == Kind::kCondBranch) {
      const auto& t = f.instr(term).targets;
      if (t.size() == 2 && t[0] == t[1]) {
        report(ViolationKind::kBranchTargets, term, b.id,
               "condbr in " + b.label + " has identical targets");
      }
    }

    bool seen_non_phi = false;
    bool seen_non_param = false;
    for (InstrId id : b.instructions) {
      const Instruction& in = f.instr(id);
      if (in.kind == Kind::kParam) {
        if (b.id != f.entry || seen_non_param) {
          report(ViolationKind::kParamPlacement, id, b.id,
                 "param " + in.name + " is not at the head of the entry block");
        }
      } else {
        seen_non_param = true;
      }
      if (in.is_phi()) {
        if (seen_non_phi) {
          report(ViolationKind::kPhiPlacement, id, b.id,
                 "phi " + in.name + " is not in the block's phi prefix");
        }
        if (in.inputs.size() != b.predecessors.size()) {
          report(ViolationKind::kPhiArity, id, b.id,
                 "phi " + in.name + " arity differs from predecessor count");
        }
      } else {
        seen_non_phi = true;
      }
      if (in.foldable && in.kind != Kind::kConst) {
        report(ViolationKind::kFoldable, id, b.id, in.name + " is foldable but not a constant");
      }
      bool needs_value = !IsTerminatorKind(in.kind) && in.kind != Kind::kInvoke;
      if (in.width < 0 || in.width > 2 || (needs_value && in.width == 0)) {
        report(ViolationKind::kWidth, id, b.id, in.name + " has invalid width");
      }

      // Dominance of definitions over uses.
      for (std::size_t k = 0; k < in.inputs.size(); ++k) {
        const Instruction& def = f.instr(in.inputs[k]);
        bool ok;
        if (def.removed || !def.defines_value()) {
          ok = false;
        } else if (in.is_phi()) {
          BlockId pred = k < b.predecessors.size() ? b.predecessors[k] : kNoBlock;
          ok = pred != kNoBlock && Dominates(idom, def.block, pred);
        } else if (def.block == b.id) {
          ok = def.position < in.position;
        } else {
          ok = Dominates(idom, def.block, b.id);
        }
        if (!ok) {
          report(ViolationKind::kDominance, id, b.id,
                 "use of " + def.name + " in " + (in.name.empty() ? std::string(KindName(in.kind)) : in.name) +
                     " is not dominated by its definition");
        }
      }
    }
  }
  for (InstrId p : f.params) {
    if (f.instr(p).block != f.entry) {
      report(ViolationKind::kParamPlacement, p, f.instr(p).block, "param outside entry block");
    }
  }
  return out;
}

}  // namespace ifscan
