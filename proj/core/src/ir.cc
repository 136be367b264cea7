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

#include "ifscan/ir.h"

#include <algorithm>
#include <functional>
#include <map>

namespace ifscan {

std::string_view KindName(Kind kind) {
  switch (kind) {
    case Kind::kConst: return "const";
    case Kind::kUnaryOp: return "unary-op";
    case Kind::kBinaryOp: return "binary-op";
    case Kind::kMove: return "move";
    case Kind::kPhiMove: return "phi-move";
    case Kind::kSwapMove: return "swap-move";
    case Kind::kSpillMove: return "spill-move";
    case Kind::kFillMove: return "fill-move";
    case Kind::kPhi: return "phi";
    case Kind::kInvoke: return "invoke";
    case Kind::kBranch: return "branch";
    case Kind::kCondBranch: return "cond-branch";
    case Kind::kReturn: return "return";
    case Kind::kParam: return "param";
    case Kind::kGetParamMove: return "get-param-move";
  }
  return "?";
}

bool IsMoveKind(Kind kind) {
  switch (kind) {
    case Kind::kMove:
    case Kind::kPhiMove:
    case Kind::kSwapMove:
    case Kind::kSpillMove:
    case Kind::kFillMove:
    case Kind::kGetParamMove:
      return true;
    default:
      return false;
  }
}

bool IsTerminatorKind(Kind kind) {
  return kind == Kind::kBranch || kind == Kind::kCondBranch ||
         kind == Kind::kReturn;
}

std::vector<InstrId> Function::instructions() const {
  std::vector<InstrId> out;
  for (const BasicBlock& b : blocks_) {
    out.insert(out.end(), b.instructions.begin(), b.instructions.end());
  }
  return out;
}

BlockId Function::AddBlock(std::string label) {
  BasicBlock b;
  b.id = static_cast<BlockId>(blocks_.size());
  b.label = std::move(label);
  blocks_.push_back(std::move(b));
  return blocks_.back().id;
}

InstrId Function::Create(Instruction proto) {
  proto.id = static_cast<InstrId>(instrs_.size());
  if (!proto.name.empty()) names_.insert(proto.name);
  instrs_.push_back(std::move(proto));
  return instrs_.back().id;
}

InstrId Function::Insert(Instruction proto, BlockId block_id, int position) {
  if (proto.name.empty() && proto.width > 0) {
    proto.name = FreshName("t");
  }
  proto.block = block_id;
  InstrId id = Create(std::move(proto));
  auto& list = blocks_.at(block_id).instructions;
  position = std::clamp(position, 0, static_cast<int>(list.size()));
  list.insert(list.begin() + position, id);
  Renumber(block_id);
  return id;
}

void Function::Remove(InstrId id) {
  Instruction& in = instrs_.at(id);
  auto& list = blocks_.at(in.block).instructions;
  list.erase(std::remove(list.begin(), list.end(), id), list.end());
  in.removed = true;
  Renumber(in.block);
}

void Function::MoveWithinBlock(InstrId id, int position) {
  Instruction& in = instrs_.at(id);
  auto& list = blocks_.at(in.block).instructions;
  list.erase(list.begin() + in.position);
  position = std::clamp(position, 0, static_cast<int>(list.size()));
  list.insert(list.begin() + position, id);
  Renumber(in.block);
}

void Function::Renumber(BlockId block_id) {
  const auto& list = blocks_.at(block_id).instructions;
  for (int i = 0; i < static_cast<int>(list.size()); ++i) {
    instrs_[list[i]].position = i;
    instrs_[list[i]].block = block_id;
  }
}

void Function::RenumberAll() {
  for (const BasicBlock& b : blocks_) Renumber(b.id);
}

void Function::RebuildSuccessors() {
  for (BasicBlock& b : blocks_) {
    b.successors.clear();
    InstrId term = Terminator(b.id);
    if (term == kNoInstr) continue;
    for (BlockId t : instrs_[term].targets) b.successors.push_back(t);
  }
}

void Function::RebuildPredecessors() {
  for (BasicBlock& b : blocks_) b.predecessors.clear();
  for (const BasicBlock& b : blocks_) {
    for (BlockId s : b.successors) blocks_.at(s).predecessors.push_back(b.id);
  }
}

std::string Function::FreshName(std::string_view prefix) {
  for (;;) {
    std::string candidate = std::string(prefix) + std::to_string(name_counter_++);
    if (!names_.contains(candidate)) return candidate;
  }
}

std::string Function::FreshLabel(std::string_view prefix) {
  for (;;) {
    std::string candidate = std::string(prefix) + std::to_string(name_counter_++);
    bool clash = std::any_of(blocks_.begin(), blocks_.end(),
                             [&](const BasicBlock& b) { return b.label == candidate; });
    if (!clash) return candidate;
  }
}

InstrId Function::Terminator(BlockId block_id) const {
  const auto& list = blocks_.at(block_id).instructions;
  if (list.empty()) return kNoInstr;
  InstrId last = list.back();
  return IsTerminatorKind(instrs_[last].kind) ? last : kNoInstr;
}

int Function::FirstNonPhi(BlockId block_id) const {
  const auto& list = blocks_.at(block_id).instructions;
  int i = 0;
  while (i < static_cast<int>(list.size()) && instrs_[list[i]].is_phi()) ++i;
  return i;
}

UsesMap ComputeUses(const Function& f) {
  UsesMap uses(f.instr_capacity());
  for (const BasicBlock& b : f.blocks()) {
    for (InstrId id : b.instructions) {
      const Instruction& in = f.instr(id);
      for (int k = 0; k < static_cast<int>(in.inputs.size()); ++k) {
        uses.of(in.inputs[k]).push_back(Use{id, k});
      }
    }
  }
  for (std::size_t i = 0; i < uses.size(); ++i) {
    auto& list = uses.of(static_cast<InstrId>(i));
    std::sort(list.begin(), list.end());
  }
  return uses;
}

void MarkLoopHeaders(Function& f) {
  if (f.entry == kNoBlock) return;
  for (BasicBlock& b : f.blocks()) b.loop_header = false;
  enum class Color { kWhite, kGrey, kBlack };
  std::vector<Color> color(f.num_blocks(), Color::kWhite);
  // Iterative DFS: (block, next successor index).
  std::vector<std::pair<BlockId, std::size_t>> stack;
  stack.emplace_back(f.entry, 0);
  color[f.entry] = Color::kGrey;
  while (!stack.empty()) {
    auto& [b, next] = stack.back();
    const auto& succs = f.block(b).successors;
    if (next == succs.size()) {
      color[b] = Color::kBlack;
      stack.pop_back();
      continue;
    }
    BlockId s = succs[next++];
    if (color[s] == Color::kGrey) {
      f.block(s).loop_header = true;
    } else if (color[s] == Color::kWhite) {
      color[s] = Color::kGrey;
      stack.emplace_back(s, 0);
    }
  }
}

bool StructurallyEqual(const Function& a, const Function& b) {
  if (a.name != b.name || a.num_blocks() != b.num_blocks()) return false;
  if (a.params.size() != b.params.size()) return false;
  auto name_of = [](const Function& f, InstrId id) { return f.instr(id).name; };
  auto label_of = [](const Function& f, BlockId id) { return f.block(id).label; };
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const Instruction& pa = a.instr(a.params[i]);
    const Instruction& pb = b.instr(b.params[i]);
    if (pa.name != pb.name || pa.op != pb.op || pa.width != pb.width) return false;
  }
  for (std::size_t bi = 0; bi < a.num_blocks(); ++bi) {
    const BasicBlock& ba = a.blocks()[bi];
    const BasicBlock& bb = b.blocks()[bi];
    if (ba.label != bb.label) return false;
    if (ba.instructions.size() != bb.instructions.size()) return false;
    for (std::size_t k = 0; k < ba.successors.size(); ++k) {
      if (k >= bb.successors.size() ||
          label_of(a, ba.successors[k]) != label_of(b, bb.successors[k])) {
        return false;
      }
    }
    for (std::size_t k = 0; k < ba.instructions.size(); ++k) {
      const Instruction& ia = a.instr(ba.instructions[k]);
      const Instruction& ib = b.instr(bb.instructions[k]);
      if (ia.kind != ib.kind || ia.name != ib.name || ia.op != ib.op ||
          ia.width != ib.width || ia.literal != ib.literal ||
          ia.foldable != ib.foldable || ia.clobber_hint != ib.clobber_hint ||
          ia.range_invoke != ib.range_invoke ||
          ia.two_address_capable != ib.two_address_capable ||
          ia.inputs.size() != ib.inputs.size() ||
          ia.targets.size() != ib.targets.size()) {
        return false;
      }
      for (std::size_t j = 0; j < ia.inputs.size(); ++j) {
        if (name_of(a, ia.inputs[j]) != name_of(b, ib.inputs[j])) return false;
      }
      for (std::size_t j = 0; j < ia.phi_blocks.size(); ++j) {
        if (label_of(a, ia.phi_blocks[j]) != label_of(b, ib.phi_blocks[j])) return false;
      }
      for (std::size_t j = 0; j < ia.targets.size(); ++j) {
        if (label_of(a, ia.targets[j]) != label_of(b, ib.targets[j])) return false;
      }
    }
  }
  return true;
}

}  // namespace ifscan
