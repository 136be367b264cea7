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

#ifndef IFSCAN_IR_H_
#define IFSCAN_IR_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace ifscan {

using InstrId = std::int32_t;
using BlockId = std::int32_t;

inline constexpr InstrId kNoInstr = -1;
inline constexpr BlockId kNoBlock = -1;

enum class Kind : std::uint8_t {
  kConst,
  kUnaryOp,
  kBinaryOp,
  kMove,
  kPhiMove,
  kSwapMove,
  kSpillMove,
  kFillMove,
  kPhi,
  kInvoke,
  kBranch,
  kCondBranch,
  kReturn,
  kParam,
  kGetParamMove,
};

std::string_view KindName(Kind kind);

// True for every copy-like kind: move, phi-move, swap-move, spill-move,
// fill-move and get-param-move.
bool IsMoveKind(Kind kind);
bool IsTerminatorKind(Kind kind);

struct Instruction {
  InstrId id = kNoInstr;
  Kind kind = Kind::kConst;
  std::string name;
  // Mnemonic for unary/binary ops ("add", "lt", ...); type name for params.
  std::string op;
  // Registers produced: 0 for instructions without a result, else 1 or 2.
  int width = 1;
  std::vector<InstrId> inputs;
  // Phi only: incoming block of each input, parallel to `inputs`.
  std::vector<BlockId> phi_blocks;
  // Branch targets, in operand order.
  std::vector<BlockId> targets;
  std::int64_t literal = 0;

  BlockId block = kNoBlock;
  int position = 0;

  bool foldable = false;
  bool clobber_hint = false;
  bool range_invoke = false;
  bool two_address_capable = false;
  bool removed = false;

  bool defines_value() const { return width > 0; }
  bool is_phi() const { return kind == Kind::kPhi; }
  bool is_folded_constant() const { return kind == Kind::kConst && foldable; }
  // Non-folded definitions are the ones that receive registers.
  bool needs_register() const { return defines_value() && !is_folded_constant(); }
};

struct BasicBlock {
  BlockId id = kNoBlock;
  std::string label;
  std::vector<InstrId> instructions;
  std::vector<BlockId> successors;
  std::vector<BlockId> predecessors;
  bool loop_header = false;
};

class Function {
 public:
  std::string name;
  std::vector<InstrId> params;
  BlockId entry = kNoBlock;

  Instruction& instr(InstrId id) { return instrs_.at(id); }
  const Instruction& instr(InstrId id) const { return instrs_.at(id); }
  BasicBlock& block(BlockId id) { return blocks_.at(id); }
  const BasicBlock& block(BlockId id) const { return blocks_.at(id); }

  // Arena sizes; ids are dense indices and removed instructions keep theirs.
  std::size_t instr_capacity() const { return instrs_.size(); }
  std::size_t num_blocks() const { return blocks_.size(); }
  const std::vector<BasicBlock>& blocks() const { return blocks_; }
  std::vector<BasicBlock>& blocks() { return blocks_; }

  // Live instructions in block order, then position order.
  std::vector<InstrId> instructions() const;

  BlockId AddBlock(std::string label);
  // Creates an instruction and inserts it into `block` at `position`
  // (clamped to the block's size). Returns its id.
  InstrId Insert(Instruction proto, BlockId block, int position);
  // Appends to the arena without placing it in a block (parser use).
  InstrId Create(Instruction proto);
  void Remove(InstrId id);
  // Moves an existing instruction to `position` within its block.
  void MoveWithinBlock(InstrId id, int position);

  void Renumber(BlockId block);
  void RenumberAll();

  // Successor lists come from terminators. Phi inputs are keyed to
  // predecessor order, so RebuildPredecessors is only safe before phis are
  // bound.
  void RebuildSuccessors();
  void RebuildPredecessors();

  std::string FreshName(std::string_view prefix);
  std::string FreshLabel(std::string_view prefix);

  InstrId Terminator(BlockId block) const;
  // Index of the first non-phi instruction.
  int FirstNonPhi(BlockId block) const;

 private:
  std::vector<Instruction> instrs_;
  std::vector<BasicBlock> blocks_;
  std::unordered_set<std::string> names_;
  std::size_t name_counter_ = 0;
};

// mapping instruction id -> {(user, input index)}
struct Use {
  InstrId user = kNoInstr;
  int index = 0;
  friend bool operator==(const Use&, const Use&) = default;
  friend auto operator<=>(const Use&, const Use&) = default;
};

class UsesMap {
 public:
  UsesMap() = default;
  explicit UsesMap(std::size_t capacity) : uses_(capacity) {}

  const std::vector<Use>& of(InstrId id) const { return uses_.at(id); }
  std::vector<Use>& of(InstrId id) { return uses_.at(id); }
  std::size_t size() const { return uses_.size(); }

 private:
  std::vector<std::vector<Use>> uses_;
};

UsesMap ComputeUses(const Function& f);

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Function ParseFunction(std::string_view text);
std::string PrintFunction(const Function& f);

enum class ViolationKind : std::uint8_t {
  kTerminator,
  kEdges,
  kEntry,
  kUnreachable,
  kParamPlacement,
  kPhiPlacement,
  kPhiArity,
  kDominance,
  kFoldable,
  kWidth,
  kBranchTargets,
};

struct SsaViolation {
  ViolationKind kind;
  InstrId instr = kNoInstr;
  BlockId block = kNoBlock;
  std::string message;
};

std::vector<SsaViolation> ValidateSsa(const Function& f);

// Immediate dominators indexed by block id (entry maps to itself, unreachable
// blocks to kNoBlock).
std::vector<BlockId> ComputeDominators(const Function& f);
bool Dominates(const std::vector<BlockId>& idom, BlockId a, BlockId b);

// Marks targets of DFS back edges as loop headers.
void MarkLoopHeaders(Function& f);

// Structural equality up to instruction ids (compares names, ops, operands,
// block layout).
bool StructurallyEqual(const Function& a, const Function& b);

}  // namespace ifscan

#endif  // IFSCAN_IR_H_
