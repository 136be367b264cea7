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

#include "ifscan/interpreter.h"

#include <stdexcept>

#include "ifscan/target.h"

namespace ifscan {

namespace {

std::int64_t Wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }
std::uint64_t U(std::int64_t v) { return static_cast<std::uint64_t>(v); }

std::int64_t Apply(const Instruction& in, std::span<const std::int64_t> args) {
  switch (in.kind) {
    case Kind::kConst: return in.literal;
    case Kind::kUnaryOp:
      if (in.op == "neg") return Wrap(0 - U(args[0]));
      if (in.op == "not") return ~args[0];
      break;
    case Kind::kBinaryOp: {
      std::uint64_t a = U(args[0]), b = U(args[1]);
      if (in.op == "add") return Wrap(a + b);
      if (in.op == "sub") return Wrap(a - b);
      if (in.op == "mul") return Wrap(a * b);
      if (in.op == "and") return Wrap(a & b);
      if (in.op == "or") return Wrap(a | b);
      if (in.op == "xor") return Wrap(a ^ b);
      if (in.op == "lt") return args[0] < args[1] ? 1 : 0;
      if (in.op == "eq") return args[0] == args[1] ? 1 : 0;
      break;
    }
    case Kind::kInvoke: return InvokeResult(args);
    default:
      if (IsMoveKind(in.kind)) return args[0];
      break;
  }
  throw std::logic_error("cannot evaluate " + std::string(KindName(in.kind)) + " " + in.op);
}

// Shared control flow; `Mode` supplies reads, writes and phi handling.
template <typename Mode>
Execution Run(const Function& f, Mode& mode, std::int64_t step_cap) {
  Execution ex;
  BlockId block = f.entry;
  BlockId from = kNoBlock;
  std::vector<std::int64_t> args;
  try {
    while (true) {
      mode.EnterBlock(block, from);
      BlockId next = kNoBlock;
      for (InstrId id : f.block(block).instructions) {
        if (++ex.steps > step_cap) {
          ex.status = ExecStatus::kStepLimit;
          return ex;
        }
        const Instruction& in = f.instr(id);
        switch (in.kind) {
          case Kind::kPhi:
          case Kind::kParam:
            continue;
          case Kind::kBranch:
            next = in.targets[0];
            break;
          case Kind::kCondBranch:
            next = mode.Read(in.inputs[0]) != 0 ? in.targets[0] : in.targets[1];
            break;
          case Kind::kReturn:
            ex.value = in.inputs.empty() ? 0 : mode.Read(in.inputs[0]);
            return ex;
          default: {
            if (mode.Skip(id)) continue;
            args.clear();
            for (InstrId src : in.inputs) args.push_back(mode.Read(src));
            std::int64_t v = Apply(in, args);
            if (in.defines_value()) mode.Write(id, v);
            continue;
          }
        }
        break;
      }
      if (next == kNoBlock) throw std::logic_error("block without terminator");
      from = block;
      block = next;
    }
  } catch (const std::exception& e) {
    ex.status = ExecStatus::kError;
    ex.error = e.what();
  }
  return ex;
}

class SsaMode {
 public:
  SsaMode(const Function& f, std::span<const std::int64_t> params)
      : f_(f), values_(f.instr_capacity(), 0), defined_(f.instr_capacity(), false) {
    if (params.size() < f.params.size()) throw std::invalid_argument("too few parameters");
    for (std::size_t k = 0; k < f.params.size(); ++k) Write(f.params[k], params[k]);
  }

  void EnterBlock(BlockId b, BlockId from) {
    pending_.clear();
    for (InstrId id : f_.block(b).instructions) {
      const Instruction& in = f_.instr(id);
      if (!in.is_phi()) break;
      for (std::size_t k = 0; k < in.inputs.size(); ++k) {
        if (in.phi_blocks[k] == from) {
          pending_.emplace_back(id, Read(in.inputs[k]));
          break;
        }
      }
    }
    for (auto [id, v] : pending_) Write(id, v);
  }
  bool Skip(InstrId) const { return false; }
  std::int64_t Read(InstrId id) const {
    const Instruction& in = f_.instr(id);
    if (in.kind == Kind::kConst) return in.literal;
    if (!defined_[id]) throw std::logic_error("read of undefined %" + in.name);
    return values_[id];
  }
  void Write(InstrId id, std::int64_t v) {
    values_[id] = v;
    defined_[id] = true;
  }

 private:
  const Function& f_;
  std::vector<std::int64_t> values_;
  std::vector<bool> defined_;
  std::vector<std::pair<InstrId, std::int64_t>> pending_;
};

class RegisterMode {
 public:
  RegisterMode(const Function& f, const std::vector<int>& assignment, int total,
               const std::vector<bool>& elided, std::span<const std::int64_t> params)
      : f_(f), assignment_(assignment), elided_(elided),
        regs_(static_cast<std::size_t>(total), kPoison) {
    if (params.size() < f.params.size()) throw std::invalid_argument("too few parameters");
    std::vector<int> where = ParameterRegisters(f, total);
    for (std::size_t k = 0; k < f.params.size(); ++k) {
      Store(where[k], f.instr(f.params[k]).width, params[k]);
    }
  }

  void EnterBlock(BlockId, BlockId) {}
  bool Skip(InstrId id) const {
    return f_.instr(id).is_folded_constant() ||
           (id < static_cast<InstrId>(elided_.size()) && elided_[id]);
  }
  std::int64_t Read(InstrId id) const {
    const Instruction& in = f_.instr(id);
    if (in.is_folded_constant()) return in.literal;
    int r = Reg(id);
    std::int64_t v = regs_.at(r);
    // A clobbered upper half shows up as a wrong value.
    if (in.width == 2) v = Wrap(U(v) + U(regs_.at(r + 1) ^ ~v));
    return v;
  }
  void Write(InstrId id, std::int64_t v) { Store(Reg(id), f_.instr(id).width, v); }

 private:
  static constexpr std::int64_t kPoison = 0x5eed5eed5eed;

  int Reg(InstrId id) const {
    int r = assignment_.at(id);
    if (r < 0) throw std::logic_error("%" + f_.instr(id).name + " has no register");
    return r;
  }
  void Store(int r, int width, std::int64_t v) {
    regs_.at(r) = v;
    if (width == 2) regs_.at(r + 1) = ~v;
  }

  const Function& f_;
  const std::vector<int>& assignment_;
  const std::vector<bool>& elided_;
  std::vector<std::int64_t> regs_;
};

}  // namespace

std::int64_t InvokeResult(std::span<const std::int64_t> args) {
  std::uint64_t sum = 7;
  for (std::size_t i = 0; i < args.size(); ++i) sum += U(args[i]) * (i + 1);
  return Wrap(sum);
}

Execution InterpretSsa(const Function& f, std::span<const std::int64_t> params,
                       std::int64_t step_cap) {
  SsaMode mode(f, params);
  return Run(f, mode, step_cap);
}

Execution InterpretRegisters(const Function& f, const std::vector<int>& assignment,
                             int total_registers, const std::vector<bool>& elided,
                             std::span<const std::int64_t> params, std::int64_t step_cap) {
  RegisterMode mode(f, assignment, total_registers, elided, params);
  return Run(f, mode, step_cap);
}

Execution InterpretAllocation(const AllocationResult& result,
                              std::span<const std::int64_t> params, std::int64_t step_cap) {
  EmittedMoves moves = EmitMoves(result.function, result.order, result.assignment);
  return InterpretRegisters(result.function, result.assignment, result.total_registers,
                            moves.elided, params, step_cap);
}

}  // namespace ifscan
