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
#include <map>

#include "allocator_internal.h"

namespace ifscan::internal {

namespace {

class PreAllocator {
 public:
  PreAllocator(const AttemptContext& ctx, LatstOracle& latst) : ctx_(ctx), latst_(latst) {
    seeds_.future.assign(ctx.total, {});
    seeds_.reg.assign(ctx.f.instr_capacity(), kNoRegister);
  }

  std::variant<Seeds, RetryCause> Run() {
    if (auto fail = Parameters()) return *fail;
    if (auto fail = BlockMoves()) return *fail;
    if (auto fail = Spills()) return *fail;
    return std::move(seeds_);
  }

 private:
  const Function& f() const { return ctx_.f; }

  void Place(InstrId id, int r) {
    seeds_.reg[id] = r;
    for (int q = r; q < r + f().instr(id).width; ++q) seeds_.future[q].push_back(id);
    copies_[ctx_.content_top[id]].push_back(r);
  }

  bool HoldsCopy(InstrId id, int r) const {
    auto it = copies_.find(ctx_.content_top[id]);
    return it != copies_.end() && std::find(it->second.begin(), it->second.end(), r) != it->second.end();
  }

  bool Conflicts(InstrId id, int r) {
    for (int q = r; q < r + f().instr(id).width; ++q) {
      for (InstrId x : seeds_.future[q]) {
        if (q > r && seeds_.reg[x] < q) continue;
        if (auto same = InterfereInBlock(ctx_, id, x)) {
          if (*same) return true;
        } else if (latst_(id, x)) {
          return true;
        }
      }
    }
    return false;
  }

  RetryCause Grow(InstrId at, int by, std::string detail) {
    RetryCause cause;
    cause.kind = RetryKind::kGrowRegisters;
    cause.failing_instruction = at;
    cause.grow_by = by;
    cause.detail = std::move(detail);
    return cause;
  }

  std::optional<RetryCause> Parameters() {
    std::vector<int> regs = ParameterRegisters(f(), ctx_.total);
    for (std::size_t k = 0; k < f().params.size(); ++k) {
      InstrId p = f().params[k];
      const Instruction& in = f().instr(p);
      if (!ctx_.target.Fits(regs[k], in.width, ctx_.value_class[p])) {
        RetryCause cause;
        cause.kind = RetryKind::kSplitLiveRange;
        cause.failing_instruction = p;
        cause.needed = ctx_.value_class[p];
        cause.detail = "parameter register is outside its users' encoding class";
        return cause;
      }
      Place(p, regs[k]);
    }
    return std::nullopt;
  }

  std::optional<RetryCause> BlockMoves() {
    for (BlockId b : ctx_.order.order) {
      for (InstrId id : f().block(b).instructions) {
        const Instruction& call = f().instr(id);
        if (call.kind != Kind::kInvoke || !call.range_invoke || call.inputs.empty()) continue;
        if (!ctx_.preallocated.contains(id)) continue;
        std::vector<int> offset;
        int len = 0;
        for (InstrId m : call.inputs) {
          offset.push_back(len);
          len += f().instr(m).width;
        }
        int best = -1;
        int best_cost = 0;
        for (int base = ctx_.total - len; base >= 0; --base) {
          int cost = 0;
          for (std::size_t k = 0; k < call.inputs.size(); ++k) {
            if (!HoldsCopy(call.inputs[k], base + offset[k])) ++cost;
          }
          if (best >= 0 && cost >= best_cost) continue;
          bool ok = true;
          for (std::size_t k = 0; k < call.inputs.size() && ok; ++k) {
            InstrId m = call.inputs[k];
            int r = base + offset[k];
            ok = ctx_.target.Fits(r, f().instr(m).width, ctx_.value_class[m]) && !Conflicts(m, r);
          }
          if (!ok) continue;
          best = base;
          best_cost = cost;
          if (cost == 0) break;
        }
        if (best < 0) return Grow(id, len, "no register window for the argument block");
        for (std::size_t k = 0; k < call.inputs.size(); ++k) {
          Place(call.inputs[k], best + offset[k]);
        }
      }
    }
    return std::nullopt;
  }

  std::optional<RetryCause> Spills() {
    for (BlockId b : ctx_.order.order) {
      for (InstrId id : f().block(b).instructions) {
        const Instruction& spill = f().instr(id);
        if (spill.kind != Kind::kSpillMove) continue;
        int best = -1;
        int best_cost = 0;
        for (int r = ctx_.total - spill.width; r >= 0; --r) {
          int cost = HoldsCopy(id, r) ? 0 : 1;
          if (best >= 0 && cost >= best_cost) continue;
          if (!ctx_.target.Fits(r, spill.width, ctx_.value_class[id])) continue;
          if (Conflicts(id, r)) continue;
          best = r;
          best_cost = cost;
          if (cost == 0) break;
        }
        if (best < 0) return Grow(id, spill.width, "no register for a spill");
        Place(id, best);
      }
    }
    return std::nullopt;
  }

  const AttemptContext& ctx_;
  LatstOracle& latst_;
  Seeds seeds_;
  std::map<InstrId, std::vector<int>> copies_;
};

}  // namespace

std::variant<Seeds, RetryCause> PreAllocate(const AttemptContext& ctx, LatstOracle& latst) {
  return PreAllocator(ctx, latst).Run();
}

}  // namespace ifscan::internal
