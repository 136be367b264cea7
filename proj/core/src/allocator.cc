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

#include <algorithm>
#include <chrono>
#include <optional>
#include <sstream>

#include "allocator_internal.h"

namespace ifscan {

std::string_view RetryKindName(RetryKind kind) {
  switch (kind) {
    case RetryKind::kGrowRegisters: return "GrowRegisters";
    case RetryKind::kSplitLiveRange: return "SplitLiveRange";
    case RetryKind::kPreAllocateBlockMoves: return "PreAllocateBlockMoves";
  }
  return "?";
}

std::string DescribeRetry(const Function& f, const RetryCause& cause) {
  std::ostringstream os;
  os << RetryKindName(cause.kind);
  if (cause.failing_instruction != kNoInstr) {
    os << " at " << f.instr(cause.failing_instruction).name;
  }
  os << " (" << EncodingClassName(cause.needed) << ")";
  if (cause.grow_by) os << " +" << cause.grow_by;
  if (!cause.detail.empty()) os << ": " << cause.detail;
  os << " live={";
  for (std::size_t k = 0; k < cause.live_set_at_failure.size(); ++k) {
    os << (k ? "," : "") << f.instr(cause.live_set_at_failure[k]).name;
  }
  os << "}";
  return os.str();
}

namespace {

class TopResolver {
 public:
  TopResolver(const Function& f, bool stop_at_swap)
      : f_(f), stop_(stop_at_swap), memo_(f.instr_capacity(), kNoInstr),
        on_stack_(f.instr_capacity(), false) {}

  InstrId Resolve(InstrId id) {
    if (memo_[id] != kNoInstr) return memo_[id];
    if (on_stack_[id]) return id;
    const Instruction& in = f_.instr(id);
    InstrId top = id;
    bool stops = stop_ && (in.kind == Kind::kSwapMove || in.kind == Kind::kSpillMove);
    if (IsMoveKind(in.kind) && !stops && !in.inputs.empty()) {
      on_stack_[id] = true;
      top = Resolve(in.inputs.front());
      on_stack_[id] = false;
    } else if (in.is_phi()) {
      on_stack_[id] = true;
      InstrId common = kNoInstr;
      bool agree = true;
      for (InstrId src : in.inputs) {
        InstrId t = Resolve(src);
        if (t == id) continue;
        if (common == kNoInstr) {
          common = t;
        } else if (common != t) {
          agree = false;
        }
      }
      on_stack_[id] = false;
      if (agree && common != kNoInstr) top = common;
    }
    memo_[id] = top;
    return top;
  }

 private:
  const Function& f_;
  bool stop_;
  std::vector<InstrId> memo_;
  std::vector<bool> on_stack_;
};

std::vector<InstrId> AllTops(const Function& f, bool stop_at_swap) {
  TopResolver r(f, stop_at_swap);
  std::vector<InstrId> out(f.instr_capacity(), kNoInstr);
  for (InstrId id : f.instructions()) out[id] = r.Resolve(id);
  return out;
}

}  // namespace

InstrId TopValue(const Function& f, InstrId id, bool stop_at_swap) {
  return TopResolver(f, stop_at_swap).Resolve(id);
}

int RegisterLowerBound(const Function& f, const Liveness& live) {
  int best = 0;
  for (InstrId p : f.params) best += f.instr(p).width;
  for (const BasicBlock& b : f.blocks()) {
    ValueSet now = live.live_out[b.id];
    int width = 0;
    for (auto i = now.find_first(); i != ValueSet::npos; i = now.find_next(i)) {
      width += f.instr(static_cast<InstrId>(i)).width;
    }
    for (auto it = b.instructions.rbegin(); it != b.instructions.rend(); ++it) {
      const Instruction& in = f.instr(*it);
      if (in.needs_register()) {
        int here = width + (now.test(in.id) ? 0 : in.width);
        best = std::max(best, here);
        if (now.test(in.id)) {
          now.reset(in.id);
          width -= in.width;
        }
      }
      if (in.is_phi()) continue;
      for (InstrId src : in.inputs) {
        const Instruction& s = f.instr(src);
        if (s.needs_register() && !now.test(src)) {
          now.set(src);
          width += s.width;
        }
      }
    }
  }
  return best;
}

namespace internal {

PhiGroups ComputePhiGroups(const Function& f) {
  PhiGroups g;
  g.group_of.assign(f.instr_capacity(), -1);
  for (InstrId id : f.instructions()) {
    const Instruction& in = f.instr(id);
    if (!in.is_phi()) continue;
    int index = static_cast<int>(g.members.size());
    std::vector<InstrId> members{id};
    g.group_of[id] = index;
    for (InstrId src : in.inputs) {
      if (f.instr(src).kind != Kind::kPhiMove || g.group_of[src] != -1) continue;
      g.group_of[src] = index;
      members.push_back(src);
    }
    g.members.push_back(std::move(members));
  }
  return g;
}

EncodingClass ValueClass(const Function& f, const UsesMap& uses, const TargetModel& target,
                         InstrId id, bool include_invokes) {
  const Instruction& in = f.instr(id);
  EncodingClass c = target.ResultClassOf(in);
  for (const Use& u : uses.of(id)) {
    const Instruction& user = f.instr(u.user);
    if (user.is_phi()) continue;
    if (!include_invokes && user.kind == Kind::kInvoke && !user.range_invoke) continue;
    c = Narrowest(c, target.EncodingClassOf(user));
  }
  return c;
}

std::optional<bool> InterfereInBlock(const AttemptContext& ctx, InstrId a, InstrId b) {
  const Instruction& x = ctx.f.instr(a);
  const Instruction& y = ctx.f.instr(b);
  if (x.block != y.block || x.is_phi() || y.is_phi()) return std::nullopt;
  const Instruction& early = x.position < y.position ? x : y;
  const Instruction& late = x.position < y.position ? y : x;
  if (ctx.live.IsLiveOut(early.block, early.id)) return true;
  for (const Use& u : ctx.uses.of(early.id)) {
    const Instruction& user = ctx.f.instr(u.user);
    if (user.block == early.block && !user.is_phi() && user.position > late.position) return true;
  }
  return false;
}

namespace {

class Scanner {
 public:
  Scanner(const AttemptContext& ctx, Seeds seeds, LatstOracle& latst, ScanOutcome& out)
      : ctx_(ctx), f_(ctx.f), latst_(latst), out_(out) {
    const std::size_t n = f_.instr_capacity();
    future_ = std::move(seeds.future);
    future_.resize(ctx.total);
    reg_ = std::move(seeds.reg);
    reg_.resize(n, kNoRegister);
    active_.assign(ctx.total, kNoInstr);
    last_active_.assign(ctx.total, kNoInstr);
    top_value_.assign(ctx.total, kNoInstr);
    in_future_.assign(n, false);
    for (const auto& list : future_) {
      for (InstrId id : list) in_future_[id] = true;
    }
    live_outs_ = ValueSet(n);
    visited_.assign(f_.num_blocks(), false);
  }

  std::optional<RetryCause> Run() {
    for (BlockId b : ctx_.order.order) {
      cur_ = b;
      const ValueSet& live_ins = ctx_.live.live_in[b];
      if (auto fail = ExpireAndStart(live_ins)) return fail;
      for (InstrId id : f_.block(b).instructions) {
        const Instruction& in = f_.instr(id);
        std::int64_t before = latst_.calls();
        ++out_.instructions_processed;
        if (!in.inputs.empty() && !in.is_phi()) ExpireForInstruction(in);
        if (in.needs_register()) {
          if (auto fail = AllocateRegister(id)) return fail;
          live_outs_.set(id);
          if (ctx_.uses.of(id).empty()) {
            live_outs_.reset(id);
            Free(id);
          }
        }
        out_.max_calls_per_instruction =
            std::max(out_.max_calls_per_instruction, latst_.calls() - before);
        if (ctx_.config.debug_checks) CheckDisjoint();
      }
      visited_[b] = true;
    }
    return std::nullopt;
  }

  std::vector<int> TakeAssignment() { return std::move(reg_); }

 private:
  int Width(InstrId id) const { return f_.instr(id).width; }

  void Occupy(InstrId id, int r) {
    reg_[id] = r;
    for (int q = r; q < r + Width(id); ++q) {
      active_[q] = id;
      top_value_[q] = ctx_.coalesce_top[id];
    }
  }

  void Free(InstrId id) {
    int r = reg_[id];
    for (int q = r; q < r + Width(id); ++q) {
      if (active_[q] == id) active_[q] = kNoInstr;
      last_active_[q] = id;
    }
  }

  void Pause(InstrId id) {
    Free(id);
    int r = reg_[id];
    for (int q = r; q < r + Width(id); ++q) future_[q].push_back(id);
    in_future_[id] = true;
  }

  void Resume(InstrId id) {
    int r = reg_[id];
    for (int q = r; q < r + Width(id); ++q) {
      auto& list = future_[q];
      list.erase(std::remove(list.begin(), list.end(), id), list.end());
      if (active_[q] != kNoInstr && active_[q] != id) ++out_.disjointness_violations;
      active_[q] = id;
      top_value_[q] = ctx_.coalesce_top[id];
    }
    in_future_[id] = false;
  }

  bool LiveInUnvisited(InstrId id) const {
    for (BlockId b = 0; b < static_cast<BlockId>(f_.num_blocks()); ++b) {
      if (visited_[b] || b == cur_) continue;
      if (ctx_.live.live_in[b].test(id)) return true;
    }
    return false;
  }

  std::optional<RetryCause> ExpireAndStart(const ValueSet& live_ins) {
    ValueSet leaving = live_outs_ - live_ins;
    for (auto i = leaving.find_first(); i != ValueSet::npos; i = leaving.find_next(i)) {
      InstrId id = static_cast<InstrId>(i);
      live_outs_.reset(id);
      if (LiveInUnvisited(id)) {
        Pause(id);
      } else {
        Free(id);
      }
    }
    ValueSet arriving = live_ins - live_outs_;
    for (auto i = arriving.find_first(); i != ValueSet::npos; i = arriving.find_next(i)) {
      InstrId id = static_cast<InstrId>(i);
      live_outs_.set(id);
      if (auto fail = AllocateRegister(id)) return fail;
    }
    return std::nullopt;
  }

  bool UsedLaterInBlock(InstrId value, const Instruction& at) const {
    for (const Use& u : ctx_.uses.of(value)) {
      const Instruction& user = f_.instr(u.user);
      if (user.block == cur_ && !user.is_phi() && user.position > at.position) return true;
    }
    return false;
  }

  void ExpireForInstruction(const Instruction& in) {
    for (InstrId j : in.inputs) {
      if (f_.instr(j).is_folded_constant()) continue;
      if (!live_outs_.test(j)) continue;  // duplicate input
      if (ctx_.live.IsLiveOut(cur_, j)) continue;
      if (UsedLaterInBlock(j, in)) continue;
      live_outs_.reset(j);
      if (LiveInUnvisited(j)) {
        Pause(j);
      } else {
        Free(j);
      }
    }
  }

  bool Interfere(InstrId a, InstrId b) {
    if (auto same = InterfereInBlock(ctx_, a, b)) return *same;
    return latst_(a, b);
  }

  bool Conflicts(int r, int width, const std::vector<InstrId>& members,
                 bool future_only = false) {
    for (int q = r; q < r + width && !future_only; ++q) {
      if (active_[q] != kNoInstr) return true;
    }
    for (int q = r; q < r + width; ++q) {
      for (InstrId x : future_[q]) {
        if (q > r && reg_[x] < q) continue;  // wide occupant already checked
        for (InstrId m : members) {
          if (Interfere(m, x)) return true;
        }
      }
    }
    return false;
  }

  std::uint64_t CostKey(InstrId id, int r, const std::vector<int>& forward_regs) const {
    const Instruction& in = f_.instr(id);
    const CostFactors& c = ctx_.config.costs;
    int w = in.width;
    bool move_like = IsMoveKind(in.kind) || in.is_phi();
    unsigned a = 1, b = 1, two = 1, clobber = 1, odd = 0;
    if (c.backward_coalescing && move_like) {
      for (int q = r; q < r + w; ++q) {
        if (top_value_[q] == ctx_.coalesce_top[id]) {
          a = 0;
          break;
        }
      }
    }
    if (c.forward_coalescing &&
        std::find(forward_regs.begin(), forward_regs.end(), r) != forward_regs.end()) {
      b = 0;
    }
    if (c.two_address && in.two_address_capable && !in.inputs.empty()) {
      int r0 = reg_[in.inputs[0]];
      bool second_ok = in.inputs.size() < 2 || f_.instr(in.inputs[1]).is_folded_constant() ||
                       (reg_[in.inputs[1]] != kNoRegister && reg_[in.inputs[1]] <= 15);
      if (r0 == r && r <= 15 && second_ok) two = 0;
    }
    if (c.clobber_hint && last_active_[r] != kNoInstr &&
        f_.instr(last_active_[r]).clobber_hint) {
      clobber = 0;
    }
    if (c.even_alignment && w == 2 && ctx_.target.wide_even_alignment() && (r & 1)) odd = 1;
    unsigned reserved = 0;
    for (int q = r; q < r + w && c.prefer_unreserved; ++q) {
      reserved |= future_[q].empty() ? 0u : 1u;
    }
    return (std::uint64_t{a} << 22) | (std::uint64_t{b} << 21) | (std::uint64_t{two} << 20) |
           (std::uint64_t{clobber} << 19) | (std::uint64_t{odd} << 18) |
           (std::uint64_t{reserved} << 17) | static_cast<std::uint64_t>(r);
  }

  std::optional<RetryCause> AllocateRegister(InstrId id) {
    if (in_future_[id]) {
      Resume(id);
      return std::nullopt;
    }
    if (IsBlockMove(f_, ctx_.uses, id)) return AllocateWindow(id);
    std::vector<InstrId> members{id};
    int group = ctx_.groups.group_of[id];
    EncodingClass cls = ctx_.value_class[id];
    if (group >= 0) {
      members = ctx_.groups.members[group];
      for (InstrId m : members) cls = Narrowest(cls, ctx_.value_class[m]);
    }
    const int w = Width(id);
    const int limit = std::min(ctx_.total, ClassLimit(cls));

    std::vector<int> forward_regs;
    for (const Use& u : ctx_.uses.of(id)) {
      const Instruction& user = f_.instr(u.user);
      if (IsMoveKind(user.kind) && in_future_[user.id]) forward_regs.push_back(reg_[user.id]);
    }

    std::vector<std::uint64_t> keys;
    for (int r = 0; r + w <= limit; ++r) {
      bool free = true;
      for (int q = r; q < r + w; ++q) free = free && active_[q] == kNoInstr;
      if (free) keys.push_back(CostKey(id, r, forward_regs));
    }
    std::sort(keys.begin(), keys.end());
    for (std::uint64_t key : keys) {
      int r = static_cast<int>(key & 0x1FFFF);
      if (Conflicts(r, w, members)) continue;
      Occupy(id, r);
      for (InstrId m : members) {
        if (m == id) continue;
        reg_[m] = r;
        for (int q = r; q < r + w; ++q) future_[q].push_back(m);
        in_future_[m] = true;
      }
      return std::nullopt;
    }
    return Fail(id, members, cls, w);
  }

  // The source of `move` frees its register at `move` and can hand it over.
  bool HandsOver(InstrId move, int q) const {
    const Instruction& m = f_.instr(move);
    InstrId src = m.inputs.front();
    if (active_[q] != src || reg_[src] != q || Width(src) != m.width) return false;
    return !ctx_.live.IsLiveOut(cur_, src) && !UsedLaterInBlock(src, m) &&
           !LiveInUnvisited(src);
  }

  // Places every argument move of a range invoke at once, when the first of
  // them is reached.
  std::optional<RetryCause> AllocateWindow(InstrId id) {
    const Instruction& call = f_.instr(ctx_.uses.of(id).front().user);
    std::vector<int> offset;
    int len = 0;
    for (InstrId m : call.inputs) {
      offset.push_back(len);
      len += Width(m);
    }
    int best = -1;
    int best_cost = 0;
    for (int base = ctx_.total - len; base >= 0; --base) {
      int cost = 0;
      bool ok = true;
      for (std::size_t k = 0; k < call.inputs.size() && ok; ++k) {
        InstrId m = call.inputs[k];
        const int r = base + offset[k];
        ok = ctx_.target.Fits(r, Width(m), ctx_.value_class[m]);
        for (int q = r; q < r + Width(m) && ok; ++q) {
          ok = active_[q] == kNoInstr || HandsOver(m, r);
        }
        if (!ok) break;
        for (int q = r; q < r + Width(m); ++q) {
          if (top_value_[q] != ctx_.coalesce_top[m]) {
            ++cost;
            break;
          }
        }
      }
      if (!ok || (best >= 0 && cost >= best_cost)) continue;
      for (std::size_t k = 0; k < call.inputs.size() && ok; ++k) {
        ok = !Conflicts(base + offset[k], Width(call.inputs[k]), {call.inputs[k]}, true);
      }
      if (!ok) continue;
      best = base;
      best_cost = cost;
      if (cost == 0) break;
    }
    if (best < 0) {
      RetryCause cause;
      cause.kind = RetryKind::kPreAllocateBlockMoves;
      cause.failing_instruction = id;
      cause.invoke = call.id;
      cause.needed = ctx_.value_class[id];
      for (auto i = live_outs_.find_first(); i != ValueSet::npos; i = live_outs_.find_next(i)) {
        cause.live_set_at_failure.push_back(static_cast<InstrId>(i));
      }
      cause.detail = "no free register window for the argument block";
      return cause;
    }
    for (std::size_t k = 0; k < call.inputs.size(); ++k) {
      InstrId m = call.inputs[k];
      const int r = best + offset[k];
      if (m == id) {
        Occupy(m, r);
        continue;
      }
      reg_[m] = r;
      for (int q = r; q < r + Width(m); ++q) future_[q].push_back(m);
      in_future_[m] = true;
    }
    return std::nullopt;
  }

  RetryCause Fail(InstrId id, const std::vector<InstrId>& members, EncodingClass cls, int w) {
    RetryCause cause;
    cause.failing_instruction = id;
    cause.needed = cls;
    for (auto i = live_outs_.find_first(); i != ValueSet::npos; i = live_outs_.find_next(i)) {
      cause.live_set_at_failure.push_back(static_cast<InstrId>(i));
    }
    bool any = false;
    for (int r = 0; r + w <= ctx_.total && !any; ++r) any = !Conflicts(r, w, members);

    std::vector<InstrId> blockers;
    int limit = std::min(ctx_.total, ClassLimit(cls));
    for (int q = 0; q < limit; ++q) {
      if (active_[q] != kNoInstr) blockers.push_back(active_[q]);
      for (InstrId x : future_[q]) {
        for (InstrId m : members) {
          if (Interfere(m, x)) {
            blockers.push_back(x);
            break;
          }
        }
      }
    }
    blockers.push_back(id);
    std::sort(blockers.begin(), blockers.end());
    blockers.erase(std::unique(blockers.begin(), blockers.end()), blockers.end());
    cause.blockers = std::move(blockers);

    if (any) {
      EncodingClass without = EncodingClass::kReg16;
      for (InstrId m : members) {
        without = Narrowest(without, ValueClass(f_, ctx_.uses, ctx_.target, m, false));
      }
      if (without != cls) {
        for (InstrId m : members) {
          for (const Use& u : ctx_.uses.of(m)) {
            const Instruction& user = f_.instr(u.user);
            if (user.kind == Kind::kInvoke && !user.range_invoke) {
              cause.kind = RetryKind::kPreAllocateBlockMoves;
              cause.invoke = user.id;
              cause.detail = "invoke arguments need low registers";
              return cause;
            }
          }
        }
      }
      cause.kind = RetryKind::kSplitLiveRange;
      cause.detail = "no register satisfies the encoding class";
      return cause;
    }
    if (ctx_.total < 256 || cls == EncodingClass::kReg16) {
      cause.kind = RetryKind::kGrowRegisters;
      cause.grow_by = w;
      cause.detail = "no free register";
      return cause;
    }
    cause.kind = RetryKind::kSplitLiveRange;
    cause.detail = "no free register";
    return cause;
  }

  void CheckDisjoint() {
    std::vector<int> active_regs(f_.instr_capacity(), 0);
    std::vector<int> future_regs(f_.instr_capacity(), 0);
    for (InstrId id : active_) {
      if (id != kNoInstr) ++active_regs[id];
    }
    for (int q = 0; q < ctx_.total; ++q) {
      for (InstrId id : future_[q]) {
        ++future_regs[id];
        if (reg_[id] > q || q >= reg_[id] + Width(id)) ++out_.disjointness_violations;
      }
    }
    for (std::size_t id = 0; id < active_regs.size(); ++id) {
      if (active_regs[id] && future_regs[id]) ++out_.disjointness_violations;
      if (future_regs[id] > Width(static_cast<InstrId>(id))) ++out_.disjointness_violations;
    }
  }

  const AttemptContext& ctx_;
  const Function& f_;
  LatstOracle& latst_;
  ScanOutcome& out_;
  std::vector<InstrId> active_;
  std::vector<std::vector<InstrId>> future_;
  std::vector<int> reg_;
  std::vector<bool> in_future_;
  std::vector<InstrId> last_active_;
  std::vector<InstrId> top_value_;
  ValueSet live_outs_;
  std::vector<bool> visited_;
  BlockId cur_ = kNoBlock;
};

}  // namespace

std::variant<ScanOutcome, RetryCause> RunMainLoop(const AttemptContext& ctx, Seeds seeds,
                                                  LatstOracle& latst, ScanOutcome& counters) {
  Scanner scan(ctx, std::move(seeds), latst, counters);
  if (auto fail = scan.Run()) return *fail;
  ScanOutcome done = counters;
  done.reg = scan.TakeAssignment();
  return done;
}

}  // namespace internal

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void AddPhase(AllocStats& stats, const std::string& name, double secs) {
  AllocStats one;
  one.phase_times.emplace_back(name, secs);
  stats.Merge(one);
}

}  // namespace

AllocationResult AllocateFunction(Function f, const TargetModel& target,
                                  const AllocatorConfig& config) {
  using namespace internal;
  AllocationResult result;
  AllocStats& stats = result.stats;
  std::set<InstrId> already_split;
  std::set<InstrId> preallocated;
  int total = 0;
  const bool timed = config.record_timings;

  for (;;) {
    auto t0 = Clock::now();
    f.RenumberAll();
    LayoutOrder order = ComputeLayoutOrder(f, config.order);
    Liveness live = ComputeLiveness(f, order);
    UsesMap uses = ComputeUses(f);
    if (timed) AddPhase(stats, "liveness", Seconds(t0));
    total = std::max(total, RegisterLowerBound(f, live));
    if (total > target.max_registers()) {
      throw RetryLimitExceeded("register count exceeds the target's register file",
                               result.retries);
    }

    AttemptContext ctx{f, target, config, live, uses, order, total, {}, {}, {}, {}, preallocated};
    ctx.value_class.assign(f.instr_capacity(), EncodingClass::kReg16);
    for (InstrId id : f.instructions()) {
      if (f.instr(id).needs_register()) ctx.value_class[id] = ValueClass(f, uses, target, id);
    }
    ctx.groups = ComputePhiGroups(f);
    ctx.coalesce_top = AllTops(f, true);
    ctx.content_top = AllTops(f, false);

    LatstOracle latst(f, live, uses, config.latst);
    latst.set_cross_check(config.cross_check_latst);
    if (config.latst_observer) latst.set_observer(config.latst_observer);

    auto t1 = Clock::now();
    auto seeded = PreAllocate(ctx, latst);
    if (timed) AddPhase(stats, "pre_allocation", Seconds(t1));

    std::optional<RetryCause> failure;
    ScanOutcome counters;
    if (auto* cause = std::get_if<RetryCause>(&seeded)) {
      failure = std::move(*cause);
    } else {
      auto t2 = Clock::now();
      auto outcome = RunMainLoop(ctx, std::move(std::get<Seeds>(seeded)), latst, counters);
      if (timed) AddPhase(stats, "main_loop", Seconds(t2));
      if (auto* cause = std::get_if<RetryCause>(&outcome)) {
        failure = std::move(*cause);
      } else {
        result.assignment = std::move(std::get<ScanOutcome>(outcome).reg);
      }
    }
    stats.lats_calls_total += latst.calls();
    stats.lats_same_block += latst.same_block();
    stats.lats_cross_block += latst.cross_block();
    stats.lats_disagreements += latst.disagreements();
    stats.lats_asymmetries += latst.asymmetries();
    stats.instructions_processed += counters.instructions_processed;
    stats.lats_max_calls_per_instruction =
        std::max(stats.lats_max_calls_per_instruction, counters.max_calls_per_instruction);
    stats.disjointness_violations += counters.disjointness_violations;

    if (!failure) {
      result.order = std::move(order);
      result.total_registers = total;
      stats.use_kinds = ClassifyUses(f, uses);
      break;
    }

    RetryCause cause = std::move(*failure);
    if (static_cast<int>(result.retries.size()) >= config.max_retries) {
      result.retries.push_back(cause);
      std::ostringstream os;
      os << "allocation of @" << f.name << " did not converge after " << config.max_retries
         << " retries";
      for (const RetryCause& r : result.retries) os << "\n  " << DescribeRetry(f, r);
      throw RetryLimitExceeded(os.str(), result.retries);
    }

    std::vector<InstrId> added;
    switch (cause.kind) {
      case RetryKind::kGrowRegisters:
        total += cause.grow_by;
        break;
      case RetryKind::kPreAllocateBlockMoves:
        if (!f.instr(cause.invoke).range_invoke) {
          added = ConvertToRangeInvoke(f, cause.invoke);
        } else if (!preallocated.insert(cause.invoke).second) {
          cause.kind = RetryKind::kGrowRegisters;
          cause.grow_by = RangeRequirementOf(f, f.instr(cause.invoke))->length;
          total += cause.grow_by;
        }
        break;
      case RetryKind::kSplitLiveRange:
        if (f.instr(cause.failing_instruction).kind == Kind::kParam && cause.blockers.empty()) {
          added = InsertGetParamMove(f, cause.failing_instruction);
        } else {
          added = SplitLiveRange(f, target, cause, config.fill, already_split);
        }
        if (added.empty()) {
          cause.kind = RetryKind::kGrowRegisters;
          cause.grow_by = std::max(1, f.instr(cause.failing_instruction).width);
          cause.detail += "; nothing left to split";
          total += cause.grow_by;
        }
        break;
    }
    switch (cause.kind) {
      case RetryKind::kGrowRegisters: ++stats.retries_grow_registers; break;
      case RetryKind::kSplitLiveRange: ++stats.retries_split_live_range; break;
      case RetryKind::kPreAllocateBlockMoves: ++stats.retries_pre_allocate_block_moves; break;
    }
    result.inserted.insert(result.inserted.end(), added.begin(), added.end());
    result.retries.push_back(std::move(cause));
  }

  auto t3 = Clock::now();
  result.assignment.resize(f.instr_capacity(), kNoRegister);
  for (InstrId id = 0; id < static_cast<InstrId>(f.instr_capacity()); ++id) {
    if (!f.instr(id).needs_register() || f.instr(id).removed) result.assignment[id] = kNoRegister;
  }
  EmittedMoves moves = EmitMoves(f, result.order, result.assignment);
  if (timed) AddPhase(stats, "emit", Seconds(t3));
  stats.moves_emitted = static_cast<std::int64_t>(moves.emitted.size());
  stats.moves_elided = static_cast<std::int64_t>(moves.elided_moves.size());
  stats.functions = 1;
  stats.blocks = static_cast<std::int64_t>(f.num_blocks());
  stats.instructions = static_cast<std::int64_t>(f.instructions().size());
  stats.total_registers = result.total_registers;
  result.function = std::move(f);
  return result;
}

AllocationResult PrepareAndAllocate(Function f, const TargetModel& target,
                                    const AllocatorConfig& config) {
  return AllocateFunction(Prepare(std::move(f), config.prep), target, config);
}

}  // namespace ifscan
