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

#include "ifscan/verify.h"

#include <algorithm>
#include <set>
#include <sstream>

namespace ifscan {

namespace {

using Bits = boost::dynamic_bitset<>;

bool Tracked(const Function& f, InstrId id) {
  const Instruction& in = f.instr(id);
  return !in.removed && in.block != kNoBlock && in.needs_register();
}

}  // namespace

Bits PointLiveness::LiveAt(const Function& f, int index) const {
  Bits bits = live_before[index] | live_after[index];
  InstrId id = linear[index];
  if (Tracked(f, id)) bits.set(id);
  return bits;
}

PointLiveness ComputePointLiveness(const Function& f, const LayoutOrder& order) {
  const std::size_t n = f.instr_capacity();
  PointLiveness p;
  p.index_of.assign(n, -1);
  for (BlockId b : order.order) {
    for (InstrId id : f.block(b).instructions) {
      p.index_of[id] = static_cast<int>(p.linear.size());
      p.linear.push_back(id);
    }
  }
  p.live_before.assign(p.linear.size(), Bits(n));
  p.live_after.assign(p.linear.size(), Bits(n));
  p.block_live_in.assign(f.num_blocks(), Bits(n));
  p.block_live_out.assign(f.num_blocks(), Bits(n));

  // Phi operands are read at the end of the incoming block.
  std::vector<Bits> phi_reads(f.num_blocks(), Bits(n));
  for (BlockId b : order.order) {
    for (InstrId id : f.block(b).instructions) {
      const Instruction& in = f.instr(id);
      if (!in.is_phi()) continue;
      for (std::size_t k = 0; k < in.inputs.size(); ++k) {
        if (Tracked(f, in.inputs[k])) phi_reads[in.phi_blocks[k]].set(in.inputs[k]);
      }
    }
  }

  auto walk = [&](BlockId b) {
    Bits live = p.block_live_out[b];
    const auto& instrs = f.block(b).instructions;
    for (auto it = instrs.rbegin(); it != instrs.rend(); ++it) {
      const Instruction& in = f.instr(*it);
      const int index = p.index_of[*it];
      p.live_after[index] = live;
      if (Tracked(f, *it)) live.reset(*it);
      if (!in.is_phi()) {
        for (InstrId src : in.inputs) {
          if (Tracked(f, src)) live.set(src);
        }
      }
      p.live_before[index] = live;
    }
    return live;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = order.order.rbegin(); it != order.order.rend(); ++it) {
      BlockId b = *it;
      Bits out = phi_reads[b];
      for (BlockId s : f.block(b).successors) out |= p.block_live_in[s];
      p.block_live_out[b] = out;
      Bits in = walk(b);
      if (in != p.block_live_in[b]) {
        p.block_live_in[b] = std::move(in);
        changed = true;
      }
    }
  }
  return p;
}

bool Interval::Covers(int point) const {
  return std::any_of(segments.begin(), segments.end(),
                     [&](const Segment& s) { return s.start <= point && point < s.end; });
}

std::vector<Interval> BuildIntervals(const Function& f, const PointLiveness& points) {
  std::vector<Interval> by_id(f.instr_capacity());
  for (int k = 0; k < static_cast<int>(points.linear.size()); ++k) {
    Bits live = points.LiveAt(f, k);
    for (auto v = live.find_first(); v != Bits::npos; v = live.find_next(v)) {
      Interval& iv = by_id[v];
      if (!iv.segments.empty() && iv.segments.back().end == k) {
        iv.segments.back().end = k + 1;
      } else {
        iv.segments.push_back({k, k + 1});
      }
    }
  }
  std::vector<Interval> out;
  for (std::size_t id = 0; id < by_id.size(); ++id) {
    if (by_id[id].segments.empty()) continue;
    by_id[id].value = static_cast<InstrId>(id);
    by_id[id].width = f.instr(static_cast<InstrId>(id)).width;
    out.push_back(std::move(by_id[id]));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Interval& a, const Interval& b) { return a.start() < b.start(); });
  return out;
}

std::vector<Interval> BuildIntervals(const Function& f, const LayoutOrder& order) {
  return BuildIntervals(f, ComputePointLiveness(f, order));
}

std::vector<int> BaselineLinearScan(std::vector<Interval>& intervals, std::size_t capacity,
                                    int num_registers) {
  // Reads of instruction k sit at 2k, its write at 2k + 1.
  const std::size_t n = intervals.size();
  std::vector<int> startpoint(n), endpoint(n);
  for (std::size_t j = 0; j < n; ++j) {
    startpoint[j] = 2 * intervals[j].start() + 1;
    endpoint[j] = std::max(2 * (intervals[j].end() - 1), startpoint[j]);
  }
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return startpoint[a] < startpoint[b]; });

  std::vector<bool> used(num_registers, false);
  std::vector<std::size_t> active;  // increasing endpoint
  std::vector<int> assignment(capacity, kNoRegister);
  for (std::size_t i : order) {
    while (!active.empty() && endpoint[active.front()] < startpoint[i]) {
      const Interval& j = intervals[active.front()];
      for (int q = j.reg; q < j.reg + j.width; ++q) used[q] = false;
      active.erase(active.begin());
    }
    Interval& cur = intervals[i];
    int r = 0;
    while (r + cur.width <= num_registers &&
           std::any_of(used.begin() + r, used.begin() + r + cur.width, [](bool u) { return u; })) {
      ++r;
    }
    if (r + cur.width > num_registers) {
      throw BaselineFailure("baseline ran out of registers at value " +
                            std::to_string(cur.value));
    }
    for (int q = r; q < r + cur.width; ++q) used[q] = true;
    cur.reg = r;
    assignment[cur.value] = r;
    auto pos = std::upper_bound(active.begin(), active.end(), i, [&](std::size_t a, std::size_t b) {
      return endpoint[a] < endpoint[b];
    });
    active.insert(pos, i);
  }
  return assignment;
}

std::string_view AllocViolationKindName(AllocViolationKind kind) {
  switch (kind) {
    case AllocViolationKind::kInterference: return "interference";
    case AllocViolationKind::kUnassigned: return "unassigned";
    case AllocViolationKind::kFits: return "fits";
    case AllocViolationKind::kPair: return "pair";
    case AllocViolationKind::kRange: return "range";
    case AllocViolationKind::kPhiGroup: return "phi-group";
    case AllocViolationKind::kParameter: return "parameter";
    case AllocViolationKind::kInvokeArity: return "invoke-arity";
  }
  return "?";
}

std::size_t VerificationReport::count(AllocViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(),
      [&](const AllocationViolation& v) { return v.kind == kind; }));
}

std::string VerificationReport::ToText() const {
  std::ostringstream out;
  for (const AllocationViolation& v : violations) {
    out << AllocViolationKindName(v.kind) << ": " << v.message << "\n";
  }
  return out.str();
}

namespace {

class Verifier {
 public:
  Verifier(const Function& f, const LayoutOrder& order, const std::vector<int>& assignment,
           int total, const TargetModel& target)
      : f_(f), assignment_(assignment), total_(total), target_(target),
        points_(ComputePointLiveness(f, order)), uses_(ComputeUses(f)) {}

  VerificationReport Run() {
    CheckAssigned();
    CheckInterference();
    CheckClasses();
    CheckRanges();
    CheckPhiGroups();
    CheckParameters();
    CheckInvokeArity();
    return std::move(report_);
  }

 private:
  int Reg(InstrId id) const {
    return id >= 0 && id < static_cast<InstrId>(assignment_.size()) ? assignment_[id] : kNoRegister;
  }
  std::string Name(InstrId id) const { return "%" + f_.instr(id).name; }
  std::string RegName(int r) const { return "r" + std::to_string(r); }
  bool Placed(InstrId id) const {
    return Tracked(f_, id) && points_.index_of[id] >= 0 && Reg(id) >= 0 &&
           Reg(id) + f_.instr(id).width <= total_;
  }

  void Add(AllocViolationKind kind, InstrId a, InstrId b, int reg, int point, std::string msg) {
    report_.violations.push_back({kind, a, b, reg, point, std::move(msg)});
  }

  void CheckAssigned() {
    for (InstrId id : points_.linear) {
      if (!Tracked(f_, id)) continue;
      const int r = Reg(id);
      const int w = f_.instr(id).width;
      const int point = points_.index_of[id];
      if (r < 0) {
        Add(AllocViolationKind::kUnassigned, id, kNoInstr, r, point, Name(id) + " has no register");
      } else if (w == 2 && r + 1 == total_) {
        Add(AllocViolationKind::kPair, id, kNoInstr, r, point,
            Name(id) + " pair " + RegName(r) + " has no partner below " + std::to_string(total_));
      } else if (r + w > total_ || r + w > target_.max_registers()) {
        Add(AllocViolationKind::kUnassigned, id, kNoInstr, r, point,
            Name(id) + " in " + RegName(r) + " outside " + std::to_string(total_) + " registers");
      }
    }
  }

  void Occupancy(const Bits& live, int point) {
    for (auto v = live.find_first(); v != Bits::npos; v = live.find_next(v)) {
      InstrId id = static_cast<InstrId>(v);
      if (!Placed(id)) continue;
      const int r = Reg(id);
      for (int q = r; q < r + f_.instr(id).width; ++q) {
        InstrId other = owner_[q];
        if (other == kNoInstr) {
          owner_[q] = id;
          touched_.push_back(q);
        } else if (other != id) {
          std::pair<InstrId, InstrId> key{std::min(other, id), std::max(other, id)};
          if (reported_.insert(key).second) {
            Add(AllocViolationKind::kInterference, key.first, key.second, q, point,
                Name(key.first) + " and " + Name(key.second) + " both live in " + RegName(q) +
                    " at " + std::to_string(point));
          }
        }
      }
    }
    for (int q : touched_) owner_[q] = kNoInstr;
    touched_.clear();
  }

  void CheckInterference() {
    owner_.assign(std::max(total_, 0) + 2, kNoInstr);
    for (int k = 0; k < static_cast<int>(points_.linear.size()); ++k) {
      InstrId id = points_.linear[k];
      const Instruction& in = f_.instr(id);
      if (in.position == 0) Occupancy(points_.block_live_in[in.block], k);
      Bits occupied = points_.live_after[k];
      if (Tracked(f_, id)) occupied.set(id);
      Occupancy(occupied, k);
    }
  }

  void CheckClasses() {
    for (InstrId id : points_.linear) {
      if (!Placed(id)) continue;
      const Instruction& in = f_.instr(id);
      EncodingClass c = target_.ResultClassOf(in);
      InstrId culprit = kNoInstr;
      for (const Use& u : uses_.of(id)) {
        const Instruction& user = f_.instr(u.user);
        if (user.removed || user.is_phi()) continue;
        EncodingClass uc = target_.EncodingClassOf(user);
        if (ClassLimit(uc) < ClassLimit(c)) {
          c = uc;
          culprit = u.user;
        }
      }
      const int r = Reg(id);
      if (!target_.Fits(r, in.width, c)) {
        std::string where = culprit == kNoInstr ? "its definition" : Name(culprit);
        Add(AllocViolationKind::kFits, id, culprit, r, points_.index_of[id],
            Name(id) + " in " + RegName(r) + " exceeds " + std::string(EncodingClassName(c)) +
                " required by " + where);
      }
    }
  }

  void CheckRanges() {
    for (InstrId id : points_.linear) {
      const Instruction& in = f_.instr(id);
      if (!RangeRequirementOf(f_, in)) continue;
      int expected = kNoRegister;
      for (InstrId src : in.inputs) {
        const int r = Placed(src) ? Reg(src) : kNoRegister;
        if (r < 0) {
          Add(AllocViolationKind::kRange, id, src, r, points_.index_of[id],
              "range operand " + Name(src) + " of " + Name(id) + " has no register");
          break;
        }
        if (expected != kNoRegister && r != expected) {
          Add(AllocViolationKind::kRange, id, src, r, points_.index_of[id],
              "range operand " + Name(src) + " of " + Name(id) + " in " + RegName(r) +
                  ", expected " + RegName(expected));
          break;
        }
        expected = r + f_.instr(src).width;
      }
    }
  }

  void CheckPhiGroups() {
    for (InstrId id : points_.linear) {
      const Instruction& in = f_.instr(id);
      if (!in.is_phi() || !Placed(id)) continue;
      for (InstrId src : in.inputs) {
        if (f_.instr(src).kind != Kind::kPhiMove || !Tracked(f_, src)) continue;
        if (Reg(src) != Reg(id)) {
          Add(AllocViolationKind::kPhiGroup, id, src, Reg(src), points_.index_of[id],
              Name(src) + " in " + RegName(Reg(src)) + " feeds " + Name(id) + " in " +
                  RegName(Reg(id)));
        }
      }
    }
  }

  void CheckParameters() {
    if (f_.params.empty()) return;
    std::vector<int> regs;
    try {
      regs = ParameterRegisters(f_, total_);
    } catch (const std::invalid_argument& e) {
      Add(AllocViolationKind::kParameter, f_.params.front(), kNoInstr, kNoRegister, 0, e.what());
      return;
    }
    for (std::size_t k = 0; k < f_.params.size(); ++k) {
      InstrId p = f_.params[k];
      if (Reg(p) != regs[k]) {
        Add(AllocViolationKind::kParameter, p, kNoInstr, Reg(p), points_.index_of[p],
            Name(p) + " in " + RegName(Reg(p)) + ", arrives in " + RegName(regs[k]));
      }
    }
  }

  void CheckInvokeArity() {
    for (InstrId id : points_.linear) {
      const Instruction& in = f_.instr(id);
      if (in.kind != Kind::kInvoke || in.range_invoke) continue;
      int regs = 0;
      for (InstrId src : in.inputs) {
        if (Tracked(f_, src)) regs += f_.instr(src).width;
      }
      if (regs > kMaxNonRangeInvokeRegisters) {
        Add(AllocViolationKind::kInvokeArity, id, kNoInstr, kNoRegister, points_.index_of[id],
            Name(id) + " passes " + std::to_string(regs) + " registers without a range");
      }
    }
  }

  const Function& f_;
  const std::vector<int>& assignment_;
  int total_;
  const TargetModel& target_;
  PointLiveness points_;
  UsesMap uses_;
  VerificationReport report_;
  std::vector<InstrId> owner_;
  std::vector<int> touched_;
  std::set<std::pair<InstrId, InstrId>> reported_;
};

}  // namespace

VerificationReport VerifyAllocation(const Function& f, const LayoutOrder& order,
                                    const std::vector<int>& assignment, int total_registers,
                                    const TargetModel& target) {
  return Verifier(f, order, assignment, total_registers, target).Run();
}

VerificationReport VerifyAllocation(const AllocationResult& result, const TargetModel& target) {
  return VerifyAllocation(result.function, result.order, result.assignment,
                          result.total_registers, target);
}

}  // namespace ifscan
