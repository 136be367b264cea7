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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "allocator_internal.h"
#include "ifscan/allocator.h"
#include "ifscan/fuzz.h"
#include "ifscan/verify.h"
#include "oracles.h"

namespace ifscan {
namespace {

using testing::ByName;
using testing::MustParse;

AllocatorConfig NoSink() {
  AllocatorConfig c;
  c.prep.sink = false;
  return c;
}

const TargetModel kWide = TargetModel::Uniform(EncodingClass::kReg16);

int Reg(const AllocationResult& r, std::string_view name) {
  return r.register_of(ByName(r.function, name));
}

int CountKind(const Function& f, Kind kind) {
  auto ids = f.instructions();
  return static_cast<int>(
      std::count_if(ids.begin(), ids.end(), [&](InstrId id) { return f.instr(id).kind == kind; }));
}

TEST(Allocate, DisjointChainUsesOneRegister) {
  auto r = PrepareAndAllocate(
      MustParse("func @f() {\nb0:\n  a = const 1\n  b = neg a\n  c = not b\n  ret c\n}\n"), kWide);
  EXPECT_EQ(r.total_registers, 1);
  EXPECT_TRUE(r.retries.empty());
  // The textbook scan on the same intervals agrees.
  auto intervals = BuildIntervals(r.function, r.order);
  std::vector<std::pair<int, int>> spans;
  for (const Interval& iv : intervals) spans.emplace_back(iv.start(), iv.end());
  for (int reg : testing::TextbookLinearScan(spans)) EXPECT_EQ(reg, 0);
}

TEST(Allocate, InputsExpireBeforeDefinition) {
  auto r = PrepareAndAllocate(
      MustParse("func @f() {\nb0:\n  v0 = const 1\n  v1 = const 2\n  v2 = add v0, v1\n  ret v2\n}\n"),
      kWide, NoSink());
  // Constants are re-materialized next to their single use.
  const Instruction& v2 = r.function.instr(ByName(r.function, "v2"));
  EXPECT_EQ(r.register_of(v2.inputs[0]), 0);
  EXPECT_EQ(r.register_of(v2.inputs[1]), 1);
  EXPECT_EQ(r.register_of(v2.id), 0);
}

TEST(Allocate, ParamsOnlyStayInPlace) {
  auto r = PrepareAndAllocate(MustParse("func @f(a: int, b: long) {\nb0:\n  ret a\n}\n"),
                              TargetModel{});
  EXPECT_TRUE(r.retries.empty());
  EXPECT_EQ(r.total_registers, 3);
  EXPECT_EQ(Reg(r, "a"), 0);
  EXPECT_EQ(Reg(r, "b"), 1);
  EXPECT_EQ(r.stats.moves_emitted, 0);
}

TEST(Allocate, PausedRegisterReusedInHole) {
  // v is live out of b0 and into b2 only; b1 comes first in layout.
  auto r = PrepareAndAllocate(MustParse(R"(
func @f(p: int) {
b0:
  v = mul p, p
  c = lt p, p
  condbr c, b1, b2
b1:
  w = add p, p
  x = add w, w
  ret x
b2:
  y = add v, p
  ret y
}
)"),
                              kWide);
  ASSERT_EQ(r.order.order[1], r.function.instr(ByName(r.function, "w")).block);
  EXPECT_EQ(Reg(r, "w"), Reg(r, "v"));
  EXPECT_GT(r.stats.lats_calls_total, 0);
  EXPECT_TRUE(VerifyAllocation(r, kWide).ok());
}

TEST(Allocate, WideValuePrefersEvenPair) {
  constexpr const char* kText = R"(
func @f(p: int) {
b0:
  h = add p, p
  t1 = add p, p
  t2 = add p, p
  t3 = add p, p
  s1 = add t1, t2
  s2 = add s1, t3
  wd = add.wide s2, p
  z = add.wide h, wd
  ret z
}
)";
  // At wd: r0 holds h, r1..r3 are free.
  auto r = PrepareAndAllocate(MustParse(kText), kWide, NoSink());
  ASSERT_EQ(Reg(r, "h"), 0);
  EXPECT_EQ(Reg(r, "wd"), 2);
  AllocatorConfig off = NoSink();
  off.costs.even_alignment = false;
  EXPECT_EQ(Reg(PrepareAndAllocate(MustParse(kText), kWide, off), "wd"), 1);
}

TEST(Cost, BackwardCoalescingFollowsTopValue) {
  constexpr const char* kText = R"(
func @f(p: int) {
b0:
  x0 = add p, p
  x1 = add p, p
  x2 = add p, p
  v = add p, p
  s = add x0, x1
  s2 = add s, x2
  m = move v
  r = add m, p
  ret r
}
)";
  auto r = PrepareAndAllocate(MustParse(kText), kWide, NoSink());
  ASSERT_EQ(Reg(r, "v"), 3);
  EXPECT_EQ(Reg(r, "m"), 3);
  EXPECT_EQ(r.stats.moves_elided, 1);
  AllocatorConfig off = NoSink();
  off.costs.backward_coalescing = false;
  off.costs.forward_coalescing = false;
  EXPECT_EQ(Reg(PrepareAndAllocate(MustParse(kText), kWide, off), "m"), 0);
}

TEST(Cost, TwoAddressReusesFirstInput) {
  constexpr const char* kText = R"(
func @f(p: int) {
b0:
  x0 = add p, p
  x1 = add p, p
  x2 = add p, p
  s = add x0, x1
  d = add x2, s !two_addr
  ret d
}
)";
  auto r = PrepareAndAllocate(MustParse(kText), kWide, NoSink());
  ASSERT_EQ(Reg(r, "x2"), 2);
  EXPECT_EQ(Reg(r, "d"), 2);
  AllocatorConfig off = NoSink();
  off.costs.two_address = false;
  EXPECT_EQ(Reg(PrepareAndAllocate(MustParse(kText), kWide, off), "d"), 0);
}

TEST(Cost, TiesGoToLowestRegister) {
  AllocatorConfig none = NoSink();
  none.costs = CostFactors::None();
  auto r = PrepareAndAllocate(
      MustParse("func @f(p: int) {\nb0:\n  a = add p, p\n  b = add p, a\n  c = add a, b\n  ret c\n}\n"),
      kWide, none);
  EXPECT_EQ(Reg(r, "a"), 0);
  EXPECT_EQ(Reg(r, "b"), 1);
  EXPECT_EQ(Reg(r, "c"), 0);
}

TEST(Allocate, ConstrainedPressureSplitsLiveRanges) {
  Function f = ConstraintStressFunction(17, 3);
  TargetModel t;
  auto r = PrepareAndAllocate(f, t);
  EXPECT_GE(r.stats.retries_split_live_range, 1);
  int spills = 0;
  for (InstrId id : r.function.instructions()) {
    if (r.function.instr(id).kind != Kind::kSpillMove) continue;
    ++spills;
    EXPECT_GT(r.register_of(id), 15);
  }
  EXPECT_GE(spills, 1);
  EXPECT_TRUE(VerifyAllocation(r, t).ok()) << VerifyAllocation(r, t).ToText();
}

TEST(Allocate, RangeInvokeTakesHighestWindow) {
  std::string text = "func @r(p: int) {\nb0:\n  x0 = add p, p\n";
  for (int i = 1; i < 20; ++i) {
    text += "  x" + std::to_string(i) + " = add x" + std::to_string(i - 1) + ", p\n";
  }
  std::string acc = "x19";
  for (int i = 18; i >= 0; --i) {
    text += "  s" + std::to_string(i) + " = add " + acc + ", x" + std::to_string(i) + "\n";
    acc = "s" + std::to_string(i);
  }
  for (int i = 0; i < 6; ++i) text += "  a" + std::to_string(i) + " = add " + acc + ", p\n";
  text += "  r = invoke a0, a1, a2, a3, a4, a5 !range\n  ret r\n}\n";
  TargetModel t;
  auto r = PrepareAndAllocate(MustParse(text), t);
  ASSERT_TRUE(VerifyAllocation(r, t).ok());

  const Instruction& call = r.function.instr(ByName(r.function, "r"));
  ASSERT_EQ(call.inputs.size(), 6u);
  // Oracle: the highest window of six registers holding nothing live at the
  // first block move except that move's own source.
  InstrId first = call.inputs[0];
  auto occ = testing::NaiveOccupancy(r.function, r.order.order);
  int point = occ.block_start[call.block] + r.function.instr(first).position;
  std::set<int> busy;
  for (InstrId v : occ.points[point]) {
    if (v == r.function.instr(first).inputs[0]) continue;
    for (int q = 0; q < r.function.instr(v).width; ++q) busy.insert(r.register_of(v) + q);
  }
  int base = r.total_registers - 6;
  while (base >= 0 && std::any_of(busy.begin(), busy.end(),
                                  [&](int q) { return q >= base && q < base + 6; })) {
    --base;
  }
  for (int k = 0; k < 6; ++k) EXPECT_EQ(r.register_of(call.inputs[k]), base + k);
}

TEST(Allocate, Deterministic) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    FuzzConfig cfg;
    cfg.seed = seed;
    Function f = FuzzFunction(cfg);
    auto a = PrepareAndAllocate(f, TargetModel{});
    auto b = PrepareAndAllocate(f, TargetModel{});
    EXPECT_EQ(a.assignment, b.assignment);
    EXPECT_EQ(a.total_registers, b.total_registers);
    EXPECT_EQ(PrintFunction(a.function), PrintFunction(b.function));
    EXPECT_EQ(StatsToText(a.stats), StatsToText(b.stats));
  }
}

TEST(Allocate, DebugChecksFindNoDoubleMembership) {
  AllocatorConfig c;
  c.debug_checks = true;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    FuzzConfig cfg;
    cfg.seed = seed;
    auto r = PrepareAndAllocate(FuzzFunction(cfg), TargetModel{}, c);
    EXPECT_EQ(r.stats.disjointness_violations, 0) << "seed " << seed;
  }
}

TEST(Allocate, BothOrdersAndVariantsAreSound) {
  for (OrderKind order : {OrderKind::kLayout, OrderKind::kReversePostOrder}) {
    for (LatstVariant variant : {LatstVariant::kScan, LatstVariant::kOrdered}) {
      AllocatorConfig c;
      c.order = order;
      c.latst = variant;
      for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        FuzzConfig cfg;
        cfg.seed = seed;
        auto r = PrepareAndAllocate(FuzzFunction(cfg), TargetModel{}, c);
        EXPECT_TRUE(VerifyAllocation(r, TargetModel{}).ok()) << "seed " << seed;
      }
    }
  }
}

TEST(Allocate, RetryLimitCarriesHistory) {
  AllocatorConfig c;
  c.max_retries = 0;
  try {
    PrepareAndAllocate(ConstraintStressFunction(20, 1), TargetModel{}, c);
    FAIL() << "expected RetryLimitExceeded";
  } catch (const RetryLimitExceeded& e) {
    ASSERT_EQ(e.retries().size(), 1u);
    EXPECT_NE(std::string(e.what()).find("did not converge"), std::string::npos);
  }
}

TEST(LowerBound, CountsWideTwice) {
  Function f = Prepare(MustParse(
      "func @f(p: int) {\nb0:\n  a = add.wide p, p\n  b = add p, p\n  c = add.wide a, b\n"
      "  d = add c, p\n  ret d\n}\n"));
  Liveness live = ComputeLiveness(f);
  // At b: a (2) + b (1) + p (1).
  EXPECT_EQ(RegisterLowerBound(f, live), 4);
}

TEST(EmitMoves, SameRegisterPhiMoveElided) {
  Function f = MustParse(R"(
func @f(p: int) {
b0:
  m = phi-move p
  br b1
b1:
  x = phi [m, b0]
  ret x
}
)");
  std::vector<int> reg(f.instr_capacity(), kNoRegister);
  reg[ByName(f, "p")] = 0;
  reg[ByName(f, "m")] = 0;
  reg[ByName(f, "x")] = 0;
  auto moves = EmitMoves(f, ComputeLayoutOrder(f, OrderKind::kLayout), reg);
  EXPECT_TRUE(moves.emitted.empty());
  EXPECT_EQ(moves.elided_moves.size(), 1u);
}

constexpr const char* kTwoCopies = R"(
func @f(p: int) {
b0:
  a = move p
  s = add a, a
  c = lt s, s
  TERM
b1:
  b = move p
  t = add b, s
  ret t
b2:
  ret s
}
)";

std::vector<int> TwoCopiesAssignment(const Function& f) {
  std::vector<int> reg(f.instr_capacity(), kNoRegister);
  reg[ByName(f, "p")] = 3;
  reg[ByName(f, "a")] = 1;
  reg[ByName(f, "s")] = 0;
  reg[ByName(f, "c")] = 2;
  reg[ByName(f, "b")] = 1;
  reg[ByName(f, "t")] = 0;
  return reg;
}

TEST(EmitMoves, RepeatedCopyElidedAcrossFallThrough) {
  std::string text = kTwoCopies;
  text.replace(text.find("TERM"), 4, "br b1");
  text.erase(text.find("b2:"), std::string("b2:\n  ret s\n").size());
  Function f = MustParse(text);
  auto moves = EmitMoves(f, ComputeLayoutOrder(f, OrderKind::kLayout), TwoCopiesAssignment(f));
  EXPECT_EQ(moves.emitted, (std::vector<InstrId>{ByName(f, "a")}));
  EXPECT_EQ(moves.elided_moves, (std::vector<InstrId>{ByName(f, "b")}));
}

TEST(EmitMoves, MapClearedAtBranchBoundary) {
  std::string text = kTwoCopies;
  text.replace(text.find("TERM"), 4, "condbr c, b1, b2");
  Function f = MustParse(text);
  auto moves = EmitMoves(f, ComputeLayoutOrder(f, OrderKind::kLayout), TwoCopiesAssignment(f));
  EXPECT_EQ(moves.emitted.size(), 2u);
  EXPECT_TRUE(moves.elided_moves.empty());
}

TEST(EmitMoves, SecondCopyInBlockElided) {
  Function f = MustParse(
      "func @f(p: int) {\nb0:\n  a = move p\n  s = add a, a\n  b = move p\n  t = add b, s\n"
      "  ret t\n}\n");
  std::vector<int> reg(f.instr_capacity(), kNoRegister);
  reg[ByName(f, "p")] = 2;
  reg[ByName(f, "a")] = 1;
  reg[ByName(f, "s")] = 0;
  reg[ByName(f, "b")] = 1;
  reg[ByName(f, "t")] = 0;
  auto moves = EmitMoves(f, ComputeLayoutOrder(f, OrderKind::kLayout), reg);
  EXPECT_EQ(moves.elided_moves, (std::vector<InstrId>{ByName(f, "b")}));
}

TEST(TopValue, FollowsMoveChains) {
  Function f = MustParse(
      "func @f(p: int) {\nb0:\n  a = move p\n  b = move a\n  c = swap-move b\n  d = move c\n"
      "  ret d\n}\n");
  EXPECT_EQ(TopValue(f, ByName(f, "b"), true), ByName(f, "p"));
  EXPECT_EQ(TopValue(f, ByName(f, "d"), true), ByName(f, "c"));
  EXPECT_EQ(TopValue(f, ByName(f, "d"), false), ByName(f, "p"));
}

// White-box checks of the splitting remedy.
class Split : public ::testing::Test {
 protected:
  std::vector<InstrId> Run(Function& f, std::vector<std::string_view> blockers,
                           FillStrategy fill = FillStrategy::kCheapest) {
    RetryCause cause;
    cause.kind = RetryKind::kSplitLiveRange;
    cause.needed = EncodingClass::kReg4;
    for (auto name : blockers) cause.blockers.push_back(ByName(f, name));
    std::set<InstrId> split;
    return internal::SplitLiveRange(f, TargetModel{}, cause, fill, split);
  }
};

TEST_F(Split, ConstantFavored) {
  Function f = MustParse(
      "func @f(p: int) {\nb0:\n  k = const 5\n  v = add p, p\n  a = lt v, k\n  b = lt a, k\n"
      "  c = lt b, k\n  d = lt c, v\n  ret d\n}\n");
  InstrId k = ByName(f, "k");
  auto added = Run(f, {"v", "k"});
  EXPECT_TRUE(f.instr(k).removed);
  EXPECT_EQ(added.size(), 3u);
  for (InstrId id : added) EXPECT_EQ(f.instr(id).kind, Kind::kConst);
  EXPECT_TRUE(ValidateSsa(f).empty());
}

constexpr const char* kOneBlockUses = R"(
func @f(p: int) {
b0:
  v = add p, p
  w = add v, p
  a = lt v, p
  b = lt v, a
  c = lt v, b
  d = add c, w
  ret d
}
)";

TEST_F(Split, OneNarrowUseGetsOneFill) {
  Function f = MustParse(
      "func @f(p: int) {\nb0:\n  v = add p, p\n  w = add v, p\n  a = lt v, w\n  ret a\n}\n");
  auto added = Run(f, {"v"});
  EXPECT_EQ(CountKind(f, Kind::kSpillMove), 1);
  EXPECT_EQ(CountKind(f, Kind::kFillMove), 1);
  // The Reg8 user reads the spill directly.
  const Instruction& w = f.instr(ByName(f, "w"));
  EXPECT_EQ(f.instr(w.inputs[0]).kind, Kind::kSpillMove);
  EXPECT_EQ(added.size(), 2u);
}

TEST_F(Split, SameBlockUsesShareOneFill) {
  Function f = MustParse(kOneBlockUses);
  Run(f, {"v"});
  EXPECT_EQ(CountKind(f, Kind::kFillMove), 1);
  Function g = MustParse(kOneBlockUses);
  Run(g, {"v"}, FillStrategy::kPerUse);
  EXPECT_EQ(CountKind(g, Kind::kFillMove), 3);
}

TEST_F(Split, ScatteredUsesFillEach) {
  Function f = MustParse(R"(
func @f(p: int) {
b0:
  v = add p, p
  c = lt v, p
  condbr c, b1, b2
b1:
  x = lt v, p
  ret x
b2:
  y = lt p, v
  ret y
}
)");
  Run(f, {"v"});
  EXPECT_EQ(CountKind(f, Kind::kFillMove), 3);
  EXPECT_TRUE(ValidateSsa(f).empty());
}

}  // namespace
}  // namespace ifscan
