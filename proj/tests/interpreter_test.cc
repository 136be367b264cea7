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

#include "ifscan/allocator.h"
#include "ifscan/interpreter.h"
#include "oracles.h"

namespace ifscan {
namespace {

using testing::MustParse;

std::vector<std::int64_t> Args(std::initializer_list<std::int64_t> v) { return v; }

void ExpectBothModes(const Function& f, const std::vector<std::int64_t>& args,
                     std::int64_t want) {
  Execution ssa = InterpretSsa(f, args);
  ASSERT_TRUE(ssa.returned()) << ssa.error;
  EXPECT_EQ(ssa.value, want);
  auto r = PrepareAndAllocate(f, TargetModel{});
  Execution regs = InterpretAllocation(r, args);
  ASSERT_TRUE(regs.returned()) << regs.error;
  EXPECT_EQ(regs.value, want);
}

TEST(Interpret, AddParams) {
  ExpectBothModes(MustParse("func @f(a: int, b: int) {\nb0:\n  c = add a, b\n  ret c\n}\n"),
                  Args({2, 3}), 5);
}

TEST(Interpret, LoopSum) {
  Function f = MustParse(R"(
func @sum(n: int) {
b0:
  zero = const 0
  one = const 1
  br b1
b1:
  i = phi [one, b0], [j, b2]
  s = phi [zero, b0], [t, b2]
  c = lt n, i
  condbr c, b3, b2
b2:
  t = add s, i
  j = add i, one
  br b1
b3:
  ret s
}
)");
  ExpectBothModes(f, Args({3}), 6);
  ExpectBothModes(f, Args({10}), 55);
}

// Values swap on every trip; the result depends on the parity of n.
TEST(Interpret, SwapLoopBothParities) {
  Function f = MustParse(R"(
func @s(x: int, y: int, n: int) {
b0:
  zero = const 0
  br b1
b1:
  a = phi [x, b0], [b, b2]
  b = phi [y, b0], [a, b2]
  i = phi [zero, b0], [j, b2]
  c = lt i, n
  condbr c, b2, b3
b2:
  one = const 1
  j = add i, one
  br b1
b3:
  ten = const 10
  t = mul b, ten
  r = sub t, a
  ret r
}
)");
  ExpectBothModes(f, Args({3, 7, 0}), 70 - 3);
  ExpectBothModes(f, Args({3, 7, 1}), 30 - 7);
  ExpectBothModes(f, Args({3, 7, 4}), 70 - 3);
}

TEST(Interpret, WideArithmeticAndInvoke) {
  Function f = MustParse(
      "func @f(a: long, b: int) {\nb0:\n  w = mul.wide a, b\n  r = invoke w, b\n  ret r\n}\n");
  ExpectBothModes(f, Args({1LL << 40, 3}), 7 + (3LL << 40) + 2 * 3);
}

TEST(Interpret, InvokeResultFormula) {
  EXPECT_EQ(InvokeResult(std::vector<std::int64_t>{}), 7);
  EXPECT_EQ(InvokeResult(std::vector<std::int64_t>{5, 1, 2}), 7 + 5 + 2 + 6);
}

TEST(Interpret, StepCap) {
  Function f = MustParse(
      "func @spin(p: int) {\nb0:\n  br b1\nb1:\n  c = lt p, p\n  condbr c, b2, b1\nb2:\n  ret p\n}\n");
  Execution ex = InterpretSsa(f, Args({1}), 1000);
  EXPECT_EQ(ex.status, ExecStatus::kStepLimit);
  EXPECT_LE(ex.steps, 1001);
}

TEST(Interpret, RegisterModeSeesClobberedRegisters) {
  Function f = MustParse("func @f(a: int, b: int) {\nb0:\n  c = add a, b\n  d = add c, a\n  ret d\n}\n");
  auto r = PrepareAndAllocate(f, TargetModel{});
  auto args = Args({4, 9});
  ASSERT_EQ(InterpretAllocation(r, args).value, 17);
  // Putting c on top of a, which is still needed, changes the answer.
  r.assignment[testing::ByName(r.function, "c")] =
      r.register_of(testing::ByName(r.function, "a"));
  EXPECT_NE(InterpretAllocation(r, args).value, 17);
}

TEST(Interpret, TooFewArguments) {
  Function f = MustParse("func @f(a: int) {\nb0:\n  ret a\n}\n");
  EXPECT_THROW(InterpretSsa(f, Args({})), std::invalid_argument);
}

}  // namespace
}  // namespace ifscan
