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

#include <stdexcept>

#include "ifscan/target.h"
#include "oracles.h"

namespace ifscan {
namespace {

using testing::ByName;
using testing::MustParse;

Instruction Op(Kind kind, std::string op = "", int width = 1) {
  Instruction in;
  in.kind = kind;
  in.op = std::move(op);
  in.width = width;
  return in;
}

TEST(EncodingClass, DefaultTable) {
  TargetModel t;
  EXPECT_EQ(t.EncodingClassOf(Op(Kind::kBinaryOp, "add")), EncodingClass::kReg8);
  EXPECT_EQ(t.EncodingClassOf(Op(Kind::kUnaryOp, "neg")), EncodingClass::kReg8);
  EXPECT_EQ(t.EncodingClassOf(Op(Kind::kBinaryOp, "lt")), EncodingClass::kReg4);
  EXPECT_EQ(t.EncodingClassOf(Op(Kind::kMove)), EncodingClass::kReg16);
  EXPECT_EQ(t.EncodingClassOf(Op(Kind::kPhiMove)), EncodingClass::kReg16);
  Instruction call = Op(Kind::kInvoke);
  EXPECT_EQ(t.EncodingClassOf(call), EncodingClass::kReg4);
  call.range_invoke = true;
  EXPECT_EQ(t.EncodingClassOf(call), EncodingClass::kReg16);
}

TEST(EncodingClass, TwoAddressFormIsNarrower) {
  TargetModel t;
  Instruction add = Op(Kind::kBinaryOp, "add");
  add.two_address_capable = true;
  EXPECT_EQ(t.EncodingClassOf(add, false), EncodingClass::kReg8);
  EXPECT_EQ(t.EncodingClassOf(add, true), EncodingClass::kReg4);
  add.two_address_capable = false;
  EXPECT_EQ(t.EncodingClassOf(add, true), EncodingClass::kReg8);
}

TEST(EncodingClass, UniformOverridesEverything) {
  TargetModel t = TargetModel::Uniform(EncodingClass::kReg16);
  for (int k = 0; k < static_cast<int>(ClassKey::kCount); ++k) {
    EXPECT_EQ(t.class_for(static_cast<ClassKey>(k)), EncodingClass::kReg16);
  }
}

TEST(Fits, ClassBounds) {
  TargetModel t;
  EXPECT_TRUE(t.Fits(12, 1, EncodingClass::kReg4));
  EXPECT_FALSE(t.Fits(16, 1, EncodingClass::kReg4));
  EXPECT_TRUE(t.Fits(254, 2, EncodingClass::kReg8));
  EXPECT_FALSE(t.Fits(255, 2, EncodingClass::kReg8));
  EXPECT_TRUE(t.Fits(65535, 1, EncodingClass::kReg16));
  EXPECT_FALSE(t.Fits(65535, 2, EncodingClass::kReg16));
}

TEST(Fits, InstructionForm) {
  TargetModel t;
  EXPECT_TRUE(t.Fits(12, Op(Kind::kBinaryOp, "lt")));
  EXPECT_FALSE(t.Fits(16, Op(Kind::kBinaryOp, "lt")));
  EXPECT_FALSE(t.Fits(255, Op(Kind::kBinaryOp, "add", 2)));
}

TEST(Fits, MonotoneInClass) {
  TargetModel t;
  for (int r = 0; r < 70000; r += 7) {
    for (int w : {1, 2}) {
      if (t.Fits(r, w, EncodingClass::kReg4)) EXPECT_TRUE(t.Fits(r, w, EncodingClass::kReg8));
      if (t.Fits(r, w, EncodingClass::kReg8)) EXPECT_TRUE(t.Fits(r, w, EncodingClass::kReg16));
    }
  }
}

TEST(Fits, RespectsMaxRegisters) {
  TargetModel t;
  t.set_max_registers(10);
  EXPECT_TRUE(t.Fits(9, 1, EncodingClass::kReg16));
  EXPECT_FALSE(t.Fits(9, 2, EncodingClass::kReg16));
  EXPECT_THROW(t.set_max_registers(0), std::invalid_argument);
}

TEST(ParameterRegisters, FourSingleOfTen) {
  Function f = MustParse("func @f(a: int, b: int, c: int, d: int) {\nb0:\n  ret a\n}\n");
  EXPECT_EQ(ParameterRegisters(f, 10), (std::vector<int>{6, 7, 8, 9}));
}

TEST(ParameterRegisters, WidePair) {
  Function f = MustParse("func @f(a: int, b: long) {\nb0:\n  ret a\n}\n");
  EXPECT_EQ(ParameterRegisters(f, 4), (std::vector<int>{1, 2}));
}

TEST(ParameterRegisters, NoneAndTooFew) {
  Function none = MustParse("func @f() {\nb0:\n  ret\n}\n");
  EXPECT_TRUE(ParameterRegisters(none, 3).empty());
  Function f = MustParse("func @f(a: long, b: long) {\nb0:\n  ret a\n}\n");
  EXPECT_THROW(ParameterRegisters(f, 3), std::invalid_argument);
}

TEST(ParameterRegisters, ConsecutiveAndTopAligned) {
  Function f = MustParse(
      "func @f(a: long, b: int, c: double, d: ref, e: int) {\nb0:\n  ret b\n}\n");
  for (int total : {8, 9, 20, 300}) {
    auto regs = ParameterRegisters(f, total);
    int next = regs.front();
    for (std::size_t k = 0; k < regs.size(); ++k) {
      EXPECT_EQ(regs[k], next);
      next += f.instr(f.params[k]).width;
    }
    EXPECT_EQ(next, total);
  }
}

TEST(RangeRequirement, WideCountsTwice) {
  Function f = MustParse(
      "func @f(a: long, b: int) {\nb0:\n  r = invoke a, b !range\n  s = invoke a, b\n"
      "  ret r\n}\n");
  auto req = RangeRequirementOf(f, f.instr(ByName(f, "r")));
  ASSERT_TRUE(req.has_value());
  EXPECT_EQ(req->length, 3);
  EXPECT_FALSE(RangeRequirementOf(f, f.instr(ByName(f, "s"))).has_value());
}

TEST(Config, ParsesKeys) {
  TargetModel t = TargetModel::FromConfig(
      "# comment\nmax_registers = 300\nwide_even_alignment=off\nclass.binary-op=reg4\n");
  EXPECT_EQ(t.max_registers(), 300);
  EXPECT_FALSE(t.wide_even_alignment());
  EXPECT_EQ(t.class_for(ClassKey::kBinaryOp), EncodingClass::kReg4);
  EXPECT_EQ(t.class_for(ClassKey::kMove), EncodingClass::kReg16);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(TargetModel::FromConfig("nonsense\n"), std::invalid_argument);
  EXPECT_THROW(TargetModel::FromConfig("class.foo=reg4\n"), std::invalid_argument);
  EXPECT_THROW(TargetModel::FromConfig("class.move=reg5\n"), std::invalid_argument);
  EXPECT_THROW(TargetModel::FromConfig("max_registers=70000\n"), std::invalid_argument);
  EXPECT_THROW(TargetModel::FromConfig("shiny=on\n"), std::invalid_argument);
}

}  // namespace
}  // namespace ifscan
