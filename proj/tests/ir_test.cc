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

#include "ifscan/fuzz.h"
#include "ifscan/ir.h"
#include "oracles.h"

namespace ifscan {
namespace {

using testing::ByName;
using testing::MustParse;

constexpr const char* kDiamond = R"(
func @d(p: int) {
entry:
  c = lt p, p
  condbr c, left, right
left:
  a = add p, p
  br join
right:
  b = sub p, p
  br join
join:
  m = phi [b, right], [a, left]
  ret m
}
)";

TEST(Parse, MinimalFunction) {
  Function f = MustParse("func @f() {\nb0:\n  v0 = const 1\n  ret\n}\n");
  EXPECT_EQ(f.name, "f");
  ASSERT_EQ(f.num_blocks(), 1u);
  EXPECT_EQ(f.block(f.entry).instructions.size(), 2u);
  EXPECT_EQ(f.instr(ByName(f, "v0")).literal, 1);
}

TEST(Parse, PhiInputsFollowPredecessorOrder) {
  Function f = MustParse(kDiamond);
  const Instruction& m = f.instr(ByName(f, "m"));
  const BasicBlock& join = f.block(m.block);
  ASSERT_EQ(join.predecessors.size(), 2u);
  ASSERT_EQ(m.inputs.size(), 2u);
  for (std::size_t k = 0; k < m.inputs.size(); ++k) {
    EXPECT_EQ(m.phi_blocks[k], join.predecessors[k]);
    EXPECT_EQ(f.instr(m.inputs[k]).block, join.predecessors[k]);
  }
}

TEST(Parse, PhiArityMismatchIsRejected) {
  std::string text = kDiamond;
  text.replace(text.find("[a, left]"), 9, "[a, left], [p, entry]");
  EXPECT_THROW(ParseFunction(text), ParseError);
}

TEST(Parse, ErrorsCarryLineAndColumn) {
  try {
    ParseFunction("func @f() {\nb0:\n  v1 = add v0, v0\n  ret\n}\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 12);
    EXPECT_NE(std::string(e.what()).find("undefined value 'v0'"), std::string::npos);
  }
}

TEST(Parse, DuplicateNameIsRejected) {
  EXPECT_THROW(ParseFunction("func @f() {\nb0:\n  v = const 1\n  v = const 2\n  ret v\n}\n"),
               ParseError);
}

TEST(Parse, SyntaxErrors) {
  EXPECT_THROW(ParseFunction("func f() {}"), ParseError);
  EXPECT_THROW(ParseFunction("func @f() {\nb0:\n  v = frob 1\n  ret\n}\n"), ParseError);
  EXPECT_THROW(ParseFunction("func @f(x: float) {\nb0:\n  ret\n}\n"), ParseError);
  EXPECT_THROW(ParseFunction("func @f() {\nb0:\n  v = const 1 !shiny\n  ret v\n}\n"), ParseError);
}

TEST(Parse, WideParamsAndFlags) {
  Function f = MustParse(
      "func @f(a: long, b: int) {\nb0:\n  k = const 3 !foldable\n"
      "  s = add.wide a, k !two_addr,clobber_hint\n  ret s\n}\n");
  EXPECT_EQ(f.instr(f.params[0]).width, 2);
  EXPECT_EQ(f.instr(f.params[1]).width, 1);
  const Instruction& s = f.instr(ByName(f, "s"));
  EXPECT_EQ(s.width, 2);
  EXPECT_TRUE(s.two_address_capable);
  EXPECT_TRUE(s.clobber_hint);
  EXPECT_TRUE(f.instr(ByName(f, "k")).is_folded_constant());
}

TEST(Parse, CommentsAreIgnored) {
  Function f = MustParse("# leading\nfunc @f() { # here\nb0:\n  v = const 1 # tail\n  ret v\n}\n");
  EXPECT_EQ(f.instructions().size(), 2u);
}

TEST(Print, RoundTripsFuzzedFunctions) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    FuzzConfig cfg;
    cfg.seed = seed;
    Function f = FuzzFunction(cfg);
    Function again = ParseFunction(PrintFunction(f));
    EXPECT_TRUE(StructurallyEqual(f, again)) << "seed " << seed;
    EXPECT_EQ(PrintFunction(again), PrintFunction(f));
  }
}

TEST(Validate, StraightLineIsClean) {
  Function f = MustParse("func @f(p: int) {\nb0:\n  a = add p, p\n  b = mul a, p\n  ret b\n}\n");
  EXPECT_TRUE(ValidateSsa(f).empty());
}

TEST(Validate, UseOutsideDominatedRegion) {
  std::string text = kDiamond;
  text.replace(text.find("ret m"), 5, "ret a");
  Function f = ParseFunction(text);
  auto problems = ValidateSsa(f);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_EQ(problems[0].kind, ViolationKind::kDominance);
}

TEST(Validate, PhiNotAtBlockHead) {
  std::string text = kDiamond;
  text.replace(text.find("  m = phi"), 0, "  z = add p, p\n");
  Function f = ParseFunction(text);
  auto problems = ValidateSsa(f);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_EQ(problems[0].kind, ViolationKind::kPhiPlacement);
}

TEST(Validate, FuzzedFunctionsAreValid) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    FuzzConfig cfg;
    cfg.seed = seed;
    EXPECT_TRUE(ValidateSsa(FuzzFunction(cfg)).empty()) << "seed " << seed;
  }
}

TEST(Uses, SimpleChain) {
  Function f = MustParse("func @f(a: int, b: int) {\nb0:\n  c = add a, b\n  ret c\n}\n");
  UsesMap uses = ComputeUses(f);
  InstrId a = ByName(f, "a"), b = ByName(f, "b"), c = ByName(f, "c");
  InstrId ret = f.Terminator(f.entry);
  EXPECT_EQ(uses.of(a), (std::vector<Use>{{c, 0}}));
  EXPECT_EQ(uses.of(b), (std::vector<Use>{{c, 1}}));
  EXPECT_EQ(uses.of(c), (std::vector<Use>{{ret, 0}}));
}

TEST(Uses, UnusedValueHasNoUses) {
  Function f = MustParse("func @f() {\nb0:\n  v5 = const 5\n  ret\n}\n");
  EXPECT_TRUE(ComputeUses(f).of(ByName(f, "v5")).empty());
}

TEST(Uses, DuplicateInputListedTwice) {
  Function f = MustParse("func @f(v0: int) {\nb0:\n  v1 = add v0, v0\n  ret v1\n}\n");
  UsesMap uses = ComputeUses(f);
  InstrId v1 = ByName(f, "v1");
  EXPECT_EQ(uses.of(ByName(f, "v0")), (std::vector<Use>{{v1, 0}, {v1, 1}}));
}

TEST(Uses, InverseRebuildsInputLists) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    FuzzConfig cfg;
    cfg.seed = seed;
    Function f = FuzzFunction(cfg);
    UsesMap uses = ComputeUses(f);
    std::vector<std::vector<InstrId>> rebuilt(f.instr_capacity());
    for (InstrId id : f.instructions()) rebuilt[id].resize(f.instr(id).inputs.size(), kNoInstr);
    for (InstrId id : f.instructions()) {
      for (const Use& u : uses.of(id)) rebuilt[u.user][u.index] = id;
    }
    for (InstrId id : f.instructions()) EXPECT_EQ(rebuilt[id], f.instr(id).inputs);
  }
}

TEST(Positions, TotalOrderWithinBlocks) {
  FuzzConfig cfg;
  cfg.seed = 9;
  Function f = FuzzFunction(cfg);
  for (const BasicBlock& b : f.blocks()) {
    for (std::size_t k = 0; k < b.instructions.size(); ++k) {
      EXPECT_EQ(f.instr(b.instructions[k]).position, static_cast<int>(k));
      EXPECT_EQ(f.instr(b.instructions[k]).block, b.id);
    }
  }
}

TEST(LoopHeaders, BackEdgeTargetMarked) {
  Function f = MustParse(R"(
func @l(n: int) {
b0:
  z = const 0
  br b1
b1:
  i = phi [z, b0], [j, b2]
  c = lt i, n
  condbr c, b2, b3
b2:
  one = const 1
  j = add i, one
  br b1
b3:
  ret i
}
)");
  for (const BasicBlock& b : f.blocks()) EXPECT_EQ(b.loop_header, b.label == "b1") << b.label;
}

}  // namespace
}  // namespace ifscan
