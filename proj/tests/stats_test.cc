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

#include <nlohmann/json.hpp>

#include "ifscan/allocator.h"
#include "ifscan/fuzz.h"
#include "ifscan/stats.h"
#include "oracles.h"

namespace ifscan {
namespace {

using testing::MustParse;

TEST(Stats, SingleBlockMakesNoQueries) {
  auto r = PrepareAndAllocate(
      MustParse("func @f(p: int) {\nb0:\n  a = add p, p\n  b = mul a, p\n  ret b\n}\n"),
      TargetModel{});
  EXPECT_EQ(r.stats.lats_calls_total, 0);
  EXPECT_EQ(r.stats.functions, 1);
  EXPECT_EQ(r.stats.blocks, 1);
}

TEST(Stats, UnusedValueCounted) {
  auto r = PrepareAndAllocate(
      MustParse("func @f(p: int) {\nb0:\n  dead = add p, p\n  ret p\n}\n"), TargetModel{});
  EXPECT_GE(r.stats.use_kinds.no_uses, 1);
}

TEST(Stats, OneGrowRetry) {
  // Two narrow operands plus a parameter parked above them.
  auto r = PrepareAndAllocate(
      MustParse("func @f(p: int) {\nb0:\n  a = add p, p\n  b = lt a, p\n  ret b\n}\n"),
      TargetModel{});
  std::int64_t grows = 0;
  for (const RetryCause& c : r.retries) grows += c.kind == RetryKind::kGrowRegisters;
  EXPECT_EQ(r.stats.retries_grow_registers, grows);
  EXPECT_EQ(r.stats.retries_total(), static_cast<std::int64_t>(r.retries.size()));
}

TEST(Stats, SameAndCrossBlockSumToTotal) {
  AllocStats all;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    FuzzConfig cfg;
    cfg.seed = seed;
    auto r = PrepareAndAllocate(FuzzFunction(cfg), TargetModel{});
    EXPECT_EQ(r.stats.lats_same_block + r.stats.lats_cross_block, r.stats.lats_calls_total);
    all.Merge(r.stats);
  }
  EXPECT_EQ(all.functions, 50);
  EXPECT_EQ(all.lats_same_block + all.lats_cross_block, all.lats_calls_total);
}

TEST(UseKinds, Partition) {
  Function f = MustParse(R"(
func @f(p: int) {
b0:
  none = add p, p
  one = add p, p
  local = add p, p
  x = add local, one
  y = add local, x
  far = add p, p
  z = add far, y
  br b1
b1:
  w = add far, z
  ret w
}
)");
  UseKinds k = ClassifyUses(f, ComputeUses(f));
  EXPECT_EQ(k.no_uses, 1);       // none
  EXPECT_EQ(k.single_use, 5);    // one, x, y, z, w
  EXPECT_EQ(k.defining_block_only, 2);  // p, local
  EXPECT_EQ(k.other_blocks, 1);  // far
  EXPECT_EQ(k.total(), 9);
}

TEST(UseKinds, EveryDefinitionInOneBucket) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    FuzzConfig cfg;
    cfg.seed = seed;
    Function f = Prepare(FuzzFunction(cfg));
    std::int64_t defs = 0;
    for (InstrId id : f.instructions()) defs += f.instr(id).needs_register();
    EXPECT_EQ(ClassifyUses(f, ComputeUses(f)).total(), defs);
  }
}

TEST(StatsText, FlatSortedJson) {
  AllocStats s;
  s.functions = 2;
  s.lats_calls_total = 6;
  s.instructions_processed = 4;
  std::string text = StatsToText(s);
  ASSERT_EQ(text.back(), '\n');
  auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["functions"], 2);
  EXPECT_DOUBLE_EQ(j["lats_calls_per_instruction"].get<double>(), 1.5);
  std::string prev;
  for (auto it = j.begin(); it != j.end(); ++it) {
    EXPECT_FALSE(it.value().is_object());
  }
  // Keys appear in sorted order in the text itself.
  auto ordered = nlohmann::ordered_json::parse(text);
  for (auto it = ordered.begin(); it != ordered.end(); ++it) {
    EXPECT_LT(prev, it.key());
    prev = it.key();
  }
}

TEST(StatsText, TimingsOnlyWhenRequested) {
  Function f = MustParse("func @f(p: int) {\nb0:\n  ret p\n}\n");
  EXPECT_TRUE(PrepareAndAllocate(f, TargetModel{}).stats.phase_times.empty());
  AllocatorConfig c;
  c.record_timings = true;
  EXPECT_FALSE(PrepareAndAllocate(f, TargetModel{}, c).stats.phase_times.empty());
}

}  // namespace
}  // namespace ifscan
