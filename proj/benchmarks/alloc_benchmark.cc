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

#include <benchmark/benchmark.h>

#include <vector>

#include "ifscan/allocator.h"
#include "ifscan/fuzz.h"
#include "ifscan/live_at_same_time.h"
#include "ifscan/prep.h"

namespace {

using namespace ifscan;

std::vector<Function> Corpus(int blocks, int count) {
  std::vector<Function> out;
  for (int k = 0; k < count; ++k) {
    FuzzConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(k + 1);
    cfg.max_blocks = blocks;
    out.push_back(FuzzFunction(cfg));
  }
  return out;
}

void BM_Prepare(benchmark::State& state) {
  auto corpus = Corpus(static_cast<int>(state.range(0)), 32);
  for (auto _ : state) {
    for (const Function& f : corpus) benchmark::DoNotOptimize(Prepare(f));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.size()));
}
BENCHMARK(BM_Prepare)->Arg(1)->Arg(4)->Arg(10);

void BM_Allocate(benchmark::State& state) {
  std::vector<Function> prepared;
  for (Function& f : Corpus(static_cast<int>(state.range(0)), 32)) {
    prepared.push_back(Prepare(std::move(f)));
  }
  TargetModel target;
  AllocatorConfig config;
  config.latst = state.range(1) ? LatstVariant::kOrdered : LatstVariant::kScan;
  for (auto _ : state) {
    for (const Function& f : prepared) {
      benchmark::DoNotOptimize(AllocateFunction(f, target, config));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(prepared.size()));
}
BENCHMARK(BM_Allocate)->ArgsProduct({{1, 4, 10}, {0, 1}});

void BM_Latst(benchmark::State& state) {
  FuzzConfig cfg;
  cfg.seed = 3;
  Function f = Prepare(FuzzFunction(cfg));
  Liveness live = ComputeLiveness(f);
  UsesMap uses = ComputeUses(f);
  std::vector<InstrId> values;
  for (InstrId id : f.instructions()) {
    if (f.instr(id).needs_register()) values.push_back(id);
  }
  const bool ordered = state.range(0) != 0;
  for (auto _ : state) {
    int hits = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = i + 1; j < values.size(); ++j) {
        hits += ordered ? LiveAtTheSameTimeOrdered(f, live, uses, values[i], values[j])
                        : LiveAtTheSameTimeScan(f, live, values[i], values[j]);
      }
    }
    benchmark::DoNotOptimize(hits);
  }
  state.SetLabel(ordered ? "ordered" : "scan");
}
BENCHMARK(BM_Latst)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
