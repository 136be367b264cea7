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

#include "ifscan/stats.h"

#include <algorithm>

namespace ifscan {

UseKinds ClassifyUses(const Function& f, const UsesMap& uses) {
  UseKinds out;
  for (InstrId id : f.instructions()) {
    const Instruction& in = f.instr(id);
    if (!in.needs_register()) continue;
    const auto& list = uses.of(id);
    if (list.empty()) {
      ++out.no_uses;
    } else if (list.size() == 1) {
      ++out.single_use;
    } else if (std::all_of(list.begin(), list.end(),
                           [&](const Use& u) { return f.instr(u.user).block == in.block; })) {
      ++out.defining_block_only;
    } else {
      ++out.other_blocks;
    }
  }
  return out;
}

double AllocStats::lats_calls_per_instruction() const {
  if (instructions_processed == 0) return 0.0;
  return static_cast<double>(lats_calls_total) / static_cast<double>(instructions_processed);
}

void AllocStats::Merge(const AllocStats& o) {
  functions += o.functions;
  instructions += o.instructions;
  blocks += o.blocks;
  total_registers += o.total_registers;
  lats_calls_total += o.lats_calls_total;
  lats_same_block += o.lats_same_block;
  lats_cross_block += o.lats_cross_block;
  lats_max_calls_per_instruction =
      std::max(lats_max_calls_per_instruction, o.lats_max_calls_per_instruction);
  lats_disagreements += o.lats_disagreements;
  lats_asymmetries += o.lats_asymmetries;
  instructions_processed += o.instructions_processed;
  retries_grow_registers += o.retries_grow_registers;
  retries_split_live_range += o.retries_split_live_range;
  retries_pre_allocate_block_moves += o.retries_pre_allocate_block_moves;
  use_kinds.no_uses += o.use_kinds.no_uses;
  use_kinds.single_use += o.use_kinds.single_use;
  use_kinds.defining_block_only += o.use_kinds.defining_block_only;
  use_kinds.other_blocks += o.use_kinds.other_blocks;
  moves_emitted += o.moves_emitted;
  moves_elided += o.moves_elided;
  disjointness_violations += o.disjointness_violations;
  for (const auto& [name, secs] : o.phase_times) {
    auto it = std::find_if(phase_times.begin(), phase_times.end(),
                           [&](const auto& p) { return p.first == name; });
    if (it == phase_times.end()) {
      phase_times.emplace_back(name, secs);
    } else {
      it->second += secs;
    }
  }
}

nlohmann::ordered_json AllocStats::ToJson() const {
  nlohmann::ordered_json j;
  j["blocks"] = blocks;
  j["disjointness_violations"] = disjointness_violations;
  j["functions"] = functions;
  j["instructions"] = instructions;
  j["instructions_processed"] = instructions_processed;
  j["lats_asymmetries"] = lats_asymmetries;
  j["lats_calls_per_instruction"] = lats_calls_per_instruction();
  j["lats_calls_total"] = lats_calls_total;
  j["lats_cross_block"] = lats_cross_block;
  j["lats_disagreements"] = lats_disagreements;
  j["lats_max_calls_per_instruction"] = lats_max_calls_per_instruction;
  j["lats_same_block"] = lats_same_block;
  j["moves_elided"] = moves_elided;
  j["moves_emitted"] = moves_emitted;
  for (const auto& [name, secs] : phase_times) j["phase_times." + name] = secs;
  j["retries.GrowRegisters"] = retries_grow_registers;
  j["retries.PreAllocateBlockMoves"] = retries_pre_allocate_block_moves;
  j["retries.SplitLiveRange"] = retries_split_live_range;
  j["total_registers"] = total_registers;
  j["use_kinds.defining_block_only"] = use_kinds.defining_block_only;
  j["use_kinds.no_uses"] = use_kinds.no_uses;
  j["use_kinds.other_blocks"] = use_kinds.other_blocks;
  j["use_kinds.single_use"] = use_kinds.single_use;
  return j;
}

std::string StatsToText(const AllocStats& stats) { return stats.ToJson().dump(2) + "\n"; }

}  // namespace ifscan
