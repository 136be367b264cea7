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

#ifndef IFSCAN_STATS_H_
#define IFSCAN_STATS_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ifscan/ir.h"

namespace ifscan {

struct UseKinds {
  std::int64_t no_uses = 0;
  std::int64_t single_use = 0;
  // Two or more uses, all inside the defining block.
  std::int64_t defining_block_only = 0;
  // Two or more uses, at least one outside the defining block.
  std::int64_t other_blocks = 0;

  std::int64_t total() const { return no_uses + single_use + defining_block_only + other_blocks; }
};

// Buckets every register-needing definition of `f`.
UseKinds ClassifyUses(const Function& f, const UsesMap& uses);

struct AllocStats {
  std::int64_t functions = 0;
  std::int64_t instructions = 0;
  std::int64_t blocks = 0;
  std::int64_t total_registers = 0;

  std::int64_t lats_calls_total = 0;
  std::int64_t lats_same_block = 0;
  std::int64_t lats_cross_block = 0;
  // Largest number of queries issued while processing one instruction.
  std::int64_t lats_max_calls_per_instruction = 0;
  // Filled when both query variants are cross-checked.
  std::int64_t lats_disagreements = 0;
  std::int64_t lats_asymmetries = 0;
  // Main-loop instruction visits, counting every retry attempt.
  std::int64_t instructions_processed = 0;

  std::int64_t retries_grow_registers = 0;
  std::int64_t retries_split_live_range = 0;
  std::int64_t retries_pre_allocate_block_moves = 0;

  UseKinds use_kinds;

  std::int64_t moves_emitted = 0;
  std::int64_t moves_elided = 0;
  std::int64_t disjointness_violations = 0;

  // Seconds per phase; filled only when timing was requested.
  std::vector<std::pair<std::string, double>> phase_times;

  std::int64_t retries_total() const {
    return retries_grow_registers + retries_split_live_range + retries_pre_allocate_block_moves;
  }
  // lats_calls_total / instructions_processed.
  double lats_calls_per_instruction() const;

  void Merge(const AllocStats& other);
  nlohmann::ordered_json ToJson() const;
};

// Flat, key-sorted JSON text terminated by a newline.
std::string StatsToText(const AllocStats& stats);

}  // namespace ifscan

#endif  // IFSCAN_STATS_H_
