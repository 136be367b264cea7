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

#ifndef IFSCAN_PREP_H_
#define IFSCAN_PREP_H_

#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "ifscan/ir.h"

namespace ifscan {

using ValueSet = boost::dynamic_bitset<>;

// Block-level liveness. Phi inputs are seeded into the live-outs of the
// matching predecessor and never appear as live-ins of the phi's block.
// Foldable constants appear in no set.
struct Liveness {
  std::vector<ValueSet> live_in;
  std::vector<ValueSet> live_out;
  // Number of sweeps until the sets stopped changing (including the final,
  // unchanged sweep).
  int iterations = 0;

  bool IsLiveIn(BlockId b, InstrId v) const { return live_in[b].test(v); }
  bool IsLiveOut(BlockId b, InstrId v) const { return live_out[b].test(v); }
};

enum class OrderKind { kLayout, kReversePostOrder };

struct LayoutOrder {
  std::vector<BlockId> order;
  OrderKind kind = OrderKind::kLayout;
};

LayoutOrder ComputeLayoutOrder(const Function& f, OrderKind kind);

// Least fixed point of the backward dataflow, sweeping blocks in reverse of
// `order`.
Liveness ComputeLiveness(const Function& f, const LayoutOrder& order);
Liveness ComputeLiveness(const Function& f);

// Moves every constant into the entry block, after the parameters.
Function HoistConstants(Function f);

// Splits every edge whose source has >1 successor and whose target has >1
// predecessor with a block holding only a branch.
Function SplitCriticalEdges(Function f, int* inserted = nullptr);

// Replaces each phi input with a phi-move at the end of the predecessor.
// Copies on one edge are sequentialized; each permutation cycle is broken
// with one swap-move temporary.
Function InsertParallelCopies(Function f);

// Constants with fewer than `threshold` non-folded users are duplicated
// immediately ahead of each user; the original is removed once unused.
Function SplitConstants(Function f, int threshold = 3);

// Sinks side-effect-free instructions to just before their first user in
// the same block.
Function SinkToFirstUse(Function f);

// Range invokes (and invokes whose arguments exceed the non-range limit)
// read their arguments through a block of moves placed right before them.
Function InsertRangeBlockMoves(Function f);

// Marks one invoke as a range invoke and feeds each argument through a move
// placed right before it. Returns the moves.
std::vector<InstrId> InsertBlockMoves(Function& f, InstrId invoke);

bool IsBlockMove(const Function& f, const UsesMap& uses, InstrId id);

struct PrepOptions {
  int constant_split_threshold = 3;
  bool sink = true;
};

// HoistConstants, SplitCriticalEdges, InsertParallelCopies, SplitConstants,
// SinkToFirstUse, InsertRangeBlockMoves.
Function Prepare(Function f, const PrepOptions& options = {});

}  // namespace ifscan

#endif  // IFSCAN_PREP_H_
