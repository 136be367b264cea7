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

#include "ifscan/prep.h"

namespace ifscan {

Liveness ComputeLiveness(const Function& f, const LayoutOrder& order) {
  const std::size_t n = f.instr_capacity();
  const std::size_t nb = f.num_blocks();
  Liveness out;
  out.live_in.assign(nb, ValueSet(n));
  out.live_out.assign(nb, ValueSet(n));

  std::vector<ValueSet> defs(nb, ValueSet(n));
  std::vector<ValueSet> upward(nb, ValueSet(n));
  std::vector<ValueSet> seed(nb, ValueSet(n));
  for (const BasicBlock& b : f.blocks()) {
    for (InstrId id : b.instructions) {
      const Instruction& in = f.instr(id);
      if (in.needs_register()) defs[b.id].set(id);
      for (std::size_t k = 0; k < in.inputs.size(); ++k) {
        const Instruction& src = f.instr(in.inputs[k]);
        if (!src.needs_register()) continue;
        if (in.is_phi()) {
          seed[in.phi_blocks[k]].set(src.id);
        } else if (src.block != b.id) {
          upward[b.id].set(src.id);
        }
      }
    }
  }

  for (bool changed = true; changed;) {
    changed = false;
    ++out.iterations;
    for (auto it = order.order.rbegin(); it != order.order.rend(); ++it) {
      BlockId b = *it;
      ValueSet live_out = seed[b];
      for (BlockId s : f.block(b).successors) live_out |= out.live_in[s];
      ValueSet live_in = upward[b] | (live_out - defs[b]);
      if (live_out != out.live_out[b] || live_in != out.live_in[b]) {
        out.live_out[b] = std::move(live_out);
        out.live_in[b] = std::move(live_in);
        changed = true;
      }
    }
  }
  return out;
}

Liveness ComputeLiveness(const Function& f) {
  return ComputeLiveness(f, ComputeLayoutOrder(f, OrderKind::kLayout));
}

}  // namespace ifscan
