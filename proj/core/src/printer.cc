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

#include <sstream>

#include "ifscan/ir.h"

namespace ifscan {

namespace {

std::string OpText(const Instruction& in) {
  std::string base;
  switch (in.kind) {
    case Kind::kConst: base = "const"; break;
    case Kind::kUnaryOp:
    case Kind::kBinaryOp: base = in.op; break;
    case Kind::kMove: base = "move"; break;
    case Kind::kPhiMove: base = "phi-move"; break;
    case Kind::kSwapMove: base = "swap-move"; break;
    case Kind::kSpillMove: base = "spill-move"; break;
    case Kind::kFillMove: base = "fill-move"; break;
    case Kind::kGetParamMove: base = "get-param-move"; break;
    case Kind::kPhi: base = "phi"; break;
    case Kind::kInvoke: base = "invoke"; break;
    case Kind::kBranch: return "br";
    case Kind::kCondBranch: return "condbr";
    case Kind::kReturn: return "ret";
    case Kind::kParam: return "param";
  }
  if (in.width == 2) base += ".wide";
  return base;
}

}  // namespace

std::string PrintFunction(const Function& f) {
  std::ostringstream os;
  os << "func @" << f.name << "(";
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    const Instruction& p = f.instr(f.params[i]);
    if (i) os << ", ";
    os << p.name << ": " << p.op;
  }
  os << ") {\n";
  for (const BasicBlock& b : f.blocks()) {
    os << b.label << ":\n";
    for (InstrId id : b.instructions) {
      const Instruction& in = f.instr(id);
      if (in.kind == Kind::kParam) continue;
      os << "  ";
      if (in.defines_value()) os << in.name << " = ";
      os << OpText(in);
      if (in.kind == Kind::kConst) {
        os << " " << in.literal;
      } else if (in.kind == Kind::kPhi) {
        for (std::size_t k = 0; k < in.inputs.size(); ++k) {
          os << (k ? ", [" : " [") << f.instr(in.inputs[k]).name << ", "
             << f.block(in.phi_blocks[k]).label << "]";
        }
      } else {
        bool first = true;
        for (InstrId src : in.inputs) {
          os << (first ? " " : ", ") << f.instr(src).name;
          first = false;
        }
        for (BlockId t : in.targets) {
          os << (first ? " " : ", ") << f.block(t).label;
          first = false;
        }
      }
      std::vector<const char*> flags;
      if (in.foldable) flags.push_back("foldable");
      if (in.clobber_hint) flags.push_back("clobber_hint");
      if (in.range_invoke) flags.push_back("range");
      if (in.two_address_capable) flags.push_back("two_addr");
      for (std::size_t k = 0; k < flags.size(); ++k) {
        os << (k ? ", " : " !") << flags[k];
      }
      os << "\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace ifscan
