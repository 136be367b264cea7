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

#include "ifscan/target.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ifscan {

std::string_view EncodingClassName(EncodingClass c) {
  switch (c) {
    case EncodingClass::kReg4: return "reg4";
    case EncodingClass::kReg8: return "reg8";
    case EncodingClass::kReg16: return "reg16";
  }
  return "?";
}

int ClassLimit(EncodingClass c) {
  switch (c) {
    case EncodingClass::kReg4: return 16;
    case EncodingClass::kReg8: return 256;
    case EncodingClass::kReg16: return kMaxRegisters;
  }
  return kMaxRegisters;
}

EncodingClass Narrowest(EncodingClass a, EncodingClass b) {
  return ClassLimit(a) <= ClassLimit(b) ? a : b;
}

std::string_view ClassKeyName(ClassKey key) {
  switch (key) {
    case ClassKey::kConst: return "const";
    case ClassKey::kUnaryOp: return "unary-op";
    case ClassKey::kBinaryOp: return "binary-op";
    case ClassKey::kCompare: return "compare";
    case ClassKey::kTwoAddress: return "two-address";
    case ClassKey::kMove: return "move";
    case ClassKey::kInvoke: return "invoke";
    case ClassKey::kRangeInvoke: return "range-invoke";
    case ClassKey::kInvokeResult: return "invoke-result";
    case ClassKey::kCondBranch: return "cond-branch";
    case ClassKey::kReturn: return "return";
    case ClassKey::kCount: break;
  }
  return "?";
}

bool IsCompareOp(std::string_view op) { return op == "lt" || op == "eq"; }

TargetModel::TargetModel() {
  table_.fill(EncodingClass::kReg8);
  set_class(ClassKey::kCompare, EncodingClass::kReg4);
  set_class(ClassKey::kTwoAddress, EncodingClass::kReg4);
  set_class(ClassKey::kInvoke, EncodingClass::kReg4);
  set_class(ClassKey::kMove, EncodingClass::kReg16);
  set_class(ClassKey::kRangeInvoke, EncodingClass::kReg16);
}

TargetModel TargetModel::Uniform(EncodingClass c) {
  TargetModel t;
  t.table_.fill(c);
  return t;
}

void TargetModel::set_max_registers(int n) {
  if (n < 1 || n > kMaxRegisters) {
    throw std::invalid_argument("max_registers must be in [1, 65536]");
  }
  max_registers_ = n;
}

namespace {

std::string Trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

EncodingClass ParseClass(const std::string& v) {
  if (v == "reg4") return EncodingClass::kReg4;
  if (v == "reg8") return EncodingClass::kReg8;
  if (v == "reg16") return EncodingClass::kReg16;
  throw std::invalid_argument("unknown encoding class '" + v + "'");
}

bool ParseBool(const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw std::invalid_argument("expected on/off, got '" + v + "'");
}

}  // namespace

TargetModel TargetModel::FromConfig(std::string_view text) {
  TargetModel t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    std::string value = Trim(std::string_view(trimmed).substr(eq + 1));
    try {
      if (key == "max_registers") {
        t.set_max_registers(std::stoi(value));
      } else if (key == "wide_even_alignment") {
        t.set_wide_even_alignment(ParseBool(value));
      } else if (key.starts_with("class.")) {
        std::string name = key.substr(6);
        bool found = false;
        for (int k = 0; k < static_cast<int>(ClassKey::kCount); ++k) {
          if (ClassKeyName(static_cast<ClassKey>(k)) == name) {
            t.set_class(static_cast<ClassKey>(k), ParseClass(value));
            found = true;
          }
        }
        if (!found) throw std::invalid_argument("unknown class key '" + name + "'");
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": value out of range");
    }
  }
  return t;
}

EncodingClass TargetModel::EncodingClassOf(const Instruction& in) const {
  switch (in.kind) {
    case Kind::kConst: return class_for(ClassKey::kConst);
    case Kind::kUnaryOp: return class_for(ClassKey::kUnaryOp);
    case Kind::kBinaryOp:
      return IsCompareOp(in.op) ? class_for(ClassKey::kCompare)
                                : class_for(ClassKey::kBinaryOp);
    case Kind::kMove:
    case Kind::kPhiMove:
    case Kind::kSwapMove:
    case Kind::kSpillMove:
    case Kind::kFillMove:
    case Kind::kGetParamMove:
      return class_for(ClassKey::kMove);
    case Kind::kInvoke:
      return in.range_invoke ? class_for(ClassKey::kRangeInvoke)
                             : class_for(ClassKey::kInvoke);
    case Kind::kCondBranch: return class_for(ClassKey::kCondBranch);
    case Kind::kReturn: return class_for(ClassKey::kReturn);
    case Kind::kPhi:
    case Kind::kParam:
    case Kind::kBranch:
      return EncodingClass::kReg16;
  }
  return EncodingClass::kReg16;
}

EncodingClass TargetModel::EncodingClassOf(const Instruction& in, bool two_address_form) const {
  if (two_address_form && in.kind == Kind::kBinaryOp && in.two_address_capable) {
    return class_for(ClassKey::kTwoAddress);
  }
  return EncodingClassOf(in);
}

EncodingClass TargetModel::ResultClassOf(const Instruction& in) const {
  if (in.kind == Kind::kInvoke) return class_for(ClassKey::kInvokeResult);
  return EncodingClassOf(in);
}

bool TargetModel::Fits(int reg, int width, EncodingClass c) const {
  int top = reg + std::max(width, 1) - 1;
  return reg >= 0 && top < ClassLimit(c) && top < max_registers_;
}

bool TargetModel::Fits(int reg, const Instruction& in) const {
  return Fits(reg, in.width, ResultClassOf(in));
}

std::optional<RangeRequirement> RangeRequirementOf(const Function& f, const Instruction& in) {
  if (in.kind != Kind::kInvoke || !in.range_invoke) return std::nullopt;
  RangeRequirement r{0};
  for (InstrId src : in.inputs) r.length += std::max(1, f.instr(src).width);
  if (r.length == 0) return std::nullopt;
  return r;
}

std::vector<int> ParameterRegisters(const Function& f, int total) {
  int needed = 0;
  for (InstrId p : f.params) needed += f.instr(p).width;
  if (needed > total) {
    throw std::invalid_argument("register count " + std::to_string(total) +
                                " cannot hold " + std::to_string(needed) +
                                " parameter registers");
  }
  std::vector<int> regs;
  regs.reserve(f.params.size());
  int next = total - needed;
  for (InstrId p : f.params) {
    regs.push_back(next);
    next += f.instr(p).width;
  }
  return regs;
}

}  // namespace ifscan
