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

#ifndef IFSCAN_TARGET_H_
#define IFSCAN_TARGET_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifscan/ir.h"

namespace ifscan {

// Register-number range an instruction encoding can address.
enum class EncodingClass : std::uint8_t { kReg4, kReg8, kReg16 };

std::string_view EncodingClassName(EncodingClass c);
// One past the highest register the class can name: 16, 256 or 65536.
int ClassLimit(EncodingClass c);
EncodingClass Narrowest(EncodingClass a, EncodingClass b);

// Configuration keys of the kind-to-class table.
enum class ClassKey : std::uint8_t {
  kConst,
  kUnaryOp,
  kBinaryOp,
  kCompare,
  kTwoAddress,
  kMove,
  kInvoke,
  kRangeInvoke,
  kInvokeResult,
  kCondBranch,
  kReturn,
  kCount,
};

std::string_view ClassKeyName(ClassKey key);

// Operands of a range invoke must sit in `length` consecutive registers.
struct RangeRequirement {
  int length = 1;
};

inline constexpr int kMaxRegisters = 65536;
inline constexpr int kMaxNonRangeInvokeRegisters = 5;

class TargetModel {
 public:
  TargetModel();

  // Every constrained kind mapped to `c`.
  static TargetModel Uniform(EncodingClass c);
  // key=value text; see README for the keys.
  static TargetModel FromConfig(std::string_view text);

  int max_registers() const { return max_registers_; }
  void set_max_registers(int n);
  bool wide_even_alignment() const { return wide_even_alignment_; }
  void set_wide_even_alignment(bool on) { wide_even_alignment_ = on; }

  EncodingClass class_for(ClassKey key) const { return table_[static_cast<int>(key)]; }
  void set_class(ClassKey key, EncodingClass c) { table_[static_cast<int>(key)] = c; }

  // Class constraining the register operands of the canonical encoding of
  // `in`. Params and phis are unconstrained pseudo-instructions.
  EncodingClass EncodingClassOf(const Instruction& in) const;
  // As above, but for the compact two-address form where the destination
  // equals the first source.
  EncodingClass EncodingClassOf(const Instruction& in, bool two_address_form) const;
  // Class that applies to the instruction's result register. Differs from
  // the operand class only for invokes, whose result is a separate move.
  EncodingClass ResultClassOf(const Instruction& in) const;

  bool Fits(int reg, int width, EncodingClass c) const;
  // `reg` (and reg+1 for wide results) inside the class of `in`.
  bool Fits(int reg, const Instruction& in) const;

 private:
  int max_registers_ = kMaxRegisters;
  bool wide_even_alignment_ = true;
  std::array<EncodingClass, static_cast<int>(ClassKey::kCount)> table_;
};

bool IsCompareOp(std::string_view op);

std::optional<RangeRequirement> RangeRequirementOf(const Function& f, const Instruction& in);

// Parameters arrive in the highest-numbered registers, consecutively in
// declaration order. Result is parallel to f.params. Throws
// std::invalid_argument if `total` cannot hold them.
std::vector<int> ParameterRegisters(const Function& f, int total);

}  // namespace ifscan

#endif  // IFSCAN_TARGET_H_
