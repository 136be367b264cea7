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

#ifndef IFSCAN_LIVE_AT_SAME_TIME_H_
#define IFSCAN_LIVE_AT_SAME_TIME_H_

#include <cstdint>
#include <functional>

#include "ifscan/ir.h"
#include "ifscan/prep.h"

namespace ifscan {

// Interference query over block liveness and in-block order only. Values
// are assumed non-folded and distinct. Phi inputs are not uses in the
// phi's own block.
//
// Walks the instructions of the defining block(s) backward.
bool LiveAtTheSameTimeScan(const Function& f, const Liveness& live, InstrId lhs, InstrId rhs);
// Walks the uses of the relevant value and compares in-block positions.
bool LiveAtTheSameTimeOrdered(const Function& f, const Liveness& live, const UsesMap& uses,
                              InstrId lhs, InstrId rhs);

enum class LatstVariant : std::uint8_t { kScan, kOrdered };

struct LatstQuery {
  InstrId lhs;
  InstrId rhs;
  bool same_block;
  bool result;
};

// Counting front end used by the allocator.
class LatstOracle {
 public:
  LatstOracle(const Function& f, const Liveness& live, const UsesMap& uses, LatstVariant variant)
      : f_(f), live_(live), uses_(uses), variant_(variant) {}

  bool operator()(InstrId lhs, InstrId rhs);

  // Evaluate both variants and both argument orders on every query.
  void set_cross_check(bool on) { cross_check_ = on; }
  void set_observer(std::function<void(const LatstQuery&)> fn) { observer_ = std::move(fn); }

  std::int64_t calls() const { return same_block_ + cross_block_; }
  std::int64_t same_block() const { return same_block_; }
  std::int64_t cross_block() const { return cross_block_; }
  std::int64_t disagreements() const { return disagreements_; }
  std::int64_t asymmetries() const { return asymmetries_; }

 private:
  const Function& f_;
  const Liveness& live_;
  const UsesMap& uses_;
  LatstVariant variant_;
  bool cross_check_ = false;
  std::function<void(const LatstQuery&)> observer_;
  std::int64_t same_block_ = 0;
  std::int64_t cross_block_ = 0;
  std::int64_t disagreements_ = 0;
  std::int64_t asymmetries_ = 0;
};

}  // namespace ifscan

#endif  // IFSCAN_LIVE_AT_SAME_TIME_H_
