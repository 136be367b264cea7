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

#ifndef IFSCAN_TESTS_ORACLES_H_
#define IFSCAN_TESTS_ORACLES_H_

#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "ifscan/ir.h"

namespace ifscan::testing {

// Parses and asserts the result is valid SSA; throws on either failure.
Function MustParse(std::string_view text);

InstrId ByName(const Function& f, std::string_view name);

// Block-level liveness by repeated sweeps in id order over std::set, with
// phi inputs live at the end of their predecessor.
struct NaiveLiveness {
  std::vector<std::set<InstrId>> in;
  std::vector<std::set<InstrId>> out;
};
NaiveLiveness NaiveBlockLiveness(const Function& f);

// Registers occupied at each program point of a linearization. Point 0 of a
// block is its entry (live-ins plus phi results); every non-phi instruction
// adds one point holding its result and what is live after it.
struct Occupancy {
  std::vector<std::set<InstrId>> points;
  // First point of each block, by block id.
  std::vector<int> block_start;
};
Occupancy NaiveOccupancy(const Function& f, const std::vector<BlockId>& order);

bool BruteInterferes(const Occupancy& occ, InstrId a, InstrId b);

// Largest sum of widths over all points.
int MaxLiveWidth(const Function& f, const Occupancy& occ);

// Textbook linear scan over half-open [start, end) intervals: lowest free
// register, no spilling. A register frees at its occupant's last point, so
// an interval starting there may take it. Result is parallel to input.
std::vector<int> TextbookLinearScan(const std::vector<std::pair<int, int>>& intervals);

}  // namespace ifscan::testing

#endif  // IFSCAN_TESTS_ORACLES_H_
