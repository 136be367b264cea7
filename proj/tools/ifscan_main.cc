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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ifscan/allocator.h"
#include "ifscan/fuzz.h"
#include "ifscan/interpreter.h"
#include "ifscan/ir.h"
#include "ifscan/stats.h"
#include "ifscan/target.h"
#include "ifscan/verify.h"

namespace {

using namespace ifscan;

enum Exit { kOk = 0, kViolation = 1, kInputError = 2, kRetryLimit = 3 };

// Input problems surface as this, carrying the file name for the diagnostic.
struct InputError {
  std::string message;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path + ": cannot open"};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Function Parse(const std::string& path) {
  std::string text = ReadFile(path);
  try {
    Function f = ParseFunction(text);
    auto problems = ValidateSsa(f);
    if (!problems.empty()) {
      std::string msg = path + ": invalid SSA";
      for (const auto& p : problems) msg += "\n  " + p.message;
      throw InputError{msg};
    }
    return f;
  } catch (const ParseError& e) {
    throw InputError{path + ":" + e.what()};
  }
}

void WriteStats(const std::string& path, const AllocStats& stats) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError{path + ": cannot write"};
  out << StatsToText(stats);
}

std::string Assignment(const AllocationResult& r) {
  std::ostringstream out;
  out << "# registers: " << r.total_registers << "\n";
  for (InstrId id : r.function.instructions()) {
    const Instruction& in = r.function.instr(id);
    if (r.assignment[id] == kNoRegister) continue;
    out << "%" << in.name << " -> r" << r.assignment[id];
    if (in.width == 2) out << ":r" << r.assignment[id] + 1;
    out << "\n";
  }
  return out.str();
}

struct AllocArgs {
  std::string file;
  std::string order = "layout";
  bool verify = false;
  bool baseline = false;
  std::string stats;
  std::string target;
  int max_retries = 100;
};

int RunAlloc(const AllocArgs& a) {
  Function f = Parse(a.file);
  TargetModel target;
  if (!a.target.empty()) {
    try {
      target = TargetModel::FromConfig(ReadFile(a.target));
    } catch (const std::invalid_argument& e) {
      throw InputError{a.target + ": " + e.what()};
    }
  }
  AllocatorConfig config;
  config.order = a.order == "rpo" ? OrderKind::kReversePostOrder : OrderKind::kLayout;
  config.max_retries = a.max_retries;

  AllocationResult r = PrepareAndAllocate(std::move(f), target, config);
  std::cout << PrintFunction(r.function) << Assignment(r);
  for (const RetryCause& cause : r.retries) {
    std::cerr << "retry: " << DescribeRetry(r.function, cause) << "\n";
  }
  if (!a.stats.empty()) WriteStats(a.stats, r.stats);

  if (a.baseline) {
    std::vector<Interval> intervals = BuildIntervals(r.function, r.order);
    try {
      std::vector<int> base = BaselineLinearScan(intervals, r.function.instr_capacity());
      int differing = 0;
      int registers = 0;
      for (const Interval& iv : intervals) {
        registers = std::max(registers, iv.reg + iv.width);
        if (base[iv.value] != r.assignment[iv.value]) ++differing;
      }
      std::cout << "# baseline: registers " << registers << ", differing values " << differing
                << "\n";
    } catch (const BaselineFailure& e) {
      std::cout << "# baseline: " << e.what() << "\n";
    }
  }

  if (a.verify) {
    VerificationReport report = VerifyAllocation(r, target);
    std::cout << report.ToText();
    if (!report.ok()) return kViolation;
  }
  return kOk;
}

struct FuzzArgs {
  FuzzConfig cfg;
  int count = 1;
  bool check = false;
  bool print = false;
  std::string stats;
};

int RunFuzz(const FuzzArgs& a) {
  TargetModel target;
  AllocStats total;
  int failures = 0;
  int retry_limited = 0;
  for (int k = 0; k < a.count; ++k) {
    FuzzConfig cfg = a.cfg;
    cfg.seed = a.cfg.seed + static_cast<std::uint64_t>(k);
    Function f = FuzzFunction(cfg);
    if (a.print) std::cout << PrintFunction(f) << "\n";
    Function original = f;
    std::optional<AllocationResult> attempt;
    try {
      attempt.emplace(PrepareAndAllocate(std::move(f), target));
    } catch (const RetryLimitExceeded& e) {
      ++retry_limited;
      std::cerr << "seed " << cfg.seed << ": " << e.what() << "\n";
      continue;
    }
    const AllocationResult& r = *attempt;
    total.Merge(r.stats);
    if (!a.check) continue;

    VerificationReport report = VerifyAllocation(r, target);
    if (!report.ok()) {
      ++failures;
      std::cerr << "seed " << cfg.seed << ":\n" << report.ToText();
    }
    for (std::uint64_t run = 0; run < 3; ++run) {
      auto inputs = FuzzInputs(original, cfg.seed * 31 + run);
      Execution want = InterpretSsa(original, inputs);
      Execution got = InterpretAllocation(r, inputs);
      if (want.status != got.status || want.value != got.value) {
        ++failures;
        std::cerr << "seed " << cfg.seed << ": register run returned " << got.value
                  << ", expected " << want.value << "\n";
        break;
      }
    }
  }
  if (!a.stats.empty()) WriteStats(a.stats, total);
  std::cout << a.count << " functions, " << failures << " failing, " << retry_limited
            << " over the retry limit\n";
  if (failures > 0) return kViolation;
  return retry_limited > 0 ? kRetryLimit : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval-free scan register allocator driver"};
  app.require_subcommand(1);

  AllocArgs alloc;
  CLI::App* alloc_cmd = app.add_subcommand("alloc", "Allocate registers for one IR file");
  alloc_cmd->add_option("file", alloc.file, "IR file")->required();
  alloc_cmd->add_option("--order", alloc.order, "Block order")
      ->check(CLI::IsMember({"layout", "rpo"}));
  alloc_cmd->add_flag("--verify", alloc.verify, "Check the result with the interference oracle");
  alloc_cmd->add_flag("--baseline", alloc.baseline, "Compare with classic linear scan");
  alloc_cmd->add_option("--stats", alloc.stats, "Write counters as JSON");
  alloc_cmd->add_option("--target", alloc.target, "Target description (key=value lines)");
  alloc_cmd->add_option("--max-retries", alloc.max_retries, "Retry cap")
      ->check(CLI::NonNegativeNumber);

  FuzzArgs fuzz;
  CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "Generate and allocate random functions");
  fuzz_cmd->add_option("--seed", fuzz.cfg.seed, "First seed")->required();
  fuzz_cmd->add_option("--count", fuzz.count, "Number of functions")->required()
      ->check(CLI::PositiveNumber);
  fuzz_cmd->add_flag("--check", fuzz.check, "Verify each allocation and compare executions");
  fuzz_cmd->add_flag("--print", fuzz.print, "Print each generated function");
  fuzz_cmd->add_option("--stats", fuzz.stats, "Write merged counters as JSON");
  fuzz_cmd->add_option("--max-blocks", fuzz.cfg.max_blocks);
  fuzz_cmd->add_option("--max-instrs", fuzz.cfg.max_instrs_per_block);
  fuzz_cmd->add_option("--wide", fuzz.cfg.wide_fraction);
  fuzz_cmd->add_option("--invokes", fuzz.cfg.invoke_fraction);
  fuzz_cmd->add_option("--loops", fuzz.cfg.loop_fraction);

  std::string print_file;
  CLI::App* print_cmd = app.add_subcommand("print", "Parse and pretty-print an IR file");
  print_cmd->add_option("file", print_file, "IR file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*alloc_cmd) return RunAlloc(alloc);
    if (*fuzz_cmd) return RunFuzz(fuzz);
    if (*print_cmd) {
      std::cout << PrintFunction(Parse(print_file));
      return kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kInputError;
  } catch (const RetryLimitExceeded& e) {
    std::cerr << "error: " << e.what() << " after " << e.retries().size() << " retries\n";
    return kRetryLimit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
