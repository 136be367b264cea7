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

#include "ifscan/fuzz.h"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ifscan {

void FuzzConfig::Validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
    }
  };
  fraction(wide_fraction, "wide_fraction");
  fraction(invoke_fraction, "invoke_fraction");
  fraction(loop_fraction, "loop_fraction");
  fraction(range_fraction, "range_fraction");
  fraction(foldable_fraction, "foldable_fraction");
  fraction(two_address_fraction, "two_address_fraction");
  fraction(clobber_fraction, "clobber_fraction");
  if (max_blocks < 1) throw std::invalid_argument("max_blocks must be at least 1");
  if (max_instrs_per_block < 1) {
    throw std::invalid_argument("max_instrs_per_block must be at least 1");
  }
  if (min_params < 0 || max_params < min_params) {
    throw std::invalid_argument("param count range is empty");
  }
  if (max_invoke_args < 0) throw std::invalid_argument("max_invoke_args must be >= 0");
}

namespace {

class Generator {
 public:
  explicit Generator(const FuzzConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  std::string Run() {
    std::ostringstream head;
    head << "func @fuzz" << cfg_.seed << "(";
    int params = Uniform(cfg_.min_params, cfg_.max_params);
    for (int k = 0; k < params; ++k) {
      bool wide = Chance(cfg_.wide_fraction);
      std::string name = "p" + std::to_string(k);
      head << (k ? ", " : "") << name << ": " << (wide ? "long" : "int");
      pool_.push_back({name, wide ? 2 : 1});
    }
    head << ") {\n";

    cur_ = NewBlock();
    budget_ = cfg_.max_blocks - 1;
    Region(0);
    Finish();

    std::ostringstream out;
    out << head.str();
    for (const Block& b : blocks_) {
      out << b.label << ":\n";
      for (const std::string& line : b.lines) out << "  " << line << "\n";
    }
    out << "}\n";
    return out.str();
  }

 private:
  struct Value {
    std::string name;
    int width;
  };
  struct Block {
    std::string label;
    std::vector<std::string> lines;
  };

  int Uniform(int lo, int hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool Chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }

  std::size_t NewBlock() {
    blocks_.push_back({"b" + std::to_string(blocks_.size()), {}});
    return blocks_.size() - 1;
  }
  const std::string& Label(std::size_t b) const { return blocks_[b].label; }
  void Emit(std::string line) { blocks_[cur_].lines.push_back(std::move(line)); }
  std::string Fresh() { return "v" + std::to_string(next_value_++); }
  std::string Suffix(int width) const { return width == 2 ? ".wide" : ""; }
  int PickWidth() { return Chance(cfg_.wide_fraction) ? 2 : 1; }

  const Value& Pick() {
    if (pool_.empty()) Constant();
    const int size = static_cast<int>(pool_.size());
    // Mostly recent values, like real code.
    int lo = Chance(0.8) ? std::max(0, size - 8) : 0;
    return pool_[static_cast<std::size_t>(Uniform(lo, size - 1))];
  }

  std::string Constant(bool foldable, std::int64_t literal, int width = 1) {
    std::string name = Fresh();
    Emit(name + " = const" + Suffix(width) + " " + std::to_string(literal) +
         (foldable ? " !foldable" : ""));
    return name;
  }
  void Constant() {
    int width = PickWidth();
    std::string name = Constant(Chance(cfg_.foldable_fraction), Uniform(-8, 40), width);
    pool_.push_back({name, width});
  }

  void Instruction() {
    int roll = Uniform(0, 99);
    if (Chance(cfg_.invoke_fraction)) {
      Invoke();
    } else if (roll < 15 || pool_.empty()) {
      Constant();
    } else if (roll < 25) {
      static const char* kUnary[] = {"neg", "not"};
      int width = PickWidth();
      std::string name = Fresh();
      Emit(name + " = " + kUnary[Uniform(0, 1)] + Suffix(width) + " " + Pick().name);
      pool_.push_back({name, width});
    } else if (roll < 32) {
      int width = PickWidth();
      std::string name = Fresh();
      Emit(name + " = move" + Suffix(width) + " " + Pick().name + Flags(false));
      pool_.push_back({name, width});
    } else {
      static const char* kBinary[] = {"add", "sub", "mul", "and", "or", "xor", "lt", "eq"};
      const char* op = kBinary[Uniform(0, 7)];
      bool compare = op[0] == 'l' || op[0] == 'e';
      int width = compare ? 1 : PickWidth();
      std::string name = Fresh();
      std::string a = Pick().name;
      std::string b = Pick().name;
      Emit(name + " = " + op + Suffix(width) + " " + a + ", " + b +
           Flags(!compare && Chance(cfg_.two_address_fraction)));
      pool_.push_back({name, width});
    }
  }

  std::string Flags(bool two_address) {
    std::vector<std::string> flags;
    if (two_address) flags.push_back("two_addr");
    if (Chance(cfg_.clobber_fraction)) flags.push_back("clobber_hint");
    if (flags.empty()) return "";
    std::string out = " !";
    for (std::size_t k = 0; k < flags.size(); ++k) out += (k ? "," : "") + flags[k];
    return out;
  }

  void Invoke() {
    int args = Uniform(0, cfg_.max_invoke_args);
    std::string line;
    bool result = Chance(0.7);
    int width = result ? PickWidth() : 0;
    std::string name;
    if (result) {
      name = Fresh();
      line = name + " = ";
    }
    line += "invoke" + Suffix(width);
    for (int k = 0; k < args; ++k) line += (k ? ", " : " ") + Pick().name;
    if (Chance(cfg_.range_fraction)) line += " !range";
    Emit(line);
    if (result) pool_.push_back({name, width});
  }

  void Straight() {
    int n = Uniform(1, std::max(1, cfg_.max_instrs_per_block - 6));
    for (int k = 0; k < n; ++k) Instruction();
  }

  std::string Condition() {
    std::string name = Fresh();
    Emit(name + " = " + (Chance(0.5) ? "lt " : "eq ") + Pick().name + ", " + Pick().name);
    return name;
  }

  void Region(int depth) {
    Straight();
    while (budget_ >= 3 && depth < 3 && Chance(0.6)) {
      budget_ -= 3;
      if (Chance(cfg_.loop_fraction)) {
        Loop(depth);
      } else {
        Diamond(depth);
      }
      Straight();
    }
  }

  void Diamond(int depth) {
    std::string cond = Condition();
    std::size_t then_b = NewBlock(), else_b = NewBlock(), join = NewBlock();
    Emit("condbr " + cond + ", " + Label(then_b) + ", " + Label(else_b));
    const int phis = Uniform(0, 3);
    std::vector<int> widths;
    for (int k = 0; k < phis; ++k) widths.push_back(PickWidth());
    const std::size_t mark = pool_.size();

    auto arm = [&](std::size_t start, std::vector<std::string>& picks) {
      cur_ = start;
      Region(depth + 1);
      for (int k = 0; k < phis; ++k) picks.push_back(Pick().name);
      Emit("br " + Label(join));
      std::size_t end = cur_;
      pool_.resize(mark);
      return end;
    };
    std::vector<std::string> from_then, from_else;
    std::size_t then_end = arm(then_b, from_then);
    std::size_t else_end = arm(else_b, from_else);

    cur_ = join;
    for (int k = 0; k < phis; ++k) {
      std::string name = Fresh();
      Emit(name + " = phi" + Suffix(widths[k]) + " [" + from_then[k] + ", " + Label(then_end) +
           "], [" + from_else[k] + ", " + Label(else_end) + "]");
      pool_.push_back({name, widths[k]});
    }
  }

  void Loop(int depth) {
    std::string zero = Constant(Chance(cfg_.foldable_fraction), 0);
    std::string trips = Constant(Chance(cfg_.foldable_fraction), Uniform(1, 3));
    std::string one = Constant(Chance(cfg_.foldable_fraction), 1);
    const int carried = Uniform(0, 2);
    std::vector<std::string> init;
    for (int k = 0; k < carried; ++k) init.push_back(Pick().name);

    std::size_t pre = cur_;
    std::size_t header = NewBlock(), body = NewBlock(), exit = NewBlock();
    Emit("br " + Label(header));

    std::string counter = Fresh(), next = Fresh();
    std::vector<std::string> phi_names, updates;
    std::vector<int> widths;
    for (int k = 0; k < carried; ++k) {
      phi_names.push_back(Fresh());
      updates.push_back(Fresh());
      widths.push_back(PickWidth());
    }
    std::string cond = Fresh();
    pool_.push_back({counter, 1});
    for (int k = 0; k < carried; ++k) pool_.push_back({phi_names[k], widths[k]});
    const std::size_t mark = pool_.size();

    cur_ = body;
    Region(depth + 1);
    Emit(next + " = add " + counter + ", " + one);
    static const char* kUpdate[] = {"add", "xor", "sub"};
    for (int k = 0; k < carried; ++k) {
      Emit(updates[k] + " = " + kUpdate[Uniform(0, 2)] + Suffix(widths[k]) + " " + phi_names[k] +
           ", " + Pick().name);
    }
    Emit("br " + Label(header));
    std::size_t latch = cur_;
    pool_.resize(mark);

    cur_ = header;
    Emit(counter + " = phi [" + zero + ", " + Label(pre) + "], [" + next + ", " + Label(latch) +
         "]");
    for (int k = 0; k < carried; ++k) {
      Emit(phi_names[k] + " = phi" + Suffix(widths[k]) + " [" + init[k] + ", " + Label(pre) +
           "], [" + updates[k] + ", " + Label(latch) + "]");
    }
    Emit(cond + " = lt " + counter + ", " + trips);
    Emit("condbr " + cond + ", " + Label(body) + ", " + Label(exit));
    cur_ = exit;
  }

  void Finish() {
    std::string acc = Pick().name;
    int terms = Uniform(0, 3);
    for (int k = 0; k < terms; ++k) {
      std::string name = Fresh();
      Emit(name + " = xor " + acc + ", " + Pick().name);
      acc = name;
    }
    Emit("ret " + acc);
  }

  const FuzzConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<Block> blocks_;
  std::vector<Value> pool_;
  std::size_t cur_ = 0;
  int budget_ = 0;
  int next_value_ = 0;
};

}  // namespace

std::string FuzzFunctionText(const FuzzConfig& cfg) {
  cfg.Validate();
  return Generator(cfg).Run();
}

Function FuzzFunction(const FuzzConfig& cfg) { return ParseFunction(FuzzFunctionText(cfg)); }

std::vector<std::int64_t> FuzzInputs(const Function& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> values;
  for (std::size_t k = 0; k < f.params.size(); ++k) {
    values.push_back(static_cast<std::int64_t>(rng() % 201) - 100);
  }
  return values;
}

Function ConstraintStressFunction(int live_values, std::uint64_t seed) {
  if (live_values < 1) throw std::invalid_argument("live_values must be positive");
  std::mt19937_64 rng(seed);
  std::ostringstream out;
  out << "func @stress" << live_values << "(p: int) {\nentry:\n";
  std::string prev = "p";
  for (int k = 0; k < live_values; ++k) {
    out << "  v" << k << " = add " << prev << ", p\n";
    prev = "v" + std::to_string(k);
  }
  std::vector<int> order(static_cast<std::size_t>(live_values));
  for (int k = 0; k < live_values; ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng);
  std::string acc = "p";
  for (int k : order) {
    out << "  c" << k << " = lt v" << k << ", p\n";
    out << "  s" << k << " = add " << acc << ", c" << k << "\n";
    acc = "s" + std::to_string(k);
  }
  out << "  ret " << acc << "\n}\n";
  return ParseFunction(out.str());
}

}  // namespace ifscan
