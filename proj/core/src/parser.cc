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

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ifscan/ir.h"

namespace ifscan {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { kIdent, kNumber, kPunct, kEnd, kEos };

struct Token {
  Tok type = Tok::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '-';
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto push = [&](Tok type, std::string s, int l, int c) {
    out.push_back(Token{type, std::move(s), l, c});
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '\n' || c == ';') {
      push(Tok::kEos, std::string(1, c), line, col);
      ++i;
      if (c == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    int start_col = col;
    if (IsIdentStart(c)) {
      std::size_t j = i;
      while (j < text.size() && IsIdentChar(text[j])) ++j;
      push(Tok::kIdent, std::string(text.substr(i, j - i)), line, start_col);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(Tok::kNumber, std::string(text.substr(i, j - i)), line, start_col);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    static constexpr std::string_view kPunct = "@(){}:,[]!=";
    if (kPunct.find(c) != std::string_view::npos) {
      push(Tok::kPunct, std::string(1, c), line, col);
      ++i;
      ++col;
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }
  out.push_back(Token{Tok::kEnd, "", line, col});
  return out;
}

struct OpInfo {
  Kind kind;
  int operands;  // -1: variadic
};

std::optional<OpInfo> LookupOp(std::string_view base) {
  static const std::map<std::string, OpInfo, std::less<>> kOps = {
      {"const", {Kind::kConst, 1}},
      {"neg", {Kind::kUnaryOp, 1}},
      {"not", {Kind::kUnaryOp, 1}},
      {"add", {Kind::kBinaryOp, 2}},
      {"sub", {Kind::kBinaryOp, 2}},
      {"mul", {Kind::kBinaryOp, 2}},
      {"and", {Kind::kBinaryOp, 2}},
      {"or", {Kind::kBinaryOp, 2}},
      {"xor", {Kind::kBinaryOp, 2}},
      {"lt", {Kind::kBinaryOp, 2}},
      {"eq", {Kind::kBinaryOp, 2}},
      {"move", {Kind::kMove, 1}},
      {"phi-move", {Kind::kPhiMove, 1}},
      {"swap-move", {Kind::kSwapMove, 1}},
      {"spill-move", {Kind::kSpillMove, 1}},
      {"fill-move", {Kind::kFillMove, 1}},
      {"get-param-move", {Kind::kGetParamMove, 1}},
      {"phi", {Kind::kPhi, -1}},
      {"invoke", {Kind::kInvoke, -1}},
      {"br", {Kind::kBranch, 1}},
      {"condbr", {Kind::kCondBranch, 3}},
      {"ret", {Kind::kReturn, -1}},
  };
  auto it = kOps.find(base);
  if (it == kOps.end()) return std::nullopt;
  return it->second;
}

struct Ref {
  std::string name;
  int line;
  int column;
};

struct PendingInstr {
  InstrId id;
  std::vector<Ref> values;
  std::vector<Ref> labels;  // branch targets or phi incoming labels
  bool explicit_width = false;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Tokenize(text)) {}

  Function Run() {
    SkipEos();
    ExpectIdent("func");
    ExpectPunct("@");
    f_.name = ExpectAnyIdent().text;
    ExpectPunct("(");
    std::vector<std::pair<Token, Token>> params;
    if (!PeekPunct(")")) {
      for (;;) {
        Token name = ExpectAnyIdent();
        ExpectPunct(":");
        Token type = ExpectAnyIdent();
        params.emplace_back(name, type);
        if (PeekPunct(",")) {
          Next();
          continue;
        }
        break;
      }
    }
    ExpectPunct(")");
    SkipEos();
    ExpectPunct("{");
    SkipEos();

    BlockId current = kNoBlock;
    while (!PeekPunct("}")) {
      if (Peek().type == Tok::kEnd) Fail(Peek(), "unexpected end of input");
      if (Peek().type == Tok::kIdent && PeekAt(1).type == Tok::kPunct &&
          PeekAt(1).text == ":") {
        Token label = Next();
        Next();
        if (labels_.contains(label.text)) Fail(label, "duplicate label '" + label.text + "'");
        current = f_.AddBlock(label.text);
        labels_[label.text] = current;
        if (f_.entry == kNoBlock) {
          f_.entry = current;
          AddParams(params);
        }
        SkipEos();
        continue;
      }
      if (current == kNoBlock) Fail(Peek(), "instruction outside of a block");
      ParseInstruction(current);
      if (Peek().type == Tok::kEos) {
        SkipEos();
      } else if (!PeekPunct("}")) {
        Fail(Peek(), "expected end of instruction");
      }
    }
    ExpectPunct("}");
    SkipEos();
    if (Peek().type != Tok::kEnd) Fail(Peek(), "trailing input after function");
    if (f_.entry == kNoBlock) Fail(Peek(), "function has no blocks");
    Resolve();
    return std::move(f_);
  }

 private:
  [[noreturn]] void Fail(const Token& at, const std::string& message) {
    throw ParseError(at.line, at.column, message);
  }
  [[noreturn]] void Fail(const Ref& at, const std::string& message) {
    throw ParseError(at.line, at.column, message);
  }

  const Token& Peek() const { return tokens_[pos_]; }
  const Token& PeekAt(std::size_t k) const {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }
  Token Next() {
    Token t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool PeekPunct(std::string_view p) const {
    return Peek().type == Tok::kPunct && Peek().text == p;
  }
  void SkipEos() {
    while (Peek().type == Tok::kEos) Next();
  }
  void ExpectPunct(std::string_view p) {
    if (!PeekPunct(p)) Fail(Peek(), "expected '" + std::string(p) + "'");
    Next();
  }
  void ExpectIdent(std::string_view word) {
    if (Peek().type != Tok::kIdent || Peek().text != word) {
      Fail(Peek(), "expected '" + std::string(word) + "'");
    }
    Next();
  }
  Token ExpectAnyIdent() {
    if (Peek().type != Tok::kIdent) Fail(Peek(), "expected identifier");
    return Next();
  }
  Ref ToRef(const Token& t) { return Ref{t.text, t.line, t.column}; }

  void DefineName(const Token& at, const std::string& name, InstrId id) {
    if (values_.contains(name)) Fail(at, "duplicate value name '" + name + "'");
    values_[name] = id;
  }

  void AddParams(const std::vector<std::pair<Token, Token>>& params) {
    for (const auto& [name, type] : params) {
      Instruction in;
      in.kind = Kind::kParam;
      in.name = name.text;
      in.op = type.text;
      if (type.text == "long" || type.text == "double") {
        in.width = 2;
      } else if (type.text == "int" || type.text == "ref") {
        in.width = 1;
      } else {
        Fail(type, "unknown parameter type '" + type.text + "'");
      }
      InstrId id = f_.Insert(std::move(in), f_.entry, 1 << 30);
      DefineName(name, name.text, id);
      f_.params.push_back(id);
    }
  }

  void ParseInstruction(BlockId block) {
    std::optional<Token> def;
    if (Peek().type == Tok::kIdent && PeekAt(1).type == Tok::kPunct &&
        PeekAt(1).text == "=") {
      def = Next();
      Next();
    }
    Token op_tok = ExpectAnyIdent();
    std::string base = op_tok.text;
    bool wide = false;
    if (base.size() > 5 && base.ends_with(".wide")) {
      wide = true;
      base.resize(base.size() - 5);
    }
    auto info = LookupOp(base);
    if (!info) Fail(op_tok, "unknown operation '" + op_tok.text + "'");

    Instruction in;
    in.kind = info->kind;
    if (in.kind == Kind::kUnaryOp || in.kind == Kind::kBinaryOp) in.op = base;
    PendingInstr pending;
    pending.explicit_width = wide;

    bool void_kind = in.kind == Kind::kBranch || in.kind == Kind::kCondBranch ||
                     in.kind == Kind::kReturn;
    if (void_kind && def) Fail(op_tok, "'" + base + "' does not produce a value");
    if (!void_kind && in.kind != Kind::kInvoke && !def) {
      Fail(op_tok, "'" + base + "' requires a result name");
    }
    in.width = def ? (wide ? 2 : 1) : 0;

    // Operands.
    std::vector<Token> operands;
    if (in.kind == Kind::kPhi) {
      while (PeekPunct("[")) {
        Next();
        Token value = ExpectAnyIdent();
        ExpectPunct(",");
        Token label = ExpectAnyIdent();
        ExpectPunct("]");
        pending.values.push_back(ToRef(value));
        pending.labels.push_back(ToRef(label));
        if (PeekPunct(",")) Next();
      }
    } else {
      if (Peek().type == Tok::kIdent || Peek().type == Tok::kNumber) {
        for (;;) {
          if (Peek().type != Tok::kIdent && Peek().type != Tok::kNumber) {
            Fail(Peek(), "expected operand");
          }
          operands.push_back(Next());
          if (!PeekPunct(",")) break;
          Next();
        }
      }
      if (info->operands >= 0 && static_cast<int>(operands.size()) != info->operands &&
          in.kind != Kind::kReturn) {
        Fail(op_tok, "'" + base + "' expects " + std::to_string(info->operands) +
                         " operand(s)");
      }
      if (in.kind == Kind::kReturn && operands.size() > 1) {
        Fail(op_tok, "'ret' takes at most one operand");
      }
      if (in.kind == Kind::kConst) {
        if (operands[0].type != Tok::kNumber) Fail(operands[0], "expected literal");
        const std::string& s = operands[0].text;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), in.literal);
        if (ec != std::errc()) Fail(operands[0], "literal out of range");
      } else {
        for (std::size_t k = 0; k < operands.size(); ++k) {
          const Token& t = operands[k];
          if (t.type != Tok::kIdent) Fail(t, "expected value name");
          bool is_label = (in.kind == Kind::kBranch) ||
                          (in.kind == Kind::kCondBranch && k > 0);
          (is_label ? pending.labels : pending.values).push_back(ToRef(t));
        }
      }
    }

    if (PeekPunct("!")) {
      Next();
      for (;;) {
        Token flag = ExpectAnyIdent();
        if (flag.text == "foldable") {
          in.foldable = true;
        } else if (flag.text == "clobber_hint") {
          in.clobber_hint = true;
        } else if (flag.text == "range") {
          in.range_invoke = true;
        } else if (flag.text == "two_addr") {
          in.two_address_capable = true;
        } else {
          Fail(flag, "unknown attribute '" + flag.text + "'");
        }
        if (!PeekPunct(",")) break;
        Next();
      }
    }

    if (def) in.name = def->text;
    InstrId id = f_.Insert(std::move(in), block, 1 << 30);
    if (def) DefineName(*def, def->text, id);
    pending.id = id;
    pending_.push_back(std::move(pending));
  }

  void Resolve() {
    for (const PendingInstr& p : pending_) {
      Instruction& in = f_.instr(p.id);
      for (const Ref& r : p.values) {
        auto it = values_.find(r.name);
        if (it == values_.end()) Fail(r, "undefined value '" + r.name + "'");
        in.inputs.push_back(it->second);
      }
      if (in.kind != Kind::kPhi) {
        for (const Ref& r : p.labels) {
          auto it = labels_.find(r.name);
          if (it == labels_.end()) Fail(r, "undefined label '" + r.name + "'");
          in.targets.push_back(it->second);
        }
      }
    }
    f_.RebuildSuccessors();
    f_.RebuildPredecessors();

    // Bind phi inputs to predecessor order.
    for (const PendingInstr& p : pending_) {
      Instruction& in = f_.instr(p.id);
      if (in.kind != Kind::kPhi) continue;
      const auto& preds = f_.block(in.block).predecessors;
      Ref at{in.name, 0, 0};
      if (!p.labels.empty()) at = p.labels.front();
      if (p.labels.size() != preds.size()) {
        Fail(at, "phi '" + in.name + "' has " + std::to_string(p.labels.size()) +
                     " inputs but block has " + std::to_string(preds.size()) +
                     " predecessors");
      }
      std::vector<InstrId> ordered(preds.size(), kNoInstr);
      for (std::size_t k = 0; k < p.labels.size(); ++k) {
        auto it = labels_.find(p.labels[k].name);
        if (it == labels_.end()) Fail(p.labels[k], "undefined label '" + p.labels[k].name + "'");
        bool placed = false;
        for (std::size_t j = 0; j < preds.size(); ++j) {
          if (preds[j] == it->second && ordered[j] == kNoInstr) {
            ordered[j] = in.inputs[k];
            placed = true;
            break;
          }
        }
        if (!placed) {
          Fail(p.labels[k], "phi '" + in.name + "' names '" + p.labels[k].name +
                                "' which is not a predecessor");
        }
      }
      in.inputs = std::move(ordered);
      in.phi_blocks = preds;
    }

    // Moves and phis inherit width from their inputs unless given explicitly.
    for (bool changed = true; changed;) {
      changed = false;
      for (const PendingInstr& p : pending_) {
        Instruction& in = f_.instr(p.id);
        if (p.explicit_width || in.inputs.empty()) continue;
        if (!IsMoveKind(in.kind) && in.kind != Kind::kPhi) continue;
        int w = 1;
        for (InstrId src : in.inputs) w = std::max(w, f_.instr(src).width);
        if (w != in.width) {
          in.width = w;
          changed = true;
        }
      }
    }
    MarkLoopHeaders(f_);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Function f_;
  std::unordered_map<std::string, InstrId> values_;
  std::unordered_map<std::string, BlockId> labels_;
  std::vector<PendingInstr> pending_;
};

}  // namespace

Function ParseFunction(std::string_view text) { return Parser(text).Run(); }

}  // namespace ifscan
