// Copyright 2026 The skinaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skinaudit/rules.hpp"

#include <fmt/format.h>

#include <array>
#include <cctype>
#include <cmath>

#include "skinaudit/color.hpp"
#include "text_util.hpp"

namespace skinaudit::detect {

namespace presets {
extern const std::string_view kKolkur;
}  // namespace presets

namespace {

constexpr std::array<std::string_view, 9> kChannelNames = {
    "R", "G", "B", "H", "S", "V", "Y", "Cb", "Cr"};

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  kIdent,
  kNumber,
  kOp,
  kAssign,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kStar,
  kPlus,
  kMinus,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  std::size_t line = 0;
  std::size_t column = 0;
};

std::vector<Token> Lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, column = 1, i = 0;
  const auto push = [&](Tok kind, std::size_t len) {
    out.push_back({kind, std::string(src.substr(i, len)), 0.0, line, column});
    i += len;
    column += len;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line, ++i, column = 1;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i, ++column;
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t n = 1;
      while (i + n < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i + n])) ||
              src[i + n] == '_')) {
        ++n;
      }
      push(Tok::kIdent, n);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t n = 0;
      while (i + n < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[i + n])) ||
              src[i + n] == '.')) {
        ++n;
      }
      // Exponent, only if digits follow.
      if (i + n < src.size() && (src[i + n] == 'e' || src[i + n] == 'E')) {
        std::size_t k = n + 1;
        if (i + k < src.size() && (src[i + k] == '+' || src[i + k] == '-')) ++k;
        if (i + k < src.size() &&
            std::isdigit(static_cast<unsigned char>(src[i + k]))) {
          while (i + k < src.size() &&
                 std::isdigit(static_cast<unsigned char>(src[i + k]))) {
            ++k;
          }
          n = k;
        }
      }
      const auto value = text::ParseDouble(src.substr(i, n));
      if (!value) {
        throw ParseError("malformed number '" + std::string(src.substr(i, n)) +
                             "'",
                         line, column);
      }
      push(Tok::kNumber, n);
      out.back().number = *value;
    } else if (c == '<' || c == '>') {
      push(Tok::kOp, i + 1 < src.size() && src[i + 1] == '=' ? 2 : 1);
    } else if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') {
      push(Tok::kAssign, 2);
    } else {
      Tok kind;
      switch (c) {
        case '(': kind = Tok::kLParen; break;
        case ')': kind = Tok::kRParen; break;
        case '[': kind = Tok::kLBracket; break;
        case ']': kind = Tok::kRBracket; break;
        case ',': kind = Tok::kComma; break;
        case '*': kind = Tok::kStar; break;
        case '+': kind = Tok::kPlus; break;
        case '-': kind = Tok::kMinus; break;
        default:
          throw ParseError(fmt::format("unexpected character '{}'", c), line,
                           column);
      }
      push(kind, 1);
    }
  }
  out.push_back({Tok::kEnd, "end of input", 0.0, line, column});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  RuleSet Parse() {
    const Token& name = Expect(Tok::kIdent, "rule set name");
    Expect(Tok::kAssign, "':='");
    std::vector<Clause> clauses;
    clauses.push_back(ParseClause());
    while (IsKeyword(Peek(), "OR")) {
      Next();
      clauses.push_back(ParseClause());
    }
    if (Peek().kind != Tok::kEnd) Fail(Peek(), "expected AND, OR or end of rule");
    return RuleSet(name.text, std::move(clauses));
  }

 private:
  Clause ParseClause() {
    Clause clause;
    clause.push_back(ParsePredicate());
    while (IsKeyword(Peek(), "AND")) {
      Next();
      clause.push_back(ParsePredicate());
    }
    return clause;
  }

  Predicate ParsePredicate() {
    const Operand lhs = ParseOperand();
    if (IsKeyword(Peek(), "IN")) {
      Next();
      Expect(Tok::kLBracket, "'['");
      const double lo = ParseSignedNumber();
      Expect(Tok::kComma, "','");
      const double hi = ParseSignedNumber();
      Expect(Tok::kRBracket, "']'");
      return Interval{lhs, lo, hi};
    }
    const Token& op_tok = Expect(Tok::kOp, "comparison operator");
    CompareOp op;
    if (op_tok.text == "<") {
      op = CompareOp::kLess;
    } else if (op_tok.text == "<=") {
      op = CompareOp::kLessEqual;
    } else if (op_tok.text == ">") {
      op = CompareOp::kGreater;
    } else {
      op = CompareOp::kGreaterEqual;
    }
    return Comparison{lhs, op, ParseBound()};
  }

  Operand ParseOperand() {
    if (IsKeyword(Peek(), "ABS")) {
      Next();
      Expect(Tok::kLParen, "'('");
      const Channel a = ParseChannelToken();
      Expect(Tok::kMinus, "'-'");
      const Channel b = ParseChannelToken();
      Expect(Tok::kRParen, "')'");
      return Operand{a, b};
    }
    return Operand{ParseChannelToken(), std::nullopt};
  }

  // number | [number '*'] channel [('+'|'-') number]
  std::variant<double, LinearBound> ParseBound() {
    if (Peek().kind == Tok::kIdent) return ParseLinearTail(1.0);
    const double value = ParseSignedNumber();
    if (Peek().kind != Tok::kStar) return value;
    Next();
    return ParseLinearTail(value);
  }

  LinearBound ParseLinearTail(double slope) {
    LinearBound bound;
    bound.slope = slope;
    bound.channel = ParseChannelToken();
    if (Peek().kind == Tok::kPlus || Peek().kind == Tok::kMinus) {
      const bool negative = Next().kind == Tok::kMinus;
      const double v = Expect(Tok::kNumber, "number").number;
      bound.intercept = negative ? -v : v;
    }
    return bound;
  }

  double ParseSignedNumber() {
    bool negative = false;
    if (Peek().kind == Tok::kMinus) {
      Next();
      negative = true;
    }
    const double v = Expect(Tok::kNumber, "number").number;
    return negative ? -v : v;
  }

  Channel ParseChannelToken() {
    const Token& tok = Peek();
    if (tok.kind != Tok::kIdent) Fail(tok, "expected channel");
    const auto channel = ParseChannel(tok.text);
    if (!channel) {
      throw ParseError("unknown channel '" + tok.text + "'", tok.line, tok.column);
    }
    Next();
    return *channel;
  }

  static bool IsKeyword(const Token& tok, std::string_view word) {
    return tok.kind == Tok::kIdent && text::Lower(tok.text) == text::Lower(word);
  }

  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Next() {
    const Token& t = tokens_[pos_];
    if (t.kind != Tok::kEnd) ++pos_;
    return t;
  }
  const Token& Expect(Tok kind, std::string_view what) {
    if (Peek().kind != kind) Fail(Peek(), "expected " + std::string(what));
    return Next();
  }
  [[noreturn]] static void Fail(const Token& tok, const std::string& msg) {
    throw ParseError(msg + ", found '" + tok.text + "'", tok.line, tok.column);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

double OperandValue(const Operand& op, const ChannelValues& v) {
  if (op.minus) return std::fabs(v[op.channel] - v[*op.minus]);
  return v[op.channel];
}

std::string FormatOperand(const Operand& op) {
  if (op.minus) {
    return fmt::format("ABS({} - {})", ChannelName(op.channel),
                       ChannelName(*op.minus));
  }
  return std::string(ChannelName(op.channel));
}

std::string FormatPredicate(const Predicate& pred) {
  if (const auto* in = std::get_if<Interval>(&pred)) {
    return fmt::format("{} IN [{}, {}]", FormatOperand(in->lhs), in->lo, in->hi);
  }
  const auto& cmp = std::get<Comparison>(pred);
  std::string out =
      fmt::format("{} {} ", FormatOperand(cmp.lhs), CompareOpSymbol(cmp.op));
  if (const auto* c = std::get_if<double>(&cmp.rhs)) {
    return out + fmt::format("{}", *c);
  }
  const auto& lin = std::get<LinearBound>(cmp.rhs);
  if (lin.slope != 1.0) out += fmt::format("{}*", lin.slope);
  out += ChannelName(lin.channel);
  if (lin.intercept == 0.0 && !std::signbit(lin.intercept)) return out;
  if (std::signbit(lin.intercept)) {
    out += fmt::format(" - {}", -lin.intercept);
  } else {
    out += fmt::format(" + {}", lin.intercept);
  }
  return out;
}

}  // namespace

std::string_view ChannelName(Channel c) {
  return kChannelNames[static_cast<std::size_t>(c)];
}

std::optional<Channel> ParseChannel(std::string_view name) {
  const std::string lower = text::Lower(name);
  for (std::size_t i = 0; i < kChannelNames.size(); ++i) {
    if (lower == text::Lower(kChannelNames[i])) return static_cast<Channel>(i);
  }
  return std::nullopt;
}

std::string_view CompareOpSymbol(CompareOp op) {
  switch (op) {
    case CompareOp::kLess: return "<";
    case CompareOp::kLessEqual: return "<=";
    case CompareOp::kGreater: return ">";
    case CompareOp::kGreaterEqual: return ">=";
  }
  return "?";
}

ChannelValues::ChannelValues(RgbPixel p) {
  const color::HsvPixel hsv = color::RgbToHsv(p);
  const color::YcbcrPixel ycc = color::RgbToYcbcr(p);
  values[0] = p.r;
  values[1] = p.g;
  values[2] = p.b;
  values[3] = hsv.h;
  values[4] = hsv.s;
  values[5] = hsv.v;
  values[6] = ycc.y;
  values[7] = ycc.cb;
  values[8] = ycc.cr;
}

bool Evaluate(const Predicate& pred, const ChannelValues& values) {
  if (const auto* in = std::get_if<Interval>(&pred)) {
    const double x = OperandValue(in->lhs, values);
    if (in->lo <= in->hi) return x >= in->lo && x <= in->hi;
    return x >= in->lo || x <= in->hi;
  }
  const auto& cmp = std::get<Comparison>(pred);
  const double lhs = OperandValue(cmp.lhs, values);
  double rhs;
  if (const auto* c = std::get_if<double>(&cmp.rhs)) {
    rhs = *c;
  } else {
    const auto& lin = std::get<LinearBound>(cmp.rhs);
    rhs = lin.slope * values[lin.channel] + lin.intercept;
  }
  switch (cmp.op) {
    case CompareOp::kLess: return lhs < rhs;
    case CompareOp::kLessEqual: return lhs <= rhs;
    case CompareOp::kGreater: return lhs > rhs;
    case CompareOp::kGreaterEqual: return lhs >= rhs;
  }
  return false;
}

RuleSet::RuleSet(std::string name, std::vector<Clause> clauses)
    : name_(std::move(name)), clauses_(std::move(clauses)) {
  if (clauses_.empty()) throw InvalidArgument("rule set has no clauses");
  for (const Clause& c : clauses_) {
    if (c.empty()) throw InvalidArgument("rule set has an empty clause");
  }
}

bool RuleSet::Matches(const ChannelValues& values) const {
  for (const Clause& clause : clauses_) {
    bool all = true;
    for (const Predicate& p : clause) {
      if (!Evaluate(p, values)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool RuleSet::Matches(RgbPixel p) const { return Matches(ChannelValues(p)); }

BinaryMask DetectRules(const RgbImage& img, const RuleSet& rules) {
  BinaryMask mask(img.width(), img.height());
  const auto pixels = img.pixels();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    mask.set(i, rules.Matches(pixels[i]));
  }
  return mask;
}

RuleSet ParseRuleSet(std::string_view text) {
  return Parser(Lex(text)).Parse();
}

std::string SerializeRuleSet(const RuleSet& rules) {
  std::string out = rules.name() + " :=";
  bool first_clause = true;
  for (const Clause& clause : rules.clauses()) {
    out += first_clause ? " " : "\n    OR ";
    first_clause = false;
    for (std::size_t i = 0; i < clause.size(); ++i) {
      if (i > 0) out += " AND ";
      out += FormatPredicate(clause[i]);
    }
  }
  out += "\n";
  return out;
}

std::string_view PresetText(std::string_view name) {
  const std::string lower = text::Lower(name);
  if (lower == "kolkur") return presets::kKolkur;
  if (lower == "dahmani") {
    throw InvalidArgument(
        "the dahmani preset is disabled: its thresholds have not been "
        "transcribed; supply a rule file instead");
  }
  throw InvalidArgument("unknown rule preset '" + std::string(name) + "'");
}

RuleSet PresetRuleSet(std::string_view name) {
  return ParseRuleSet(PresetText(name));
}

RuleSet LoadRuleSet(const std::string& path_or_preset) {
  const std::string lower = text::Lower(path_or_preset);
  if (lower == "kolkur" || lower == "dahmani") {
    return PresetRuleSet(path_or_preset);
  }
  const std::string contents = text::ReadFile(path_or_preset);
  try {
    return ParseRuleSet(contents);
  } catch (const ParseError& e) {
    throw e.WithSource(path_or_preset);
  }
}

}  // namespace skinaudit::detect
