// Copyright 2026 The mathlens Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mathlens/expr.hpp"

#include <cctype>
#include <utility>
#include <vector>

namespace mathlens {

ExprPtr Expr::number(Rational v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kNumber;
  e->value = std::move(v);
  return e;
}

ExprPtr Expr::variable(char name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kVariable;
  e->var = name;
  return e;
}

ExprPtr Expr::neg(ExprPtr inner) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kNeg;
  e->lhs = std::move(inner);
  return e;
}

ExprPtr Expr::binary(Kind op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::kNumber:
      return a->value == b->value;
    case Expr::Kind::kVariable:
      return a->var == b->var;
    case Expr::Kind::kNeg:
      return expr_equal(a->lhs, b->lhs);
    default:
      return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
}

namespace {

enum class Tok { kNum, kLetter, kPlus, kMinus, kStar, kSlash, kLParen,
                 kRParen, kLBrace, kRBrace, kFrac, kEnd };

struct Token {
  Tok kind;
  std::string text;  // kNum digits / kLetter single char
  size_t offset;
};

[[noreturn]] void syntax_error(const std::string& what, size_t offset) {
  fail(ErrCode::kParse,
       "syntax error at offset " + std::to_string(offset) + ": " + what);
}

// Maximum run of adjacent letters still read as juxtaposed variables.
// Longer runs are English words, not products like "xyz".
constexpr size_t kMaxVarRun = 3;

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < s_.size()) {
      size_t at = pos_;
      unsigned char c = s_[pos_];
      if (std::isspace(c)) {
        ++pos_;
        continue;
      }
      if (std::isdigit(c)) {
        out.push_back({Tok::kNum, lex_number(), at});
        continue;
      }
      if (std::isalpha(c)) {
        lex_letters(&out);
        continue;
      }
      switch (c) {
        case '+': out.push_back({Tok::kPlus, "+", at}); ++pos_; continue;
        case '-': out.push_back({Tok::kMinus, "-", at}); ++pos_; continue;
        case '*': out.push_back({Tok::kStar, "*", at}); ++pos_; continue;
        case '/': out.push_back({Tok::kSlash, "/", at}); ++pos_; continue;
        case '(': out.push_back({Tok::kLParen, "(", at}); ++pos_; continue;
        case ')': out.push_back({Tok::kRParen, ")", at}); ++pos_; continue;
        case '{': out.push_back({Tok::kLBrace, "{", at}); ++pos_; continue;
        case '}': out.push_back({Tok::kRBrace, "}", at}); ++pos_; continue;
        case '\\': lex_macro(&out); continue;
        default: break;
      }
      if (match_utf8("\xc3\x97")) {  // ×
        out.push_back({Tok::kStar, "*", at});
        continue;
      }
      if (match_utf8("\xc3\xb7")) {  // ÷
        out.push_back({Tok::kSlash, "/", at});
        continue;
      }
      if (match_utf8("\xc2\xb7")) {  // ·
        out.push_back({Tok::kStar, "*", at});
        continue;
      }
      if (match_utf8("\xe2\x88\x92")) {  // − (minus sign)
        out.push_back({Tok::kMinus, "-", at});
        continue;
      }
      syntax_error("unexpected character '" + std::string(1, char(c)) + "'",
                   at);
    }
    out.push_back({Tok::kEnd, "", s_.size()});
    return out;
  }

 private:
  std::string lex_number() {
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
    }
    return s_.substr(start, pos_ - start);
  }

  void lex_letters(std::vector<Token>* out) {
    size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha((unsigned char)s_[pos_])) ++pos_;
    size_t run = pos_ - start;
    if (run > kMaxVarRun)
      syntax_error("'" + s_.substr(start, run) + "' is not an expression",
                   start);
    for (size_t i = 0; i < run; ++i)
      out->push_back({Tok::kLetter, std::string(1, s_[start + i]), start + i});
  }

  void lex_macro(std::vector<Token>* out) {
    size_t at = pos_;
    ++pos_;  // backslash
    size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha((unsigned char)s_[pos_])) ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name == "frac") {
      out->push_back({Tok::kFrac, name, at});
    } else if (name == "times" || name == "cdot") {
      out->push_back({Tok::kStar, "*", at});
    } else if (name == "div") {
      out->push_back({Tok::kSlash, "/", at});
    } else if (name == "left" || name == "right") {
      // grouping decoration, drop
    } else {
      syntax_error("unsupported macro \\" + name, at);
    }
  }

  bool match_utf8(const char* seq) {
    size_t n = std::char_traits<char>::length(seq);
    if (s_.compare(pos_, n, seq) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  const std::string& s_;
  size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ExprPtr run() {
    ExprPtr e = parse_sum();
    if (peek().kind != Tok::kEnd)
      syntax_error("trailing input '" + peek().text + "'", peek().offset);
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  Token take() { return toks_[i_++]; }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      Tok op = take().kind;
      ExprPtr rhs = parse_term();
      lhs = Expr::binary(
          op == Tok::kPlus ? Expr::Kind::kAdd : Expr::Kind::kSub, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_product();
    while (peek().kind == Tok::kStar || peek().kind == Tok::kSlash) {
      Tok op = take().kind;
      ExprPtr rhs = parse_product();
      lhs = Expr::binary(
          op == Tok::kStar ? Expr::Kind::kMul : Expr::Kind::kDiv, lhs, rhs);
    }
    return lhs;
  }

  static bool starts_atom(Tok k) {
    return k == Tok::kNum || k == Tok::kLetter || k == Tok::kLParen ||
           k == Tok::kLBrace || k == Tok::kFrac;
  }

  ExprPtr parse_product() {
    ExprPtr lhs = parse_unary();
    while (starts_atom(peek().kind)) {
      ExprPtr rhs = parse_unary();
      lhs = Expr::binary(Expr::Kind::kMul, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (peek().kind == Tok::kMinus) {
      take();
      ExprPtr inner = parse_unary();
      // Fold "-5" into a negative literal so rendering round-trips.
      if (inner->kind == Expr::Kind::kNumber)
        return Expr::number(-inner->value);
      return Expr::neg(inner);
    }
    if (peek().kind == Tok::kPlus) {  // unary plus, e.g. "+3"
      take();
      return parse_unary();
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kNum: {
        Token tok = take();
        return Expr::number(Rational::parse(tok.text));
      }
      case Tok::kLetter: {
        Token tok = take();
        return Expr::variable(tok.text[0]);
      }
      case Tok::kLParen: {
        take();
        ExprPtr e = parse_sum();
        expect(Tok::kRParen, ")");
        return e;
      }
      case Tok::kLBrace: {
        take();
        ExprPtr e = parse_sum();
        expect(Tok::kRBrace, "}");
        return e;
      }
      case Tok::kFrac: {
        take();
        expect(Tok::kLBrace, "{");
        ExprPtr num = parse_sum();
        expect(Tok::kRBrace, "}");
        expect(Tok::kLBrace, "{");
        ExprPtr den = parse_sum();
        expect(Tok::kRBrace, "}");
        return Expr::binary(Expr::Kind::kDiv, num, den);
      }
      default:
        syntax_error(t.kind == Tok::kEnd
                         ? std::string("unexpected end of input")
                         : "unexpected '" + t.text + "'",
                     t.offset);
    }
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind)
      syntax_error(std::string("expected '") + what + "'", peek().offset);
    take();
  }

  std::vector<Token> toks_;
  size_t i_ = 0;
};

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::kAdd:
    case Expr::Kind::kSub:
      return 1;
    case Expr::Kind::kMul:
    case Expr::Kind::kDiv:
      return 2;
    case Expr::Kind::kNeg:
      return 3;
    default:
      return 4;
  }
}

void render(const ExprPtr& e, int parent_prec, bool rhs_of_noncommutative,
            std::string* out) {
  int prec = precedence(e->kind);
  bool needs_parens =
      prec < parent_prec || (prec == parent_prec && rhs_of_noncommutative);
  if (e->kind == Expr::Kind::kNumber && e->value.is_negative())
    needs_parens = parent_prec > 1;
  if (needs_parens) out->push_back('(');
  switch (e->kind) {
    case Expr::Kind::kNumber:
      *out += e->value.str();
      break;
    case Expr::Kind::kVariable:
      out->push_back(e->var);
      break;
    case Expr::Kind::kNeg:
      out->push_back('-');
      render(e->lhs, precedence(Expr::Kind::kNeg), false, out);
      break;
    case Expr::Kind::kAdd:
    case Expr::Kind::kSub:
    case Expr::Kind::kMul:
    case Expr::Kind::kDiv: {
      const char* op = e->kind == Expr::Kind::kAdd   ? " + "
                       : e->kind == Expr::Kind::kSub ? " - "
                       : e->kind == Expr::Kind::kMul ? "*"
                                                     : "/";
      bool right_sensitive =
          e->kind == Expr::Kind::kSub || e->kind == Expr::Kind::kDiv;
      render(e->lhs, prec, false, out);
      *out += op;
      render(e->rhs, prec, right_sensitive, out);
      break;
    }
  }
  if (needs_parens) out->push_back(')');
}

}  // namespace

ExprPtr parse_expr(const std::string& text) {
  if (text.empty()) fail(ErrCode::kParse, "empty expression");
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.run();
}

std::string render_expr(const ExprPtr& e) {
  std::string out;
  render(e, 0, false, &out);
  return out;
}

Rational eval_exact(const ExprPtr& e, const Substitution& subst) {
  switch (e->kind) {
    case Expr::Kind::kNumber:
      return e->value;
    case Expr::Kind::kVariable: {
      auto it = subst.find(e->var);
      if (it == subst.end())
        fail(ErrCode::kEval, std::string("unbound variable '") + e->var + "'");
      return it->second;
    }
    case Expr::Kind::kNeg:
      return -eval_exact(e->lhs, subst);
    case Expr::Kind::kAdd:
      return eval_exact(e->lhs, subst) + eval_exact(e->rhs, subst);
    case Expr::Kind::kSub:
      return eval_exact(e->lhs, subst) - eval_exact(e->rhs, subst);
    case Expr::Kind::kMul:
      return eval_exact(e->lhs, subst) * eval_exact(e->rhs, subst);
    case Expr::Kind::kDiv: {
      Rational den = eval_exact(e->rhs, subst);
      if (den.is_zero()) fail(ErrCode::kEval, "division by zero");
      return eval_exact(e->lhs, subst) / den;
    }
  }
  fail(ErrCode::kInternal, "corrupt expression node");
}

std::set<char> expr_variables(const ExprPtr& e) {
  std::set<char> vars;
  if (!e) return vars;
  if (e->kind == Expr::Kind::kVariable) {
    vars.insert(e->var);
    return vars;
  }
  if (e->lhs) vars.merge(expr_variables(e->lhs));
  if (e->rhs) vars.merge(expr_variables(e->rhs));
  return vars;
}

}  // namespace mathlens
