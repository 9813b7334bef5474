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

#ifndef MATHLENS_EXPR_HPP_
#define MATHLENS_EXPR_HPP_

#include <map>
#include <memory>
#include <set>
#include <string>

#include "mathlens/rational.hpp"

namespace mathlens {

// Arithmetic expression AST over exact rationals and single-letter variables.
//
// Grammar accepted by parse():
//   expr    := term (('+'|'-') term)*
//   term    := product (('*'|'/') product)*
//   product := unary unary*                  -- juxtaposition ("2x", "x(y+1)")
//   unary   := '-' unary | atom
//   atom    := number | letter | '(' expr ')' | '{' expr '}'
//            | '\frac' '{' expr '}' '{' expr '}'
//
// Unicode aliases: "×" and "·" mean '*', "÷" means '/', "−" means '-'.
// LaTeX aliases: \times, \cdot, \div, \frac; any other macro is a syntax
// error. Decimal literals parse to exact rationals ("0.5" -> 1/2).
// Juxtaposition binds tighter than explicit '*' and '/' ("xz/2" = (x*z)/2).
// A run of more than three consecutive letters is rejected as a word rather
// than read as a product of variables.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { kNumber, kVariable, kNeg, kAdd, kSub, kMul, kDiv };

  Kind kind;
  Rational value;  // kNumber
  char var = 0;    // kVariable
  ExprPtr lhs;     // kNeg uses lhs only
  ExprPtr rhs;

  static ExprPtr number(Rational v);
  static ExprPtr variable(char name);
  static ExprPtr neg(ExprPtr e);
  static ExprPtr binary(Kind op, ExprPtr a, ExprPtr b);
};

// Structural equality (used by round-trip tests).
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Parses `text` or throws Error(kParse) with the byte offset of the problem.
ExprPtr parse_expr(const std::string& text);

// Infix rendering with explicit '*' and minimal parentheses;
// parse_expr(render_expr(e)) is structurally equal to e for integer-valued
// literals (non-integer rationals render as "p/q", which re-parses as a
// division node of the same value).
std::string render_expr(const ExprPtr& e);

using Substitution = std::map<char, Rational>;

// Exact evaluation; throws Error(kEval) on division by zero or an unbound
// variable.
Rational eval_exact(const ExprPtr& e, const Substitution& subst = {});

// Variables appearing in the expression.
std::set<char> expr_variables(const ExprPtr& e);

}  // namespace mathlens

#endif  // MATHLENS_EXPR_HPP_
