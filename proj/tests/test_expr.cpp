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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mathlens/answers.hpp"
#include "mathlens/equivalence.hpp"
#include "mathlens/expr.hpp"
#include "support/gen_expr.hpp"

using namespace mathlens;

namespace {

bool equiv(const char* a, const char* b) {
  return equivalent(parse_expr(a), parse_expr(b));
}

Rational eval_str(const char* text, const Substitution& subst = {}) {
  return eval_exact(parse_expr(text), subst);
}

}  // namespace

TEST_CASE("rational basics") {
  CHECK(Rational::parse("0.5") == Rational(1, 2));
  CHECK(Rational::parse("2.") == Rational(2));
  CHECK(Rational::parse("-3/9") == Rational(-1, 3));
  CHECK(Rational(6, -4).str() == "-3/2");
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), Error);
  CHECK_THROWS_AS(Rational::parse("1a"), Error);
}

TEST_CASE("parse shapes") {
  ExprPtr e = parse_expr("12 * (50/60)");
  REQUIRE(e->kind == Expr::Kind::kMul);
  CHECK(e->lhs->kind == Expr::Kind::kNumber);
  CHECK(e->lhs->value == Rational(12));
  REQUIRE(e->rhs->kind == Expr::Kind::kDiv);
  CHECK(e->rhs->lhs->value == Rational(50));
  CHECK(e->rhs->rhs->value == Rational(60));

  ExprPtr g = parse_expr("2(y + x)");
  REQUIRE(g->kind == Expr::Kind::kMul);
  CHECK(g->lhs->value == Rational(2));
  CHECK(g->rhs->kind == Expr::Kind::kAdd);

  // Juxtaposition binds tighter than '/': xz/2 reads as (x*z)/2.
  ExprPtr h = parse_expr("xz/2");
  REQUIRE(h->kind == Expr::Kind::kDiv);
  CHECK(h->lhs->kind == Expr::Kind::kMul);

  // ... and "1/2x" therefore reads as 1/(2x).
  CHECK(eval_str("1/2x", {{'x', Rational(4)}}) == Rational(1, 8));
  CHECK(eval_str("1/2*x", {{'x', Rational(4)}}) == Rational(2));

  // Unary minus binds tighter than multiplication; numeric negation folds
  // into the literal.
  ExprPtr m = parse_expr("-2x");
  REQUIRE(m->kind == Expr::Kind::kMul);
  CHECK(m->lhs->kind == Expr::Kind::kNumber);
  CHECK(m->lhs->value == Rational(-2));
  CHECK(parse_expr("-x")->kind == Expr::Kind::kNeg);
}

TEST_CASE("parse aliases and latex subset") {
  CHECK(eval_str("12 \xc3\x97 (50 \xc3\xb7 60)") == Rational(10));  // × ÷
  CHECK(eval_str("2 \xc2\xb7 3") == Rational(6));                   // ·
  CHECK(eval_str("5 \xe2\x88\x92 3") == Rational(2));               // −
  CHECK(eval_str("\\frac{50}{60} \\times 12") == Rational(10));
  CHECK(eval_str("2 \\cdot 3") == Rational(6));
  CHECK(eval_str("6 \\div 3") == Rational(2));
  CHECK_THROWS_AS(parse_expr("\\sqrt{4}"), Error);
  CHECK_THROWS_AS(parse_expr(""), Error);
}

TEST_CASE("syntax error carries offset") {
  try {
    parse_expr("5 + * 3");
    FAIL("expected syntax error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::kParse);
    CHECK(std::string(e.what()).find("offset 4") != std::string::npos);
  }
}

TEST_CASE("exact evaluation") {
  CHECK(eval_str("12 * (50/60)") == Rational(10));
  // (z - u*y)/(x + y) at x=3, y=5, z=42, u=2: numerator 42-10=32,
  // denominator 8, so 4. Frozen from hand arithmetic.
  Substitution subst{{'x', Rational(3)},
                     {'y', Rational(5)},
                     {'z', Rational(42)},
                     {'u', Rational(2)}};
  CHECK(eval_str("(z - u \xc2\xb7 y)/(x+y)", subst) == Rational(4));
  CHECK_THROWS_AS(eval_str("x / y", {{'x', Rational(1)}, {'y', Rational(0)}}),
                  Error);
  CHECK_THROWS_AS(eval_str("x + 1"), Error);  // unbound
}

TEST_CASE("equivalence fixtures") {
  CHECK(equiv("z - (y - x)", "z - y + x"));
  CHECK(equiv("u*(x+y+z)", "xu + yu + zu"));
  CHECK(equiv("x + x*(1/y)", "x + (x/y)"));
  CHECK_FALSE(equiv("0.5(x+yz)", "z * (y + 1) * x / 2"));
  CHECK_FALSE(equiv("xz*((1-y)/100)", "(x * (1 - y/100) * z)"));
  CHECK_FALSE(equiv("xz*((1-y)/100)",
                    "x \xc3\x97 z - (y/100) \xc3\x97 (x \xc3\x97 z)"));
  CHECK_FALSE(equiv("(12/x)*y", "y * 12"));
  // Pointwise-undefined spots do not matter for rational-function identity.
  CHECK(equiv("x/x", "1"));
  CHECK(equiv("x*(y/y)", "x"));
  // Expressions with an identically-zero denominator are no rational
  // function; they compare unequal to everything.
  CHECK_FALSE(equiv("x/(y-y)", "x"));
  CHECK_FALSE(equiv("x/(y-y)", "x/(y-y)"));
}

TEST_CASE("oracle versus canonical form") {
  CHECK(random_eval_oracle(parse_expr("x+y"), parse_expr("x+y"), 5, 7));
  // Distinct variables: each point draws x and y independently from ~2^17
  // values, so 20 points miss the difference with probability well under
  // 2^-40 (a miss needs px == py at every point, each ~2^-17).
  CHECK_FALSE(random_eval_oracle(parse_expr("x"), parse_expr("y"), 20, 1));

  const char* table[][2] = {
      {"u*(x+y+z)", "xu + yu + zu"},
      {"x + x*(1/y)", "x + (x/y)"},
      {"0.5(x+yz)", "z * (y + 1) * x / 2"},
      {"xz*((1-y)/100)", "(x * (1 - y/100) * z)"},
      {"(12/x)*y", "y * 12"},
  };
  for (auto& [a, b] : table) {
    ExprPtr ea = parse_expr(a), eb = parse_expr(b);
    CHECK(equivalent(ea, eb) == random_eval_oracle(ea, eb, 20, 99));
  }
}

TEST_CASE("equivalence is an equivalence relation on generated corpus") {
  std::mt19937_64 rng(2024);
  std::vector<char> vars{'x', 'y', 'z', 'u'};
  for (int i = 0; i < 60; ++i) {
    ExprPtr a = mathlens::testing::random_expr(rng, 3, vars);
    ExprPtr b = mathlens::testing::equivalent_rewrite(rng, a);
    ExprPtr c = mathlens::testing::equivalent_rewrite(rng, b);
    CHECK(equivalent(a, a));
    CHECK(equivalent(a, b));
    CHECK(equivalent(b, a));
    CHECK(equivalent(b, c));
    CHECK(equivalent(a, c));  // transitivity along the chain
  }
  // Symmetric also on (mostly) inequivalent pairs.
  for (int i = 0; i < 40; ++i) {
    ExprPtr a = mathlens::testing::random_expr(rng, 3, vars);
    ExprPtr b = mathlens::testing::random_expr(rng, 3, vars);
    CHECK(equivalent(a, b) == equivalent(b, a));
  }
}

TEST_CASE("exact and double evaluation agree where finite") {
  std::mt19937_64 rng(11);
  std::vector<char> vars{'x', 'y'};
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    ExprPtr e = mathlens::testing::random_expr(rng, 3, vars);
    Substitution subst{{'x', Rational(static_cast<long>(rng() % 13) + 1, 2)},
                       {'y', Rational(static_cast<long>(rng() % 7) + 1)}};
    std::map<char, double> dsubst;
    for (auto& [v, r] : subst) dsubst[v] = r.to_double();
    double approx = mathlens::testing::eval_double(e, dsubst);
    if (!std::isfinite(approx)) continue;
    Rational exact;
    try {
      exact = eval_exact(e, subst);
    } catch (const Error&) {
      continue;  // exact pole; double side got lucky with rounding
    }
    double ex = exact.to_double();
    CHECK(std::abs(ex - approx) <=
          1e-9 * std::max({1.0, std::abs(ex), std::abs(approx)}));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("render round trip") {
  // parse(render(e)) preserves the rational function; on the parser's own
  // image it is the structural identity (grouping is not represented, and a
  // literal "-5" normalizes to a negative number node on the first pass).
  std::mt19937_64 rng(5);
  std::vector<char> vars{'x', 'y', 'z'};
  for (int i = 0; i < 120; ++i) {
    ExprPtr e = mathlens::testing::random_expr(rng, 4, vars);
    ExprPtr once = parse_expr(render_expr(e));
    if (to_rational_function(e).has_value()) CHECK(equivalent(e, once));
    ExprPtr twice = parse_expr(render_expr(once));
    CHECK(expr_equal(once, twice));
  }
  CHECK(render_expr(parse_expr("(z - u*y) / (x + y)")) == "(z - u*y)/(x + y)");
}

TEST_CASE("extract_answer") {
  auto got = extract_answer("The answer is #### 10", AnswerKind::kInteger);
  REQUIRE(got.has_value());
  CHECK(*got == "10");
  got = extract_answer("#### 10 dollars", AnswerKind::kInteger);
  REQUIRE(got.has_value());
  CHECK(*got == "10");
  CHECK_FALSE(
      extract_answer("no delimiter here", AnswerKind::kInteger).has_value());
  // Last delimiter wins; text after a newline is ignored.
  got = extract_answer("#### 3\n#### 12\nmore prose", AnswerKind::kInteger);
  REQUIRE(got.has_value());
  CHECK(*got == "12");
  got = extract_answer("so #### (50/60)*12", AnswerKind::kExpression);
  REQUIRE(got.has_value());
  CHECK(*got == "(50/60)*12");
}

TEST_CASE("normalize_numeric") {
  CHECK(normalize_numeric("$1,000") == "1000");
  CHECK(normalize_numeric("83%") == "83");
  CHECK(normalize_numeric("+007") == "7");
  CHECK(normalize_numeric("-0") == "0");
  CHECK(normalize_numeric("10.0") == "10");
  CHECK(normalize_numeric("2.5") == "5/2");
  CHECK(normalize_numeric("10 dollars") == "10");
  CHECK_THROWS_AS(normalize_numeric("ten"), Error);
  CHECK_THROWS_AS(normalize_numeric(""), Error);
}

TEST_CASE("strip_to_expression") {
  auto e = strip_to_expression("Susan made 1/2*x buttons");
  REQUIRE(e.has_value());
  CHECK(equivalent(*e, parse_expr("0.5x")));

  e = strip_to_expression("M = 2(y + x)");
  REQUIRE(e.has_value());
  CHECK(equivalent(*e, parse_expr("2(y + x)")));

  // Equation-shaped answer: right-hand side of the last '=' is used.
  e = strip_to_expression("xz - y = xy");
  REQUIRE(e.has_value());
  CHECK(equivalent(*e, parse_expr("xy")));
  CHECK_FALSE(equivalent(parse_expr("(y+z)/x"), *e));

  CHECK(strip_to_expression("$x * (y/60)$").has_value());
  CHECK_FALSE(strip_to_expression("????").has_value());
  CHECK_FALSE(strip_to_expression("").has_value());
}
