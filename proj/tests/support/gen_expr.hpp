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

// Test-only expression generators: random ASTs plus identity-preserving
// rewrites. These stay independent of the canonical-form implementation so
// they can serve as its oracle.

#ifndef MATHLENS_TESTS_SUPPORT_GEN_EXPR_HPP_
#define MATHLENS_TESTS_SUPPORT_GEN_EXPR_HPP_

#include <cmath>
#include <random>
#include <vector>

#include "mathlens/expr.hpp"

namespace mathlens::testing {

inline ExprPtr random_expr(std::mt19937_64& rng, int depth,
                           const std::vector<char>& vars) {
  auto pick = [&rng](int n) { return static_cast<int>(rng() % n); };
  if (depth <= 0 || pick(4) == 0) {
    if (!vars.empty() && pick(2) == 0)
      return Expr::variable(vars[pick(static_cast<int>(vars.size()))]);
    return Expr::number(Rational(pick(19) - 9));
  }
  switch (pick(5)) {
    case 0:
      return Expr::binary(Expr::Kind::kAdd, random_expr(rng, depth - 1, vars),
                          random_expr(rng, depth - 1, vars));
    case 1:
      return Expr::binary(Expr::Kind::kSub, random_expr(rng, depth - 1, vars),
                          random_expr(rng, depth - 1, vars));
    case 2:
      return Expr::binary(Expr::Kind::kMul, random_expr(rng, depth - 1, vars),
                          random_expr(rng, depth - 1, vars));
    case 3: {
      // Keep denominators away from the zero polynomial most of the time;
      // the equivalence code must still survive the remainder.
      ExprPtr den = random_expr(rng, depth - 2 < 0 ? 0 : depth - 2, vars);
      return Expr::binary(Expr::Kind::kDiv, random_expr(rng, depth - 1, vars),
                          Expr::binary(Expr::Kind::kAdd, den,
                                       Expr::number(Rational(pick(5) + 1))));
    }
    default:
      return Expr::neg(random_expr(rng, depth - 1, vars));
  }
}

// Applies one value-preserving rewrite somewhere in the tree.
inline ExprPtr equivalent_rewrite(std::mt19937_64& rng, const ExprPtr& e) {
  auto pick = [&rng](int n) { return static_cast<int>(rng() % n); };
  // Recurse half of the time to move the rewrite site around.
  if (e->lhs && pick(2) == 0) {
    if (e->kind == Expr::Kind::kNeg)
      return Expr::neg(equivalent_rewrite(rng, e->lhs));
    if (pick(2) == 0)
      return Expr::binary(e->kind, equivalent_rewrite(rng, e->lhs), e->rhs);
    return Expr::binary(e->kind, e->lhs, equivalent_rewrite(rng, e->rhs));
  }
  switch (pick(6)) {
    case 0:  // x -> x + 0
      return Expr::binary(Expr::Kind::kAdd, e, Expr::number(Rational(0)));
    case 1:  // x -> x * 1
      return Expr::binary(Expr::Kind::kMul, e, Expr::number(Rational(1)));
    case 2:  // x -> -(-x)
      return Expr::neg(Expr::neg(e));
    case 3:  // x -> (2*x)/2
      return Expr::binary(
          Expr::Kind::kDiv,
          Expr::binary(Expr::Kind::kMul, Expr::number(Rational(2)), e),
          Expr::number(Rational(2)));
    case 4:  // commute when commutative
      if (e->kind == Expr::Kind::kAdd || e->kind == Expr::Kind::kMul)
        return Expr::binary(e->kind, e->rhs, e->lhs);
      return Expr::binary(Expr::Kind::kSub, e, Expr::number(Rational(0)));
    default:  // a - b -> a + (-b)
      if (e->kind == Expr::Kind::kSub)
        return Expr::binary(Expr::Kind::kAdd, e->lhs, Expr::neg(e->rhs));
      return Expr::binary(Expr::Kind::kDiv, e, Expr::number(Rational(1)));
  }
}

// Plain recursive double-precision evaluation (independent of Rational).
inline double eval_double(const ExprPtr& e,
                          const std::map<char, double>& subst) {
  switch (e->kind) {
    case Expr::Kind::kNumber:
      return e->value.to_double();
    case Expr::Kind::kVariable:
      return subst.at(e->var);
    case Expr::Kind::kNeg:
      return -eval_double(e->lhs, subst);
    case Expr::Kind::kAdd:
      return eval_double(e->lhs, subst) + eval_double(e->rhs, subst);
    case Expr::Kind::kSub:
      return eval_double(e->lhs, subst) - eval_double(e->rhs, subst);
    case Expr::Kind::kMul:
      return eval_double(e->lhs, subst) * eval_double(e->rhs, subst);
    case Expr::Kind::kDiv:
      return eval_double(e->lhs, subst) / eval_double(e->rhs, subst);
  }
  return std::nan("");
}

}  // namespace mathlens::testing

#endif  // MATHLENS_TESTS_SUPPORT_GEN_EXPR_HPP_
