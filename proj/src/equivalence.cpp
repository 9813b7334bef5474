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

#include "mathlens/equivalence.hpp"

#include <random>
#include <set>

namespace mathlens {

Polynomial Polynomial::constant(Rational c) {
  Polynomial p;
  if (!c.is_zero()) p.terms[{}] = std::move(c);
  return p;
}

Polynomial Polynomial::variable(char v) {
  Polynomial p;
  p.terms[{{v, 1}}] = Rational(1);
  return p;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  for (const auto& [mono, coef] : b.terms) {
    auto it = out.terms.find(mono);
    if (it == out.terms.end()) {
      out.terms[mono] = coef;
    } else {
      it->second = it->second + coef;
      if (it->second.is_zero()) out.terms.erase(it);
    }
  }
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out;
  for (const auto& [mono, coef] : terms) out.terms[mono] = -coef;
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return a + (-b);
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      Polynomial::Monomial mono = ma;
      for (const auto& [var, exp] : mb) mono[var] += exp;
      Rational coef = ca * cb;
      auto it = out.terms.find(mono);
      if (it == out.terms.end()) {
        out.terms[mono] = coef;
      } else {
        it->second = it->second + coef;
        if (it->second.is_zero()) out.terms.erase(it);
      }
    }
  }
  return out;
}

namespace {

struct ZeroDenominator {};

RationalFunction build(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::kNumber:
      return {Polynomial::constant(e->value), Polynomial::constant(1)};
    case Expr::Kind::kVariable:
      return {Polynomial::variable(e->var), Polynomial::constant(1)};
    case Expr::Kind::kNeg: {
      RationalFunction f = build(e->lhs);
      return {-f.num, f.den};
    }
    case Expr::Kind::kAdd: {
      RationalFunction a = build(e->lhs), b = build(e->rhs);
      return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    case Expr::Kind::kSub: {
      RationalFunction a = build(e->lhs), b = build(e->rhs);
      return {a.num * b.den - b.num * a.den, a.den * b.den};
    }
    case Expr::Kind::kMul: {
      RationalFunction a = build(e->lhs), b = build(e->rhs);
      return {a.num * b.num, a.den * b.den};
    }
    case Expr::Kind::kDiv: {
      RationalFunction a = build(e->lhs), b = build(e->rhs);
      if (b.num.is_zero()) throw ZeroDenominator{};
      return {a.num * b.den, a.den * b.num};
    }
  }
  fail(ErrCode::kInternal, "corrupt expression node");
}

}  // namespace

std::optional<RationalFunction> to_rational_function(const ExprPtr& e) {
  try {
    return build(e);
  } catch (const ZeroDenominator&) {
    return std::nullopt;
  }
}

bool equivalent(const ExprPtr& e1, const ExprPtr& e2) {
  auto f1 = to_rational_function(e1);
  auto f2 = to_rational_function(e2);
  if (!f1 || !f2) return false;
  // num1/den1 == num2/den2 in the fraction field iff the cross products
  // agree as polynomials.
  return f1->num * f2->den == f2->num * f1->den;
}

bool random_eval_oracle(const ExprPtr& e1, const ExprPtr& e2, int k_points,
                        std::uint64_t seed) {
  if (k_points < 1) fail(ErrCode::kInvalidArg, "k_points must be >= 1");
  std::set<char> vars = expr_variables(e1);
  vars.merge(expr_variables(e2));

  std::mt19937_64 rng(seed);
  // Numerators over +/-2048 and denominators over 1..64: ~2^17 distinct
  // values per variable, so a nonzero univariate discrepancy of modest degree
  // survives a sampled point with overwhelming probability.
  auto draw = [&rng]() {
    long num = static_cast<long>(rng() % 4097) - 2048;
    long den = static_cast<long>(rng() % 64) + 1;
    return Rational(num, den);
  };

  constexpr int kMaxResamples = 64;
  for (int point = 0; point < k_points; ++point) {
    bool evaluated = false;
    for (int attempt = 0; attempt < kMaxResamples && !evaluated; ++attempt) {
      Substitution subst;
      for (char v : vars) subst[v] = draw();
      try {
        Rational a = eval_exact(e1, subst);
        Rational b = eval_exact(e2, subst);
        if (a != b) return false;
        evaluated = true;
      } catch (const Error&) {
        // Pole of one of the expressions; resample the point.
      }
    }
    // A point that can never be evaluated (everything is a pole) carries no
    // information either way; keep going with the remaining points.
  }
  return true;
}

}  // namespace mathlens
