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

#ifndef MATHLENS_EQUIVALENCE_HPP_
#define MATHLENS_EQUIVALENCE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "mathlens/expr.hpp"

namespace mathlens {

// Multivariate polynomial over exact rationals: monomial -> coefficient.
// The monomial key maps each variable to its (positive) exponent.
struct Polynomial {
  using Monomial = std::map<char, int>;
  std::map<Monomial, Rational> terms;

  bool is_zero() const { return terms.empty(); }

  static Polynomial constant(Rational c);
  static Polynomial variable(char v);

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms == b.terms;
  }
};

// Expression as a formal rational function num/den (den not identically
// zero). Built without polynomial GCD: equality is decided by
// cross-multiplication, which is exact in the fraction field.
struct RationalFunction {
  Polynomial num;
  Polynomial den;  // non-zero polynomial
};

// Canonicalizes an expression; returns nullopt if a division by an
// identically-zero denominator occurs (the expression denotes no rational
// function, e.g. "x/(y-y)").
std::optional<RationalFunction> to_rational_function(const ExprPtr& e);

// True iff e1 - e2 is identically zero as a rational function. Points where
// an expression is undefined do not matter ("x/x" is equivalent to "1");
// expressions that are no rational function at all compare unequal to
// everything.
bool equivalent(const ExprPtr& e1, const ExprPtr& e2);

// Independent probabilistic check: evaluates both expressions at k random
// rational points (resampling near poles) and reports false on any
// disagreement. equivalent() == true implies this returns true for every
// seed; a false negative for inequivalent inputs requires a nonzero rational
// function to vanish at every sampled point.
bool random_eval_oracle(const ExprPtr& e1, const ExprPtr& e2, int k_points,
                        std::uint64_t seed);

}  // namespace mathlens

#endif  // MATHLENS_EQUIVALENCE_HPP_
