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

#ifndef MATHLENS_RATIONAL_HPP_
#define MATHLENS_RATIONAL_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "mathlens/error.hpp"

namespace mathlens {

// Exact rational with arbitrary-precision numerator/denominator, always kept
// canonical (denominator > 0, gcd(|num|, den) = 1). GMP does the heavy
// lifting; this wrapper pins down construction, parsing and printing.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) fail(ErrCode::kEval, "division by zero in rational literal");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  // Accepts "12", "-4", "3/4", "-3/4" and decimal forms like "0.5" / "2.".
  static Rational parse(const std::string& text) {
    std::string s = text;
    if (s.empty()) fail(ErrCode::kParse, "empty rational literal");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string head = s.substr(0, dot);
      std::string frac = s.substr(dot + 1);
      for (char c : frac) {
        if (c < '0' || c > '9')
          fail(ErrCode::kParse, "bad decimal literal: " + text);
      }
      bool neg = !head.empty() && head[0] == '-';
      if (neg || (!head.empty() && head[0] == '+')) head.erase(0, 1);
      if (head.empty()) head = "0";
      Rational value = from_integer_digits(head, text);
      if (!frac.empty()) {
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        Rational f(mpq_class(from_integer_digits(frac, text).q_.get_num(),
                             scale));
        value = value + f;
      }
      return neg ? -value : value;
    }
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      Rational num = parse(s.substr(0, slash));
      Rational den = parse(s.substr(slash + 1));
      return num / den;
    }
    bool neg = s[0] == '-';
    if (neg || s[0] == '+') s.erase(0, 1);
    Rational value = from_integer_digits(s, text);
    return neg ? -value : value;
  }

  bool is_zero() const { return q_ == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  bool is_negative() const { return q_ < 0; }

  // Canonical text: "p" for integers, "p/q" otherwise.
  std::string str() const { return q_.get_str(); }

  double to_double() const { return q_.get_d(); }

  // Integer value; caller must have checked is_integer() and range.
  long to_long() const {
    if (!is_integer()) fail(ErrCode::kEval, "not an integer: " + str());
    if (!q_.get_num().fits_slong_p())
      fail(ErrCode::kEval, "integer out of range: " + str());
    return q_.get_num().get_si();
  }

  const mpq_class& raw() const { return q_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ + b.q_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ - b.q_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ * b.q_));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) fail(ErrCode::kEval, "division by zero");
    return Rational(mpq_class(a.q_ / b.q_));
  }
  Rational operator-() const { return Rational(mpq_class(-q_)); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.q_ == b.q_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return a.q_ != b.q_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.q_ < b.q_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a.q_ <= b.q_;
  }
  friend bool operator>(const Rational& a, const Rational& b) {
    return a.q_ > b.q_;
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return a.q_ >= b.q_;
  }

 private:
  static Rational from_integer_digits(const std::string& digits,
                                      const std::string& original) {
    if (digits.empty()) fail(ErrCode::kParse, "bad number: " + original);
    for (char c : digits) {
      if (c < '0' || c > '9') fail(ErrCode::kParse, "bad number: " + original);
    }
    mpz_class z(digits, 10);
    return Rational(mpq_class(z));
  }

  mpq_class q_;
};

}  // namespace mathlens

#endif  // MATHLENS_RATIONAL_HPP_
