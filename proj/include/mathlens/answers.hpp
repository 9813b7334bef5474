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

#ifndef MATHLENS_ANSWERS_HPP_
#define MATHLENS_ANSWERS_HPP_

#include <optional>
#include <string>

#include "mathlens/expr.hpp"

namespace mathlens {

enum class AnswerKind { kInteger, kExpression };

// Takes the substring after the last "####" delimiter (first line only,
// trimmed). For kInteger, trailing unit words are dropped ("10 dollars" ->
// "10"). Returns nullopt when the delimiter is absent; the harness scores
// that as an extraction failure.
std::optional<std::string> extract_answer(const std::string& generation,
                                          AnswerKind kind);

// Canonical exact-compare key for a numeric answer: strips '$', ',', '%' and
// trailing unit words, then parses the remainder as an exact rational
// ("$1,000" -> "1000", "83%" -> "83", "+007" -> "7"). Throws Error(kParse)
// when no number remains ("ten").
std::string normalize_numeric(const std::string& text);

// Same, but returns the parsed rational.
Rational parse_numeric(const std::string& text);

// Best-effort recovery of an expression from a natural-language answer:
// strips LaTeX/markdown wrappers; takes the right-hand side of the last '='
// ("M = 2(y+x)"); and otherwise drops the fewest possible leading (then
// trailing) words until the remainder parses ("Susan made 1/2*x buttons" ->
// 1/2*x). Returns nullopt when nothing parses; scored as a parse failure.
std::optional<ExprPtr> strip_to_expression(const std::string& text);

}  // namespace mathlens

#endif  // MATHLENS_ANSWERS_HPP_
