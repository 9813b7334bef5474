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

#include "mathlens/answers.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace mathlens {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace((unsigned char)s[b])) ++b;
  while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> words;
  std::istringstream in(s);
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

bool all_alpha(const std::string& w) {
  if (w.empty()) return false;
  for (char c : w)
    if (!std::isalpha((unsigned char)c)) return false;
  return true;
}

std::string join(const std::vector<std::string>& words, size_t begin,
                 size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += words[i];
  }
  return out;
}

// Drops trailing words that are pure letters ("dollars", "g").
std::string drop_trailing_units(const std::string& s) {
  std::vector<std::string> words = split_words(s);
  size_t end = words.size();
  while (end > 1 && all_alpha(words[end - 1])) --end;
  return join(words, 0, end);
}

// Removes LaTeX/markdown decoration the expression parser does not accept.
std::string strip_wrappers(const std::string& s) {
  std::string out;
  for (size_t i = 0; i < s.size();) {
    if (s.compare(i, 2, "\\(") == 0 || s.compare(i, 2, "\\)") == 0 ||
        s.compare(i, 2, "\\[") == 0 || s.compare(i, 2, "\\]") == 0 ||
        s.compare(i, 2, "**") == 0) {
      i += 2;
      continue;
    }
    if (s[i] == '$' || s[i] == '`') {
      ++i;
      continue;
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::optional<ExprPtr> try_parse(const std::string& s) {
  if (trim(s).empty()) return std::nullopt;
  try {
    return parse_expr(s);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<std::string> extract_answer(const std::string& generation,
                                          AnswerKind kind) {
  static const std::string kDelim = "####";
  size_t at = generation.rfind(kDelim);
  if (at == std::string::npos) return std::nullopt;
  std::string rest = generation.substr(at + kDelim.size());
  size_t nl = rest.find('\n');
  if (nl != std::string::npos) rest = rest.substr(0, nl);
  rest = trim(rest);
  if (kind == AnswerKind::kInteger) rest = drop_trailing_units(rest);
  return rest;
}

Rational parse_numeric(const std::string& text) {
  std::string cleaned;
  for (char c : drop_trailing_units(trim(text))) {
    if (c == '$' || c == ',' || c == '%' || std::isspace((unsigned char)c))
      continue;
    cleaned.push_back(c);
  }
  if (cleaned.empty()) fail(ErrCode::kParse, "not a number: '" + text + "'");
  for (char c : cleaned) {
    if (!std::isdigit((unsigned char)c) && c != '.' && c != '/' && c != '-' &&
        c != '+')
      fail(ErrCode::kParse, "not a number: '" + text + "'");
  }
  return Rational::parse(cleaned);
}

std::string normalize_numeric(const std::string& text) {
  return parse_numeric(text).str();
}

std::optional<ExprPtr> strip_to_expression(const std::string& raw) {
  std::string text = trim(strip_wrappers(raw));
  if (text.empty()) return std::nullopt;

  // Assignment-style answers: keep the right-hand side of the last '='.
  size_t eq = text.rfind('=');
  if (eq != std::string::npos) {
    if (auto e = strip_to_expression(text.substr(eq + 1))) return e;
    // Fall through: perhaps '=' was part of prose and the whole thing parses.
  }

  if (auto e = try_parse(text)) return e;

  // Drop as few words as possible, preferring to shed a leading subject
  // clause ("Susan made ...") before trailing units ("... buttons").
  std::vector<std::string> words = split_words(text);
  size_t n = words.size();
  for (size_t dropped = 1; dropped < n; ++dropped) {
    for (size_t lead = dropped + 1; lead-- > 0;) {
      size_t trail = dropped - lead;
      if (lead + trail >= n) continue;
      if (auto e = try_parse(join(words, lead, n - trail))) return e;
    }
  }
  return std::nullopt;
}

}  // namespace mathlens
