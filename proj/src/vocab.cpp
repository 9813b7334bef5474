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

#include "mathlens/vocab.hpp"

#include <fstream>
#include <sstream>

namespace mathlens {

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.index_.reserve(v.tokens_.size());
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    const std::string& t = v.tokens_[i];
    if (t.empty()) fail(ErrCode::kVocab, "empty token at id " + std::to_string(i));
    auto [it, inserted] = v.index_.emplace(t, static_cast<TokenId>(i));
    if (!inserted)
      fail(ErrCode::kVocab, "duplicate token '" + t + "' at ids " +
                                std::to_string(it->second) + " and " +
                                std::to_string(i));
  }
  auto pad = v.find(kPad);
  auto eot = v.find(kEot);
  if (!pad || !eot)
    fail(ErrCode::kVocab, "vocabulary is missing reserved tokens <pad>/<eot>");
  v.pad_id_ = *pad;
  v.eot_id_ = *eot;
  return v;
}

Vocabulary Vocabulary::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrCode::kIo, "cannot open vocabulary file " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  Vocabulary v = from_tokens(std::move(tokens));
  v.validate_arithmetic_closure();
  return v;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrCode::kIo, "cannot write vocabulary file " + path.string());
  for (const std::string& t : tokens_) out << t << '\n';
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || id >= size())
    fail(ErrCode::kInvalidArg, "token id out of range: " + std::to_string(id));
  return tokens_[static_cast<std::size_t>(id)];
}

std::optional<TokenId> Vocabulary::find(const std::string& text) const {
  auto it = index_.find(text);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::id_of(const std::string& text) const {
  auto id = find(text);
  if (!id) fail(ErrCode::kOov, "out-of-vocabulary word '" + text + "'");
  return *id;
}

std::vector<TokenId> Vocabulary::tokenize(const std::string& text) const {
  if (text.empty()) fail(ErrCode::kInvalidArg, "cannot tokenize empty text");
  std::vector<TokenId> ids;
  std::istringstream in(text);
  std::string word;
  while (in >> word) ids.push_back(id_of(word));
  if (ids.empty()) fail(ErrCode::kInvalidArg, "cannot tokenize blank text");
  return ids;
}

std::string Vocabulary::detokenize(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) {
    if (!out.empty()) out.push_back(' ');
    out += token(id);
  }
  return out;
}

void Vocabulary::validate_arithmetic_closure() const {
  for (long n = 0; n <= 2500; ++n) {
    if (!find(std::to_string(n)))
      fail(ErrCode::kVocab,
           "integer " + std::to_string(n) + " is not a single token");
  }
  static const char* kGlyphs[] = {"+", "-", "\xe2\x88\x92", "*",
                                  "\xc3\x97", "/", "\xc3\xb7"};
  for (const char* g : kGlyphs) {
    if (!find(g))
      fail(ErrCode::kVocab, std::string("operator glyph '") + g +
                                "' is not a single token");
  }
  static const char* kWords[] = {"add",      "plus",  "subtract", "minus",
                                 "multiply", "times", "divide"};
  for (const char* w : kWords) {
    if (!find(w))
      fail(ErrCode::kVocab,
           std::string("operator word '") + w + "' is not a single token");
  }
}

TokenId Vocabulary::integer_id(long value) const {
  if (value < 0 || value > 2500)
    fail(ErrCode::kInvalidArg,
         "integer outside single-token range: " + std::to_string(value));
  return id_of(std::to_string(value));
}

}  // namespace mathlens
