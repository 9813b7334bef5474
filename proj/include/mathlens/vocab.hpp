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

#ifndef MATHLENS_VOCAB_HPP_
#define MATHLENS_VOCAB_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mathlens/error.hpp"

namespace mathlens {

using TokenId = std::int32_t;

// Closed vocabulary with a whitespace tokenizer: every whitespace-delimited
// chunk of the input must be a vocabulary entry. detokenize(tokenize(x)) == x
// for texts in canonical single-space form.
class Vocabulary {
 public:
  static constexpr const char* kPad = "<pad>";
  static constexpr const char* kEot = "<eot>";

  // Bijection and reserved-token checks only; arbitrary token sets are fine
  // for in-memory experiments.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  // One token per line, line number = id. Model vocab files must also pass
  // validate_arithmetic_closure().
  static Vocabulary from_file(const std::filesystem::path& path);

  void save(const std::filesystem::path& path) const;

  std::int32_t size() const { return static_cast<std::int32_t>(tokens_.size()); }
  const std::string& token(TokenId id) const;
  std::optional<TokenId> find(const std::string& text) const;
  TokenId id_of(const std::string& text) const;  // throws kOov

  TokenId pad_id() const { return pad_id_; }
  TokenId eot_id() const { return eot_id_; }

  std::vector<TokenId> tokenize(const std::string& text) const;
  std::string detokenize(std::span<const TokenId> ids) const;

  // Requires every integer 0..=2500 plus the operator glyphs and operator
  // words to be single tokens, so answer/operator logits are single entries.
  void validate_arithmetic_closure() const;

  // Single-token ids for the integers 0..=2500.
  TokenId integer_id(long value) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  TokenId pad_id_ = -1;
  TokenId eot_id_ = -1;
};

}  // namespace mathlens

#endif  // MATHLENS_VOCAB_HPP_
