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

#include "mathlens/model.hpp"

#include "mathlens/hooks.hpp"

namespace mathlens {

namespace detail {
Matrix forward_engine(const ModelBundle& bundle, std::span<const TokenId> ids,
                      const std::vector<int>* capture, ActivationCache* cache,
                      const PatchSpec* patch);
}  // namespace detail

Matrix forward_logits(const ModelBundle& bundle,
                      std::span<const TokenId> ids) {
  return detail::forward_engine(bundle, ids, nullptr, nullptr, nullptr);
}

std::vector<TokenId> greedy_decode(const ModelBundle& bundle,
                                   std::span<const TokenId> prompt_ids,
                                   int max_new_tokens) {
  if (prompt_ids.empty()) fail(ErrCode::kInvalidArg, "empty prompt");
  if (max_new_tokens < 0) fail(ErrCode::kInvalidArg, "negative token budget");
  if (static_cast<int>(prompt_ids.size()) + max_new_tokens >
      bundle.config.max_seq_len)
    fail(ErrCode::kOverflow,
         "prompt length + max_new_tokens exceeds max_seq_len");

  std::vector<TokenId> ids(prompt_ids.begin(), prompt_ids.end());
  std::vector<TokenId> out;
  for (int step = 0; step < max_new_tokens; ++step) {
    Matrix logits = forward_logits(bundle, ids);
    const float* last = logits.row(logits.rows - 1);
    TokenId best = 0;
    // Strict '>' keeps the lowest token id on ties.
    for (TokenId t = 1; t < bundle.config.vocab_size; ++t)
      if (last[t] > last[best]) best = t;
    out.push_back(best);
    ids.push_back(best);
    if (best == bundle.vocab.eot_id()) break;
  }
  return out;
}

}  // namespace mathlens
