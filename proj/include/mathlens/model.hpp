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

#ifndef MATHLENS_MODEL_HPP_
#define MATHLENS_MODEL_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mathlens/tensor.hpp"
#include "mathlens/vocab.hpp"

namespace mathlens {

// Minimal deterministic decoder-only transformer: pre-norm blocks with
// RMS normalization, rotary positions on q/k (interleaved pairs, base 10000),
// gated MLP out·(silu(gate x) ⊙ (in x)), tied nothing. Single precision
// throughout; a forward pass is a pure function of (weights, ids).
struct ModelConfig {
  int n_layers = 0;
  int d_model = 0;
  int n_heads = 0;
  int d_head = 0;  // must equal d_model / n_heads
  int d_mlp = 0;
  int vocab_size = 0;
  int max_seq_len = 0;
  float norm_eps = 1e-5f;

  void validate() const;
};

struct LayerWeights {
  Matrix wq, wk, wv, wo;        // [d_model × d_model]
  Matrix w_in, w_gate;          // [d_mlp × d_model]
  Matrix w_out;                 // [d_model × d_mlp]
  std::vector<float> norm1;     // pre-attention RMS scale
  std::vector<float> norm2;     // pre-MLP RMS scale
};

struct ModelWeights {
  Matrix embed;                  // [vocab × d_model]
  std::vector<LayerWeights> layers;
  std::vector<float> final_norm;
  Matrix unembed;                // [vocab × d_model]
};

// Immutable after load; safe to share across threads.
struct ModelBundle {
  ModelConfig config;
  ModelWeights weights;
  Vocabulary vocab;
};

// Binary weight format: u32 little-endian header length, UTF-8 JSON header
// (config fields plus a tensor table of name/dtype/shape/byte_offset), then
// a contiguous little-endian f32 payload. Offsets are relative to the start
// of the payload.
ModelBundle load_model(const std::filesystem::path& weights_path,
                       const std::filesystem::path& vocab_path);
void save_weights(const std::filesystem::path& path, const ModelConfig& config,
                  const ModelWeights& weights);

// Validates shapes/finiteness of in-memory weights against the config,
// naming the offending tensor (used by load and by constructors).
void validate_weights(const ModelConfig& config, const ModelWeights& weights);

// Zero-initialized weights with the shapes the config prescribes.
ModelWeights allocate_weights(const ModelConfig& config);

// Plain forward pass; returns logits for every position [seq × vocab].
Matrix forward_logits(const ModelBundle& bundle, std::span<const TokenId> ids);

// Greedy argmax continuation (ties broken toward the lowest token id).
// Stops at <eot> (which is included in the result) or after max_new_tokens.
// Requires prompt size + max_new_tokens <= max_seq_len.
std::vector<TokenId> greedy_decode(const ModelBundle& bundle,
                                   std::span<const TokenId> prompt_ids,
                                   int max_new_tokens);

}  // namespace mathlens

#endif  // MATHLENS_MODEL_HPP_
