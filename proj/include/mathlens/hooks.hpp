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

#ifndef MATHLENS_HOOKS_HPP_
#define MATHLENS_HOOKS_HPP_

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "mathlens/model.hpp"

namespace mathlens {

// Hook sites within a layer, in forward order. resid_pre is the block input
// (the embedding stream for layer 0); for later layers it aliases the
// previous layer's resid_final.
enum class SiteKind {
  kResidPre = 0,
  kAttnOut = 1,
  kResidMid = 2,
  kMlpOut = 3,
  kResidFinal = 4,
};

const char* site_kind_name(SiteKind kind);
SiteKind site_kind_from_name(const std::string& name);

struct SiteId {
  static constexpr int kLast = -1;  // resolves to each sequence's final index

  int layer = 0;
  SiteKind kind = SiteKind::kResidFinal;
  int position = kLast;
};

// Replacement of one hidden state before downstream consumption.
struct PatchSpec {
  SiteId site;
  std::vector<float> replacement;  // length d_model, finite
};

// Per-site hidden states captured at the requested positions, plus the run's
// token ids and full logits.
class ActivationCache {
 public:
  std::vector<TokenId> ids;
  Matrix logits;  // [seq × vocab]

  int seq_len() const { return static_cast<int>(ids.size()); }

  bool contains(const SiteId& site) const;
  const std::vector<float>& at(const SiteId& site) const;

  std::vector<float> last_logits() const;

  void put(int layer, SiteKind kind, int position, const float* v, int n);
  std::size_t site_count() const { return acts_.size(); }

 private:
  SiteId resolve(const SiteId& site) const;
  std::map<std::tuple<int, int, int>, std::vector<float>> acts_;
};

// Forward pass capturing every hook site at the given positions (default:
// last position only). Logits are identical to an uninstrumented forward.
ActivationCache run_with_cache(const ModelBundle& bundle,
                               std::span<const TokenId> ids,
                               const std::vector<int>& positions = {
                                   SiteId::kLast});

// Forward pass with one hidden state overwritten; everything upstream is
// untouched. Returns the patched run's cache (captured at the patch position).
ActivationCache run_with_patch(const ModelBundle& bundle,
                               std::span<const TokenId> ids,
                               const PatchSpec& patch);

}  // namespace mathlens

#endif  // MATHLENS_HOOKS_HPP_
