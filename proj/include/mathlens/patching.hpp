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

#ifndef MATHLENS_PATCHING_HPP_
#define MATHLENS_PATCHING_HPP_

#include <optional>
#include <string>
#include <vector>

#include "mathlens/hooks.hpp"

namespace mathlens {

enum class PairKind { kAbstraction, kComputation, kCrossNumeric,
                      kCrossSymbolic };

const char* pair_kind_name(PairKind kind);
PairKind pair_kind_from_name(const std::string& name);

// Clean/corrupted input pair with tracked single-token answers. For
// abstraction pairs the operands match across the two prompts; for
// computation pairs the logic matches; cross_symbolic cleans carry no digit
// tokens. a_target, when present, is the clean logic applied to the
// corrupted operands.
struct PromptPair {
  std::vector<TokenId> clean_ids;
  std::vector<TokenId> corrupted_ids;
  TokenId a_clean = 0;
  TokenId a_corrupted = 0;
  std::optional<TokenId> a_target;
  PairKind kind = PairKind::kAbstraction;
  std::string clean_text;      // provenance
  std::string corrupted_text;  // provenance
};

// Pairs whose normalizing logit difference |LD_o - LD_c| falls below this
// are flagged degenerate and excluded from means (below single-precision
// forward noise in logit units).
inline constexpr double kDegenerateEps = 1e-3;

struct EffectResult {
  double value = 0.0;
  bool degenerate = false;
  double ld_clean = 0.0;      // LD_o
  double ld_corrupted = 0.0;  // LD_c
  double ld_patched = 0.0;    // LD_p
};

// Runs clean, corrupted and patched (clean state into the corrupted run at
// `site`) passes and returns e = (LD_p - LD_c) / (LD_o - LD_c), where
// LD_*(i) = logit_*(a_clean) - logit_*(a_corrupted) at the last position.
EffectResult patching_effect(const ModelBundle& bundle, const PromptPair& pair,
                             const SiteId& site);

struct PatchReport {
  std::vector<SiteId> sites;
  std::vector<double> mean_effects;             // mean over non-degenerate pairs
  std::vector<int> n_valid;                     // per site
  std::vector<int> n_degenerate;                // per site
  std::vector<std::vector<double>> per_pair;    // [site][pair]; NaN = degenerate
  int n_pairs = 0;

  double mean_for(int layer, SiteKind kind) const;
  std::string to_csv() const;  // layer,site,mean_effect,n_valid,n_degenerate
};

// Patching-effect sweep: mean effect per site over the pair set, degenerate
// pairs counted per site; a site with no valid pair reports NaN.
PatchReport patching_sweep(const ModelBundle& bundle,
                           const std::vector<PromptPair>& pairs,
                           const std::vector<SiteId>& sites);

// Default sweep sites: attention, MLP and layer (resid_final)
// outputs across layers at the last position.
std::vector<SiteId> default_patch_sites(int n_layers);

// Per-layer log-probabilities of the tracked answers after patching that
// layer's resid_final (last position) from the clean run into the corrupted
// run, plus the unpatched corrupted baseline. Labels: "target", "clean"
// (cross_numeric only) and "corrupted".
struct CrossTraceRow {
  int layer = 0;
  std::string label;
  double logprob = 0.0;
  double baseline_logprob = 0.0;
};

struct CrossPatchTrace {
  std::vector<CrossTraceRow> rows;
  double at(int layer, const std::string& label) const;
  double baseline(const std::string& label) const;
  std::string to_csv() const;  // layer,token_label,logprob,baseline_logprob
};

CrossPatchTrace cross_patch(const ModelBundle& bundle, const PromptPair& pair);

// Arithmetic mean of traces over a pair set, aggregated by (layer, label) in
// deterministic pair order.
CrossPatchTrace cross_patch_mean(const ModelBundle& bundle,
                                 const std::vector<PromptPair>& pairs);

// Stable log-softmax of one logit row.
std::vector<double> log_softmax(std::span<const float> logits);

}  // namespace mathlens

#endif  // MATHLENS_PATCHING_HPP_
