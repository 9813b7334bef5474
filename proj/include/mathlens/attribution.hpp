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

#ifndef MATHLENS_ATTRIBUTION_HPP_
#define MATHLENS_ATTRIBUTION_HPP_

#include <map>
#include <string>
#include <vector>

#include "mathlens/hooks.hpp"

namespace mathlens {

// Tracked token family, e.g. {"operator:+", [id("+"), id("plus"), id("add")]}.
// Static members may be empty when every prompt supplies its own members
// (operand/answer groups differ per prompt).
struct TokenGroup {
  std::string label;
  std::vector<TokenId> members;
};

// Prompt plus optional per-prompt group members, aggregated after lookup.
struct PromptSpec {
  std::string text;
  std::map<std::string, std::vector<TokenId>> local_groups;
};

// Direct logit attribution: <W_U[t], FinalNorm(h)> with the final norm
// recomputed on the probed state. The zero state maps to zero by convention.
double direct_logit(const ModelBundle& bundle, std::span<const float> h,
                    TokenId token);

// Mean logit per (layer, site kind, group) at the last token position,
// averaged over the prompt set in input order.
struct LensCurve {
  std::vector<SiteKind> kinds;
  std::vector<std::string> group_labels;
  int n_layers = 0;
  int n_prompts = 0;  // prompts contributing to the means
  int n_skipped = 0;  // prompts skipped (out-of-vocabulary), reported

  double value(int layer, SiteKind kind, const std::string& group) const;
  std::string to_csv() const;  // layer,site,group,mean_logit,n_prompts

  std::vector<double> data;  // [layer][kind][group]
};

LensCurve lens_sweep(const ModelBundle& bundle,
                     const std::vector<PromptSpec>& prompts,
                     const std::vector<TokenGroup>& groups,
                     const std::vector<SiteKind>& kinds);

// Per-layer mean of logit(token_a) - logit(token_b) at resid_mid, reported
// separately for two prompt sets.
struct LogitDiffCurve {
  std::vector<double> set_a;
  std::vector<double> set_b;
  int n_prompts_a = 0;
  int n_prompts_b = 0;
  int n_skipped = 0;
};

LogitDiffCurve logit_diff_sweep(const ModelBundle& bundle,
                                const std::vector<std::string>& prompts_a,
                                const std::vector<std::string>& prompts_b,
                                TokenId token_a, TokenId token_b);

}  // namespace mathlens

#endif  // MATHLENS_ATTRIBUTION_HPP_
