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

#include "mathlens/attribution.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mathlens {

double direct_logit(const ModelBundle& bundle, std::span<const float> h,
                    TokenId token) {
  const ModelConfig& cfg = bundle.config;
  if (static_cast<int>(h.size()) != cfg.d_model)
    fail(ErrCode::kInvalidArg, "hidden state dimension mismatch");
  if (token < 0 || token >= cfg.vocab_size)
    fail(ErrCode::kInvalidArg, "token id out of range");
  float ss = 0.0f;
  for (float x : h) ss += x * x;
  if (ss == 0.0f) return 0.0;  // norm of zero defined as the zero vector
  std::vector<float> normed(h.size());
  rms_norm(h.data(), bundle.weights.final_norm.data(), cfg.d_model,
           cfg.norm_eps, normed.data());
  return dot(bundle.weights.unembed.row(token), normed.data(), cfg.d_model);
}

namespace {

std::size_t curve_index(const LensCurve& c, int layer, std::size_t kind_idx,
                        std::size_t group_idx) {
  return (static_cast<std::size_t>(layer) * c.kinds.size() + kind_idx) *
             c.group_labels.size() +
         group_idx;
}

}  // namespace

double LensCurve::value(int layer, SiteKind kind,
                        const std::string& group) const {
  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    if (kinds[ki] != kind) continue;
    for (std::size_t gi = 0; gi < group_labels.size(); ++gi) {
      if (group_labels[gi] == group)
        return data[curve_index(*this, layer, ki, gi)];
    }
  }
  fail(ErrCode::kInvalidArg, "no curve entry for site/group");
}

std::string LensCurve::to_csv() const {
  std::ostringstream out;
  out << "layer,site,group,mean_logit,n_prompts\n";
  char buf[64];
  for (int layer = 0; layer < n_layers; ++layer) {
    for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
      for (std::size_t gi = 0; gi < group_labels.size(); ++gi) {
        std::snprintf(buf, sizeof(buf), "%.9g",
                      data[curve_index(*this, layer, ki, gi)]);
        out << layer << ',' << site_kind_name(kinds[ki]) << ','
            << group_labels[gi] << ',' << buf << ',' << n_prompts << '\n';
      }
    }
  }
  return out.str();
}

LensCurve lens_sweep(const ModelBundle& bundle,
                     const std::vector<PromptSpec>& prompts,
                     const std::vector<TokenGroup>& groups,
                     const std::vector<SiteKind>& kinds) {
  if (prompts.empty()) fail(ErrCode::kInvalidArg, "empty prompt set");
  if (groups.empty()) fail(ErrCode::kInvalidArg, "no token groups");
  if (kinds.empty()) fail(ErrCode::kInvalidArg, "no site kinds");

  LensCurve curve;
  curve.kinds = kinds;
  curve.n_layers = bundle.config.n_layers;
  for (const TokenGroup& g : groups) {
    if (g.label.empty()) fail(ErrCode::kInvalidArg, "unlabeled token group");
    for (TokenId t : g.members) {
      if (t < 0 || t >= bundle.config.vocab_size)
        fail(ErrCode::kInvalidArg,
             "token group '" + g.label + "' has an invalid id");
    }
    curve.group_labels.push_back(g.label);
  }
  curve.data.assign(static_cast<std::size_t>(curve.n_layers) * kinds.size() *
                        groups.size(),
                    0.0);

  for (const PromptSpec& prompt : prompts) {
    std::vector<TokenId> ids;
    try {
      ids = bundle.vocab.tokenize(prompt.text);
    } catch (const Error&) {
      ++curve.n_skipped;  // reported, prompt skipped
      continue;
    }
    ActivationCache cache = run_with_cache(bundle, ids);
    for (int layer = 0; layer < curve.n_layers; ++layer) {
      for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
        const std::vector<float>& h =
            cache.at({layer, kinds[ki], SiteId::kLast});
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
          const std::vector<TokenId>* members = &groups[gi].members;
          auto local = prompt.local_groups.find(groups[gi].label);
          if (local != prompt.local_groups.end()) members = &local->second;
          if (members->empty())
            fail(ErrCode::kInvalidArg,
                 "group '" + groups[gi].label + "' has no members for prompt");
          double acc = 0;
          for (TokenId t : *members) acc += direct_logit(bundle, h, t);
          curve.data[curve_index(curve, layer, ki, gi)] +=
              acc / static_cast<double>(members->size());
        }
      }
    }
    ++curve.n_prompts;
  }
  if (curve.n_prompts == 0)
    fail(ErrCode::kInvalidArg, "every prompt was out of vocabulary");
  for (double& x : curve.data) x /= curve.n_prompts;
  return curve;
}

LogitDiffCurve logit_diff_sweep(const ModelBundle& bundle,
                                const std::vector<std::string>& prompts_a,
                                const std::vector<std::string>& prompts_b,
                                TokenId token_a, TokenId token_b) {
  if (prompts_a.empty() || prompts_b.empty())
    fail(ErrCode::kInvalidArg, "both prompt sets must be non-empty");
  LogitDiffCurve curve;
  curve.set_a.assign(static_cast<std::size_t>(bundle.config.n_layers), 0.0);
  curve.set_b = curve.set_a;

  auto accumulate = [&](const std::vector<std::string>& prompts,
                        std::vector<double>* out, int* counted) {
    for (const std::string& text : prompts) {
      std::vector<TokenId> ids;
      try {
        ids = bundle.vocab.tokenize(text);
      } catch (const Error&) {
        ++curve.n_skipped;
        continue;
      }
      ActivationCache cache = run_with_cache(bundle, ids);
      for (int layer = 0; layer < bundle.config.n_layers; ++layer) {
        const std::vector<float>& h =
            cache.at({layer, SiteKind::kResidMid, SiteId::kLast});
        (*out)[static_cast<std::size_t>(layer)] +=
            direct_logit(bundle, h, token_a) - direct_logit(bundle, h, token_b);
      }
      ++*counted;
    }
    if (*counted == 0)
      fail(ErrCode::kInvalidArg, "every prompt was out of vocabulary");
    for (double& x : *out) x /= *counted;
  };
  accumulate(prompts_a, &curve.set_a, &curve.n_prompts_a);
  accumulate(prompts_b, &curve.set_b, &curve.n_prompts_b);
  return curve;
}

}  // namespace mathlens
