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

#include "mathlens/patching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace mathlens {

const char* pair_kind_name(PairKind kind) {
  switch (kind) {
    case PairKind::kAbstraction: return "abstraction";
    case PairKind::kComputation: return "computation";
    case PairKind::kCrossNumeric: return "cross_numeric";
    case PairKind::kCrossSymbolic: return "cross_symbolic";
  }
  return "?";
}

PairKind pair_kind_from_name(const std::string& name) {
  if (name == "abstraction") return PairKind::kAbstraction;
  if (name == "computation") return PairKind::kComputation;
  if (name == "cross_numeric") return PairKind::kCrossNumeric;
  if (name == "cross_symbolic") return PairKind::kCrossSymbolic;
  fail(ErrCode::kInvalidArg, "unknown pair kind '" + name + "'");
}

namespace {

double logit_diff(const std::vector<float>& logits, TokenId a_clean,
                  TokenId a_corrupted) {
  return static_cast<double>(logits[static_cast<std::size_t>(a_clean)]) -
         static_cast<double>(logits[static_cast<std::size_t>(a_corrupted)]);
}

char* fmt(char* buf, std::size_t n, double v) {
  std::snprintf(buf, n, "%.9g", v);
  return buf;
}

}  // namespace

EffectResult patching_effect(const ModelBundle& bundle, const PromptPair& pair,
                             const SiteId& site) {
  ActivationCache clean = run_with_cache(bundle, pair.clean_ids);
  Matrix corrupted_logits = forward_logits(bundle, pair.corrupted_ids);

  PatchSpec patch{site, clean.at(site)};
  ActivationCache patched = run_with_patch(bundle, pair.corrupted_ids, patch);

  const float* cor_last = corrupted_logits.row(corrupted_logits.rows - 1);
  std::vector<float> cor(cor_last, cor_last + corrupted_logits.cols);

  EffectResult r;
  r.ld_clean = logit_diff(clean.last_logits(), pair.a_clean, pair.a_corrupted);
  r.ld_corrupted = logit_diff(cor, pair.a_clean, pair.a_corrupted);
  r.ld_patched =
      logit_diff(patched.last_logits(), pair.a_clean, pair.a_corrupted);
  double denom = r.ld_clean - r.ld_corrupted;
  if (std::abs(denom) < kDegenerateEps) {
    r.degenerate = true;
    r.value = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.value = (r.ld_patched - r.ld_corrupted) / denom;
  return r;
}

double PatchReport::mean_for(int layer, SiteKind kind) const {
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].layer == layer && sites[i].kind == kind)
      return mean_effects[i];
  }
  fail(ErrCode::kInvalidArg, "site not in report");
}

std::string PatchReport::to_csv() const {
  std::ostringstream out;
  out << "layer,site,mean_effect,n_valid,n_degenerate\n";
  char buf[64];
  for (std::size_t i = 0; i < sites.size(); ++i) {
    out << sites[i].layer << ',' << site_kind_name(sites[i].kind) << ','
        << (n_valid[i] == 0 ? "undefined" : fmt(buf, sizeof(buf),
                                                mean_effects[i]))
        << ',' << n_valid[i] << ',' << n_degenerate[i] << '\n';
  }
  return out.str();
}

PatchReport patching_sweep(const ModelBundle& bundle,
                           const std::vector<PromptPair>& pairs,
                           const std::vector<SiteId>& sites) {
  if (pairs.empty()) fail(ErrCode::kInvalidArg, "empty pair set");
  if (sites.empty()) fail(ErrCode::kInvalidArg, "empty site set");

  PatchReport report;
  report.sites = sites;
  report.n_pairs = static_cast<int>(pairs.size());
  report.per_pair.assign(sites.size(),
                         std::vector<double>(pairs.size(),
                                             std::numeric_limits<double>::quiet_NaN()));
  report.mean_effects.assign(sites.size(), 0.0);
  report.n_valid.assign(sites.size(), 0);
  report.n_degenerate.assign(sites.size(), 0);

  // Deterministic (pair-index, site-index) order.
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    for (std::size_t si = 0; si < sites.size(); ++si) {
      EffectResult e = patching_effect(bundle, pairs[pi], sites[si]);
      if (e.degenerate) {
        ++report.n_degenerate[si];
        continue;
      }
      report.per_pair[si][pi] = e.value;
      report.mean_effects[si] += e.value;
      ++report.n_valid[si];
    }
  }
  for (std::size_t si = 0; si < sites.size(); ++si) {
    if (report.n_valid[si] > 0) {
      report.mean_effects[si] /= report.n_valid[si];
    } else {
      report.mean_effects[si] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return report;
}

std::vector<SiteId> default_patch_sites(int n_layers) {
  std::vector<SiteId> sites;
  for (int layer = 0; layer < n_layers; ++layer) {
    sites.push_back({layer, SiteKind::kAttnOut, SiteId::kLast});
    sites.push_back({layer, SiteKind::kMlpOut, SiteId::kLast});
    sites.push_back({layer, SiteKind::kResidFinal, SiteId::kLast});
  }
  return sites;
}

std::vector<double> log_softmax(std::span<const float> logits) {
  double mx = -std::numeric_limits<double>::infinity();
  for (float x : logits) mx = std::max(mx, static_cast<double>(x));
  double z = 0.0;
  for (float x : logits) z += std::exp(static_cast<double>(x) - mx);
  double lz = mx + std::log(z);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i)
    out[i] = static_cast<double>(logits[i]) - lz;
  return out;
}

double CrossPatchTrace::at(int layer, const std::string& label) const {
  for (const CrossTraceRow& row : rows) {
    if (row.layer == layer && row.label == label) return row.logprob;
  }
  fail(ErrCode::kInvalidArg, "no trace row for layer/label");
}

double CrossPatchTrace::baseline(const std::string& label) const {
  for (const CrossTraceRow& row : rows) {
    if (row.label == label) return row.baseline_logprob;
  }
  fail(ErrCode::kInvalidArg, "no trace row for label");
}

std::string CrossPatchTrace::to_csv() const {
  std::ostringstream out;
  out << "layer,token_label,logprob,baseline_logprob\n";
  char a[64], b[64];
  for (const CrossTraceRow& row : rows) {
    out << row.layer << ',' << row.label << ','
        << fmt(a, sizeof(a), row.logprob) << ','
        << fmt(b, sizeof(b), row.baseline_logprob) << '\n';
  }
  return out.str();
}

CrossPatchTrace cross_patch(const ModelBundle& bundle, const PromptPair& pair) {
  if (pair.kind != PairKind::kCrossNumeric &&
      pair.kind != PairKind::kCrossSymbolic)
    fail(ErrCode::kInvalidArg,
         "cross_patch requires a cross_numeric or cross_symbolic pair");
  if (!pair.a_target.has_value())
    fail(ErrCode::kInvalidArg, "cross pair is missing its target answer");

  std::vector<std::pair<std::string, TokenId>> tracked;
  tracked.emplace_back("target", *pair.a_target);
  if (pair.kind == PairKind::kCrossNumeric)
    tracked.emplace_back("clean", pair.a_clean);
  tracked.emplace_back("corrupted", pair.a_corrupted);

  ActivationCache clean = run_with_cache(bundle, pair.clean_ids);
  Matrix corrupted_logits = forward_logits(bundle, pair.corrupted_ids);
  const float* baseline_row = corrupted_logits.row(corrupted_logits.rows - 1);
  std::vector<double> baseline = log_softmax(
      std::span<const float>(baseline_row, corrupted_logits.cols));

  CrossPatchTrace trace;
  for (int layer = 0; layer < bundle.config.n_layers; ++layer) {
    SiteId site{layer, SiteKind::kResidFinal, SiteId::kLast};
    PatchSpec patch{site, clean.at(site)};
    ActivationCache patched = run_with_patch(bundle, pair.corrupted_ids, patch);
    std::vector<float> logits = patched.last_logits();
    std::vector<double> lp = log_softmax(logits);
    for (const auto& [label, token] : tracked) {
      trace.rows.push_back({layer, label,
                            lp[static_cast<std::size_t>(token)],
                            baseline[static_cast<std::size_t>(token)]});
    }
  }
  return trace;
}

CrossPatchTrace cross_patch_mean(const ModelBundle& bundle,
                                 const std::vector<PromptPair>& pairs) {
  if (pairs.empty()) fail(ErrCode::kInvalidArg, "empty pair set");
  std::map<std::pair<int, std::string>, std::pair<double, double>> acc;
  std::map<std::pair<int, std::string>, int> counts;
  std::vector<std::pair<int, std::string>> order;
  for (const PromptPair& pair : pairs) {
    CrossPatchTrace t = cross_patch(bundle, pair);
    for (const CrossTraceRow& row : t.rows) {
      auto key = std::make_pair(row.layer, row.label);
      if (!counts.count(key)) order.push_back(key);
      acc[key].first += row.logprob;
      acc[key].second += row.baseline_logprob;
      ++counts[key];
    }
  }
  CrossPatchTrace mean;
  for (const auto& key : order) {
    int n = counts[key];
    mean.rows.push_back({key.first, key.second, acc[key].first / n,
                         acc[key].second / n});
  }
  return mean;
}

}  // namespace mathlens
