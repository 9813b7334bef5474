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

#include "mathlens/hooks.hpp"

#include <algorithm>
#include <cmath>

namespace mathlens {

const char* site_kind_name(SiteKind kind) {
  switch (kind) {
    case SiteKind::kResidPre: return "resid_pre";
    case SiteKind::kAttnOut: return "attn_out";
    case SiteKind::kResidMid: return "resid_mid";
    case SiteKind::kMlpOut: return "mlp_out";
    case SiteKind::kResidFinal: return "resid_final";
  }
  return "?";
}

SiteKind site_kind_from_name(const std::string& name) {
  if (name == "resid_pre") return SiteKind::kResidPre;
  if (name == "attn_out") return SiteKind::kAttnOut;
  if (name == "resid_mid") return SiteKind::kResidMid;
  if (name == "mlp_out") return SiteKind::kMlpOut;
  if (name == "resid_final") return SiteKind::kResidFinal;
  fail(ErrCode::kInvalidArg, "unknown site kind '" + name + "'");
}

SiteId ActivationCache::resolve(const SiteId& site) const {
  SiteId r = site;
  if (r.position == SiteId::kLast) r.position = seq_len() - 1;
  // resid_pre of layer L > 0 is the previous layer's resid_final.
  if (r.kind == SiteKind::kResidPre && r.layer > 0) {
    r.layer -= 1;
    r.kind = SiteKind::kResidFinal;
  }
  return r;
}

bool ActivationCache::contains(const SiteId& site) const {
  SiteId r = resolve(site);
  return acts_.count({r.layer, static_cast<int>(r.kind), r.position}) > 0;
}

const std::vector<float>& ActivationCache::at(const SiteId& site) const {
  SiteId r = resolve(site);
  auto it = acts_.find({r.layer, static_cast<int>(r.kind), r.position});
  if (it == acts_.end())
    fail(ErrCode::kInvalidArg,
         std::string("activation not cached: layer ") +
             std::to_string(r.layer) + " " + site_kind_name(r.kind) +
             " position " + std::to_string(r.position));
  return it->second;
}

std::vector<float> ActivationCache::last_logits() const {
  const float* row = logits.row(logits.rows - 1);
  return std::vector<float>(row, row + logits.cols);
}

void ActivationCache::put(int layer, SiteKind kind, int position,
                          const float* v, int n) {
  acts_[{layer, static_cast<int>(kind), position}].assign(v, v + n);
}

namespace detail {

// Single forward engine behind forward_logits / run_with_cache /
// run_with_patch. `capture` holds resolved absolute positions; `patch`, when
// present, has a resolved position as well.
Matrix forward_engine(const ModelBundle& bundle, std::span<const TokenId> ids,
                      const std::vector<int>* capture, ActivationCache* cache,
                      const PatchSpec* patch) {
  const ModelConfig& cfg = bundle.config;
  const ModelWeights& w = bundle.weights;
  const int seq = static_cast<int>(ids.size());
  const int d = cfg.d_model;
  const int dh = cfg.d_head;
  const int nh = cfg.n_heads;

  if (seq == 0) fail(ErrCode::kInvalidArg, "empty token sequence");
  if (seq > cfg.max_seq_len)
    fail(ErrCode::kOverflow, "sequence length " + std::to_string(seq) +
                                 " exceeds max_seq_len " +
                                 std::to_string(cfg.max_seq_len));
  for (TokenId id : ids) {
    if (id < 0 || id >= cfg.vocab_size)
      fail(ErrCode::kInvalidArg, "token id out of range: " + std::to_string(id));
  }
  if (patch) {
    if (patch->site.layer < 0 || patch->site.layer >= cfg.n_layers)
      fail(ErrCode::kInvalidArg, "patch layer out of range");
    if (patch->site.position < 0 || patch->site.position >= seq)
      fail(ErrCode::kInvalidArg, "patch position out of range");
    if (static_cast<int>(patch->replacement.size()) != d)
      fail(ErrCode::kInvalidArg, "patch dimension mismatch");
    for (float x : patch->replacement) {
      if (!std::isfinite(x))
        fail(ErrCode::kNonFinite, "non-finite patch replacement");
    }
  }

  auto idx = [d](int p) { return static_cast<std::size_t>(p) * d; };
  std::vector<float> resid(idx(seq));
  std::vector<float> xnorm(idx(seq));
  std::vector<float> q(idx(seq)), k(idx(seq)), v(idx(seq));
  std::vector<float> stage(idx(seq));  // attn_out, then mlp_out
  std::vector<float> scores(static_cast<std::size_t>(seq));
  std::vector<float> hidden(static_cast<std::size_t>(cfg.d_mlp));

  for (int p = 0; p < seq; ++p) {
    const float* row = w.embed.row(ids[p]);
    std::copy(row, row + d, resid.begin() + idx(p));
  }

  auto apply_patch = [&](SiteKind kind, int layer, std::vector<float>* rows) {
    if (!patch || patch->site.kind != kind || patch->site.layer != layer)
      return;
    std::copy(patch->replacement.begin(), patch->replacement.end(),
              rows->begin() + idx(patch->site.position));
  };
  auto capture_rows = [&](SiteKind kind, int layer,
                          const std::vector<float>& rows) {
    if (!cache || !capture) return;
    for (int p : *capture) cache->put(layer, kind, p, rows.data() + idx(p), d);
  };

  // Rotary angle table: interleaved pairs, theta_j = 10000^(-2j/d_head).
  std::vector<float> theta(static_cast<std::size_t>(dh / 2));
  for (int j = 0; j < dh / 2; ++j)
    theta[static_cast<std::size_t>(j)] =
        static_cast<float>(std::pow(10000.0, -2.0 * j / dh));
  auto rotate = [&](float* vec, int p) {
    for (int h = 0; h < nh; ++h) {
      float* base = vec + h * dh;
      for (int j = 0; j < dh / 2; ++j) {
        float angle = static_cast<float>(p) * theta[static_cast<std::size_t>(j)];
        float c = std::cos(angle), s = std::sin(angle);
        float x0 = base[2 * j], x1 = base[2 * j + 1];
        base[2 * j] = x0 * c - x1 * s;
        base[2 * j + 1] = x0 * s + x1 * c;
      }
    }
  };

  const float inv_sqrt_dh = 1.0f / std::sqrt(static_cast<float>(dh));

  for (int layer = 0; layer < cfg.n_layers; ++layer) {
    const LayerWeights& lw = w.layers[static_cast<std::size_t>(layer)];
    apply_patch(SiteKind::kResidPre, layer, &resid);
    if (layer == 0) capture_rows(SiteKind::kResidPre, 0, resid);

    for (int p = 0; p < seq; ++p)
      rms_norm(resid.data() + idx(p), lw.norm1.data(), d, cfg.norm_eps,
               xnorm.data() + idx(p));
    for (int p = 0; p < seq; ++p) {
      matvec(lw.wq, xnorm.data() + idx(p), q.data() + idx(p));
      matvec(lw.wk, xnorm.data() + idx(p), k.data() + idx(p));
      matvec(lw.wv, xnorm.data() + idx(p), v.data() + idx(p));
      rotate(q.data() + idx(p), p);
      rotate(k.data() + idx(p), p);
    }
    // Causal attention, head by head; xnorm is reused as the pre-wo buffer.
    for (int p = 0; p < seq; ++p) {
      float* merged = xnorm.data() + idx(p);
      for (int h = 0; h < nh; ++h) {
        const float* qh = q.data() + idx(p) + h * dh;
        float max_score = -1e30f;
        for (int n = 0; n <= p; ++n) {
          float s = dot(qh, k.data() + idx(n) + h * dh, dh) * inv_sqrt_dh;
          scores[static_cast<std::size_t>(n)] = s;
          max_score = std::max(max_score, s);
        }
        float z = 0.0f;
        for (int n = 0; n <= p; ++n) {
          float e = std::exp(scores[static_cast<std::size_t>(n)] - max_score);
          scores[static_cast<std::size_t>(n)] = e;
          z += e;
        }
        float* out = merged + h * dh;
        std::fill(out, out + dh, 0.0f);
        for (int n = 0; n <= p; ++n) {
          float wgt = scores[static_cast<std::size_t>(n)] / z;
          const float* vh = v.data() + idx(n) + h * dh;
          for (int i = 0; i < dh; ++i) out[i] += wgt * vh[i];
        }
      }
    }
    for (int p = 0; p < seq; ++p)
      matvec(lw.wo, xnorm.data() + idx(p), stage.data() + idx(p));

    apply_patch(SiteKind::kAttnOut, layer, &stage);
    capture_rows(SiteKind::kAttnOut, layer, stage);
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] += stage[i];
    apply_patch(SiteKind::kResidMid, layer, &resid);
    capture_rows(SiteKind::kResidMid, layer, resid);

    for (int p = 0; p < seq; ++p) {
      const float* x = resid.data() + idx(p);
      float* xn = xnorm.data() + idx(p);
      rms_norm(x, lw.norm2.data(), d, cfg.norm_eps, xn);
      float* gate = hidden.data();
      for (int i = 0; i < cfg.d_mlp; ++i) {
        float g = dot(lw.w_gate.row(i), xn, d);
        float a = dot(lw.w_in.row(i), xn, d);
        gate[i] = silu(g) * a;
      }
      matvec(lw.w_out, gate, stage.data() + idx(p));
    }

    apply_patch(SiteKind::kMlpOut, layer, &stage);
    capture_rows(SiteKind::kMlpOut, layer, stage);
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] += stage[i];
    apply_patch(SiteKind::kResidFinal, layer, &resid);
    capture_rows(SiteKind::kResidFinal, layer, resid);
  }

  Matrix logits(seq, cfg.vocab_size);
  std::vector<float> final_row(static_cast<std::size_t>(d));
  for (int p = 0; p < seq; ++p) {
    rms_norm(resid.data() + idx(p), w.final_norm.data(), d, cfg.norm_eps,
             final_row.data());
    matvec(w.unembed, final_row.data(), logits.row(p));
  }
  if (cache) {
    cache->ids.assign(ids.begin(), ids.end());
    cache->logits = logits;
  }
  return logits;
}

std::vector<int> resolve_positions(const std::vector<int>& positions,
                                   int seq) {
  std::vector<int> out;
  for (int p : positions) {
    int r = (p == SiteId::kLast) ? seq - 1 : p;
    if (r < 0 || r >= seq)
      fail(ErrCode::kInvalidArg,
           "capture position out of range: " + std::to_string(p));
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  if (out.empty()) fail(ErrCode::kInvalidArg, "no capture positions");
  return out;
}

}  // namespace detail

ActivationCache run_with_cache(const ModelBundle& bundle,
                               std::span<const TokenId> ids,
                               const std::vector<int>& positions) {
  ActivationCache cache;
  std::vector<int> resolved =
      detail::resolve_positions(positions, static_cast<int>(ids.size()));
  detail::forward_engine(bundle, ids, &resolved, &cache, nullptr);
  return cache;
}

ActivationCache run_with_patch(const ModelBundle& bundle,
                               std::span<const TokenId> ids,
                               const PatchSpec& patch) {
  PatchSpec resolved = patch;
  if (resolved.site.position == SiteId::kLast)
    resolved.site.position = static_cast<int>(ids.size()) - 1;
  // resid_pre of layer L is the same stream as resid_final of layer L-1;
  // patching either name patches the layer input.
  ActivationCache cache;
  std::vector<int> capture{resolved.site.position};
  detail::forward_engine(bundle, ids, &capture, &cache, &resolved);
  return cache;
}

}  // namespace mathlens
