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

#include "mathlens/mathlens.h"

#include <cstring>
#include <sstream>

#include "mathlens/equivalence.hpp"
#include "mathlens/mwp.hpp"
#include "mathlens/patching.hpp"
#include "mathlens/runio.hpp"
#include "nlohmann/json.hpp"

struct ml_model {
  mathlens::ModelBundle bundle;
};

namespace {

thread_local std::string g_last_error;

ml_status code_of(const mathlens::Error& e) {
  return static_cast<ml_status>(e.code());
}

template <typename Fn>
ml_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return ML_OK;
  } catch (const mathlens::Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ML_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return ML_ERR_INTERNAL;
  }
}

ml_status require(bool ok, const char* what) {
  if (ok) return ML_OK;
  g_last_error = what;
  return ML_ERR_INVALID_ARG;
}

ml_status copy_out(const std::string& text, char* out, int32_t capacity,
                   int32_t* out_len) {
  if (out_len) *out_len = static_cast<int32_t>(text.size());
  if (!out || capacity <= static_cast<int32_t>(text.size())) {
    g_last_error = "output buffer too small";
    return ML_ERR_INVALID_ARG;
  }
  std::memcpy(out, text.data(), text.size());
  out[text.size()] = '\0';
  return ML_OK;
}

std::vector<std::string> split_csv(const char* csv) {
  std::vector<std::string> out;
  if (!csv || !*csv) return out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string or_empty(const char* s) { return s ? s : ""; }

}  // namespace

extern "C" {

const char* ml_version(void) { return mathlens::kMathlensVersion; }

const char* ml_last_error(void) { return g_last_error.c_str(); }

ml_status ml_model_load(const char* weights_path, const char* vocab_path,
                        ml_model** out_model) {
  if (ml_status s = require(weights_path && vocab_path && out_model,
                            "null argument"))
    return s;
  return guarded([&] {
    auto* handle = new ml_model{mathlens::load_model(weights_path, vocab_path)};
    *out_model = handle;
  });
}

ml_status ml_model_load_dir(const char* model_dir, ml_model** out_model) {
  if (ml_status s = require(model_dir && out_model, "null argument")) return s;
  return guarded([&] {
    auto* handle = new ml_model{mathlens::load_model_dir(model_dir)};
    *out_model = handle;
  });
}

void ml_model_free(ml_model* model) { delete model; }

ml_status ml_model_info(const ml_model* model, int32_t* n_layers,
                        int32_t* d_model, int32_t* vocab_size) {
  if (ml_status s = require(model != nullptr, "null model")) return s;
  if (n_layers) *n_layers = model->bundle.config.n_layers;
  if (d_model) *d_model = model->bundle.config.d_model;
  if (vocab_size) *vocab_size = model->bundle.config.vocab_size;
  g_last_error.clear();
  return ML_OK;
}

ml_status ml_tokenize(const ml_model* model, const char* text,
                      int32_t* out_ids, int32_t capacity, int32_t* out_len) {
  if (ml_status s = require(model && text, "null argument")) return s;
  return guarded([&] {
    std::vector<mathlens::TokenId> ids = model->bundle.vocab.tokenize(text);
    if (out_len) *out_len = static_cast<int32_t>(ids.size());
    if (!out_ids || capacity < static_cast<int32_t>(ids.size()))
      mathlens::fail(mathlens::ErrCode::kInvalidArg,
                     "output buffer too small");
    std::memcpy(out_ids, ids.data(), ids.size() * sizeof(int32_t));
  });
}

ml_status ml_detokenize(const ml_model* model, const int32_t* ids,
                        int32_t n_ids, char* out_text, int32_t capacity,
                        int32_t* out_len) {
  if (ml_status s = require(model && (ids || n_ids == 0), "null argument"))
    return s;
  std::string text;
  ml_status status = guarded([&] {
    text = model->bundle.vocab.detokenize(
        std::span<const mathlens::TokenId>(ids, static_cast<size_t>(n_ids)));
  });
  if (status != ML_OK) return status;
  return copy_out(text, out_text, capacity, out_len);
}

ml_status ml_greedy_decode(const ml_model* model, const int32_t* prompt_ids,
                           int32_t n_prompt, int32_t max_new_tokens,
                           int32_t* out_ids, int32_t capacity,
                           int32_t* out_len) {
  if (ml_status s = require(model && prompt_ids, "null argument")) return s;
  return guarded([&] {
    std::vector<mathlens::TokenId> continuation = mathlens::greedy_decode(
        model->bundle,
        std::span<const mathlens::TokenId>(prompt_ids,
                                           static_cast<size_t>(n_prompt)),
        max_new_tokens);
    if (out_len) *out_len = static_cast<int32_t>(continuation.size());
    if (!out_ids || capacity < static_cast<int32_t>(continuation.size()))
      mathlens::fail(mathlens::ErrCode::kInvalidArg,
                     "output buffer too small");
    std::memcpy(out_ids, continuation.data(),
                continuation.size() * sizeof(int32_t));
  });
}

ml_status ml_patching_effect(const ml_model* model, const char* clean_text,
                             const char* corrupted_text, const char* a_clean,
                             const char* a_corrupted, int32_t layer,
                             const char* site_kind, double* out_effect,
                             int32_t* out_degenerate) {
  if (ml_status s = require(model && clean_text && corrupted_text && a_clean &&
                                a_corrupted && site_kind && out_effect,
                            "null argument"))
    return s;
  return guarded([&] {
    const mathlens::Vocabulary& vocab = model->bundle.vocab;
    mathlens::PromptPair pair;
    pair.clean_text = clean_text;
    pair.corrupted_text = corrupted_text;
    pair.clean_ids = vocab.tokenize(clean_text);
    pair.corrupted_ids = vocab.tokenize(corrupted_text);
    pair.a_clean = vocab.id_of(a_clean);
    pair.a_corrupted = vocab.id_of(a_corrupted);
    mathlens::SiteId site{layer, mathlens::site_kind_from_name(site_kind),
                          mathlens::SiteId::kLast};
    mathlens::EffectResult effect =
        mathlens::patching_effect(model->bundle, pair, site);
    *out_effect = effect.value;
    if (out_degenerate) *out_degenerate = effect.degenerate ? 1 : 0;
  });
}

ml_status ml_expr_equivalent(const char* expr1, const char* expr2,
                             int32_t* out_equivalent) {
  if (ml_status s = require(expr1 && expr2 && out_equivalent, "null argument"))
    return s;
  return guarded([&] {
    *out_equivalent = mathlens::equivalent(mathlens::parse_expr(expr1),
                                           mathlens::parse_expr(expr2))
                          ? 1
                          : 0;
  });
}

ml_status ml_expr_eval(const char* expr, const char* substitution_json,
                       char* out_value, int32_t capacity) {
  if (ml_status s = require(expr && out_value, "null argument")) return s;
  std::string value;
  ml_status status = guarded([&] {
    mathlens::Substitution subst;
    if (substitution_json && *substitution_json) {
      nlohmann::json j =
          nlohmann::json::parse(substitution_json, nullptr, false);
      if (j.is_discarded())
        mathlens::fail(mathlens::ErrCode::kFormat,
                       "invalid substitution JSON");
      for (auto& [key, v] : j.items()) {
        if (key.size() != 1)
          mathlens::fail(mathlens::ErrCode::kInvalidArg,
                         "substitution key must be a single letter");
        subst[key[0]] = v.is_string()
                            ? mathlens::Rational::parse(v.get<std::string>())
                            : mathlens::Rational(v.get<long>());
      }
    }
    value = mathlens::eval_exact(mathlens::parse_expr(expr), subst).str();
  });
  if (status != ML_OK) return status;
  return copy_out(value, out_value, capacity, nullptr);
}

ml_status ml_build_planted(const char* out_dir) {
  if (ml_status s = require(out_dir != nullptr, "null argument")) return s;
  return guarded([&] { mathlens::cmd_build_planted(out_dir); });
}

ml_status ml_gen_pairs(const char* templates_path, const char* kind,
                       int32_t n, uint64_t seed, int32_t operand_min,
                       int32_t operand_max, const char* mode,
                       const char* clean_logic, const char* corrupted_logic,
                       int32_t numeric_clean, const char* out_path,
                       int32_t* out_n_pairs, int32_t* out_n_rejections) {
  if (ml_status s =
          require(templates_path && kind && out_path, "null argument"))
    return s;
  return guarded([&] {
    mathlens::GenDataArgs args;
    args.templates_path = templates_path;
    args.kind = kind;
    args.n = n;
    args.seed = seed;
    args.operand_min = operand_min;
    args.operand_max = operand_max;
    if (mode && *mode) args.mode = mode;
    args.clean_logic = or_empty(clean_logic);
    args.corrupted_logic = or_empty(corrupted_logic);
    args.numeric_clean = numeric_clean != 0;
    args.out_path = out_path;
    mathlens::GenDataResult result = mathlens::cmd_gen_data(args);
    if (out_n_pairs) *out_n_pairs = result.n_pairs;
    if (out_n_rejections) *out_n_rejections = result.n_rejections;
  });
}

ml_status ml_run_lens(const char* model_dir, const char* prompts_path,
                      const char* groups_path, const char* kinds_csv,
                      const char* out_csv) {
  if (ml_status s = require(model_dir && prompts_path && groups_path && out_csv,
                            "null argument"))
    return s;
  return guarded([&] {
    mathlens::LensRunArgs args;
    args.model_dir = model_dir;
    args.prompts_path = prompts_path;
    args.groups_path = groups_path;
    args.kinds = split_csv(kinds_csv);
    args.out_csv = out_csv;
    mathlens::cmd_lens(args);
  });
}

ml_status ml_run_patch(const char* model_dir, const char* pairs_path,
                       const char* sites_csv, const char* out_csv) {
  if (ml_status s =
          require(model_dir && pairs_path && out_csv, "null argument"))
    return s;
  return guarded([&] {
    mathlens::PatchRunArgs args;
    args.model_dir = model_dir;
    args.pairs_path = pairs_path;
    args.sites = split_csv(sites_csv);
    args.out_csv = out_csv;
    mathlens::cmd_patch(args);
  });
}

ml_status ml_run_crosspatch(const char* model_dir, const char* pairs_path,
                            const char* out_csv) {
  if (ml_status s =
          require(model_dir && pairs_path && out_csv, "null argument"))
    return s;
  return guarded([&] {
    mathlens::PatchRunArgs args;
    args.model_dir = model_dir;
    args.pairs_path = pairs_path;
    args.out_csv = out_csv;
    mathlens::cmd_crosspatch(args);
  });
}

ml_status ml_run_eval(const char* corpus_path, const char* fieldmap_path,
                      const char* setting, int32_t cot, const char* out_dir,
                      const char* endpoint, const char* builtin_dir,
                      const char* config_path, int32_t skip_validate,
                      const char* ablation, int32_t* out_flagged,
                      double* out_accuracy) {
  if (ml_status s =
          require(corpus_path && setting && out_dir, "null argument"))
    return s;
  return guarded([&] {
    mathlens::EvalRunArgs args;
    args.corpus_path = corpus_path;
    args.fieldmap_path = or_empty(fieldmap_path);
    args.setting = setting;
    args.cot = cot != 0;
    args.out_dir = out_dir;
    args.endpoint = or_empty(endpoint);
    args.builtin_dir = or_empty(builtin_dir);
    args.config_path = or_empty(config_path);
    args.skip_validate = skip_validate != 0;
    if (ablation && *ablation) args.ablation = ablation;
    mathlens::EvalRunResult result = mathlens::cmd_eval(args);
    if (out_flagged) *out_flagged = result.flagged;
    if (out_accuracy) *out_accuracy = result.accuracy;
  });
}

}  // extern "C"
