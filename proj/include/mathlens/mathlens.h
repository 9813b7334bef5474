/* Copyright 2026 The mathlens Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Public C API of the mathlens shared library: opaque handles, integer
 * status codes, thread-local error messages. Every function returns ML_OK
 * (0) on success; on failure ml_last_error() describes what went wrong on
 * the calling thread.
 */

#ifndef MATHLENS_MATHLENS_H_
#define MATHLENS_MATHLENS_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t ml_status;

enum {
  ML_OK = 0,
  ML_ERR_IO = 1,
  ML_ERR_FORMAT = 2,
  ML_ERR_SHAPE = 3,
  ML_ERR_NONFINITE = 4,
  ML_ERR_VOCAB = 5,
  ML_ERR_OOV = 6,
  ML_ERR_OVERFLOW = 7,
  ML_ERR_INVALID_ARG = 8,
  ML_ERR_PARSE = 9,
  ML_ERR_EVAL = 10,
  ML_ERR_NET = 11,
  ML_ERR_INTERNAL = 12,
};

/* Library version string, e.g. "0.1.0". */
const char* ml_version(void);

/* Message for the most recent failure on this thread ("" if none). */
const char* ml_last_error(void);

/* ---- model handles ---- */

typedef struct ml_model ml_model;

/* Loads a weight file + vocabulary file pair. */
ml_status ml_model_load(const char* weights_path, const char* vocab_path,
                        ml_model** out_model);

/* Loads weights.bin/vocab.txt from a model directory. */
ml_status ml_model_load_dir(const char* model_dir, ml_model** out_model);

void ml_model_free(ml_model* model);

ml_status ml_model_info(const ml_model* model, int32_t* n_layers,
                        int32_t* d_model, int32_t* vocab_size);

/* Whitespace tokenizer over the closed vocabulary. Fails with ML_ERR_OOV
 * (naming the word) on unknown words. out_len reports the needed length
 * even when the capacity is too small (then ML_ERR_INVALID_ARG). */
ml_status ml_tokenize(const ml_model* model, const char* text,
                      int32_t* out_ids, int32_t capacity, int32_t* out_len);

ml_status ml_detokenize(const ml_model* model, const int32_t* ids,
                        int32_t n_ids, char* out_text, int32_t capacity,
                        int32_t* out_len);

/* Greedy argmax continuation (ties resolve to the lowest token id); stops at
 * end-of-text or the budget. */
ml_status ml_greedy_decode(const ml_model* model, const int32_t* prompt_ids,
                           int32_t n_prompt, int32_t max_new_tokens,
                           int32_t* out_ids, int32_t capacity,
                           int32_t* out_len);

/* Single activation-patching effect for a clean/corrupted prompt pair at
 * site (layer, kind) at the last position. kind is one of "attn_out",
 * "mlp_out", "resid_pre", "resid_mid", "resid_final". out_degenerate is 1
 * when the normalizing logit difference is below threshold (the effect is
 * then meaningless and excluded from sweep means). */
ml_status ml_patching_effect(const ml_model* model, const char* clean_text,
                             const char* corrupted_text, const char* a_clean,
                             const char* a_corrupted, int32_t layer,
                             const char* site_kind, double* out_effect,
                             int32_t* out_degenerate);

/* ---- expression engine ---- */

/* out_equivalent: 1 iff the two expressions denote the same rational
 * function. */
ml_status ml_expr_equivalent(const char* expr1, const char* expr2,
                             int32_t* out_equivalent);

/* Exact evaluation; substitution_json maps variable letters to rationals,
 * e.g. {"x":"12","y":"50"} (may be NULL or "{}"). Writes the canonical
 * rational ("10", "2/3") into out_value. */
ml_status ml_expr_eval(const char* expr, const char* substitution_json,
                       char* out_value, int32_t capacity);

/* ---- batch commands (file in, file out; each writes a manifest) ---- */

ml_status ml_build_planted(const char* out_dir);

ml_status ml_gen_pairs(const char* templates_path, const char* kind,
                       int32_t n, uint64_t seed, int32_t operand_min,
                       int32_t operand_max, const char* mode,
                       const char* clean_logic, const char* corrupted_logic,
                       int32_t numeric_clean, const char* out_path,
                       int32_t* out_n_pairs, int32_t* out_n_rejections);

ml_status ml_run_lens(const char* model_dir, const char* prompts_path,
                      const char* groups_path, const char* kinds_csv,
                      const char* out_csv);

ml_status ml_run_patch(const char* model_dir, const char* pairs_path,
                       const char* sites_csv, const char* out_csv);

ml_status ml_run_crosspatch(const char* model_dir, const char* pairs_path,
                            const char* out_csv);

/* Runs one evaluation setting over a corpus. Exactly one of endpoint /
 * builtin_dir must be non-empty. fieldmap_path, config_path and ablation may
 * be "" (ablation defaults to "original"). out_flagged counts validation
 * mismatches (0 unless the corpus is inconsistent); accuracy lands in
 * out_accuracy. */
ml_status ml_run_eval(const char* corpus_path, const char* fieldmap_path,
                      const char* setting, int32_t cot, const char* out_dir,
                      const char* endpoint, const char* builtin_dir,
                      const char* config_path, int32_t skip_validate,
                      const char* ablation, int32_t* out_flagged,
                      double* out_accuracy);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* MATHLENS_MATHLENS_H_ */
