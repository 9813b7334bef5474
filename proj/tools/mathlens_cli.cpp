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

// Batch front end over the mathlens C API: data generation, planted-model
// construction, lens/patching sweeps and evaluation runs. Exit code 0 means
// zero errors and zero flagged validation mismatches.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mathlens/mathlens.h"

namespace {

int fail_with(ml_status status) {
  std::fprintf(stderr, "error (%d): %s\n", status, ml_last_error());
  return 1;
}

std::string join_csv(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& item : items) {
    if (!out.empty()) out.push_back(',');
    out += item;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mathlens: disentangled math-word-problem evaluation and a "
               "patching/lens toolkit over a hookable toy transformer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ml_version()));

  // ---- gen-data ----
  std::string gd_templates, gd_kind, gd_out;
  std::string gd_mode = "paired_template", gd_clean, gd_corrupted;
  int gd_n = 0, gd_min = 2, gd_max = 50;
  std::uint64_t gd_seed = 0;
  bool gd_numeric_clean = false;
  CLI::App* gen = app.add_subcommand(
      "gen-data", "Generate clean/corrupted prompt pairs from templates");
  gen->add_option("--templates", gd_templates, "Template JSONL file")
      ->required();
  gen->add_option("--kind", gd_kind, "abstraction | computation | cross")
      ->required();
  gen->add_option("--n", gd_n, "Number of pairs")->required();
  gen->add_option("--seed", gd_seed, "RNG seed")->default_val(0);
  gen->add_option("--out", gd_out, "Output pair JSONL")->required();
  gen->add_option("--mode", gd_mode, "cross: paired_template | random_template");
  gen->add_option("--clean-logic", gd_clean, "cross: clean logic tag");
  gen->add_option("--corrupted-logic", gd_corrupted,
                  "cross: corrupted logic tag");
  gen->add_flag("--numeric-clean", gd_numeric_clean,
                "cross: numeric clean prompts (cross_numeric pairs)");
  gen->add_option("--operand-min", gd_min, "Smallest operand")->default_val(2);
  gen->add_option("--operand-max", gd_max, "Largest operand")->default_val(50);

  // ---- build-planted ----
  std::string bp_out;
  CLI::App* planted = app.add_subcommand(
      "build-planted",
      "Emit the hand-constructed 2-layer model with known layer roles");
  planted->add_option("--out", bp_out, "Output directory")->required();

  // ---- lens ----
  std::string ln_model, ln_prompts, ln_groups, ln_out;
  std::vector<std::string> ln_kinds;
  CLI::App* lens = app.add_subcommand(
      "lens", "Direct logit attribution sweep at the last token position");
  lens->add_option("--model", ln_model, "Model directory")->required();
  lens->add_option("--prompts", ln_prompts, "Prompt JSONL")->required();
  lens->add_option("--groups", ln_groups, "Token group JSON")->required();
  lens->add_option("--out", ln_out, "Output CSV")->required();
  lens->add_option("--kinds", ln_kinds,
                   "Site kinds (default attn_out mlp_out resid_mid "
                   "resid_final)");

  // ---- patch ----
  std::string pt_model, pt_pairs, pt_out;
  std::vector<std::string> pt_sites;
  CLI::App* patch = app.add_subcommand(
      "patch", "Activation-patching effect sweep over a pair set");
  patch->add_option("--model", pt_model, "Model directory")->required();
  patch->add_option("--pairs", pt_pairs, "Pair JSONL")->required();
  patch->add_option("--out", pt_out, "Output CSV")->required();
  patch->add_option("--sites", pt_sites,
                    "Site kinds (default attn_out mlp_out resid_final)");

  // ---- crosspatch ----
  std::string cp_model, cp_pairs, cp_out;
  CLI::App* cross = app.add_subcommand(
      "crosspatch",
      "Per-layer answer log-prob traces for cross-prompt patching");
  cross->add_option("--model", cp_model, "Model directory")->required();
  cross->add_option("--pairs", cp_pairs, "Pair JSONL (cross kinds)")
      ->required();
  cross->add_option("--out", cp_out, "Output CSV")->required();

  // ---- eval ----
  std::string ev_corpus, ev_fieldmap, ev_setting, ev_out, ev_endpoint,
      ev_builtin, ev_config, ev_ablation = "original";
  bool ev_cot = false, ev_skip_validate = false;
  CLI::App* eval = app.add_subcommand(
      "eval", "Run one disentangled evaluation setting over a corpus");
  eval->add_option("--corpus", ev_corpus, "Corpus JSONL")->required();
  eval->add_option("--fieldmap", ev_fieldmap,
                   "Field-mapping JSON for raw datasets");
  eval->add_option("--setting", ev_setting,
                   "original | arithmetic_computation | "
                   "numerical_abstraction | symbolic_abstraction")
      ->required();
  eval->add_flag("--cot", ev_cot, "Chain-of-thought instructions");
  eval->add_option("--out", ev_out, "Output directory")->required();
  eval->add_option("--endpoint", ev_endpoint, "Chat-completion endpoint URL");
  eval->add_option("--builtin", ev_builtin,
                   "Model directory for the builtin greedy client");
  eval->add_option("--config", ev_config, "key=value config file");
  eval->add_flag("--skip-validate", ev_skip_validate,
                 "Skip the symbolic-variant validation pass");
  eval->add_option("--ablation", ev_ablation,
                   "original | reversed | random symbol ablation");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    int32_t n_pairs = 0, n_rejections = 0;
    ml_status status = ml_gen_pairs(
        gd_templates.c_str(), gd_kind.c_str(), gd_n, gd_seed, gd_min, gd_max,
        gd_mode.c_str(), gd_clean.c_str(), gd_corrupted.c_str(),
        gd_numeric_clean ? 1 : 0, gd_out.c_str(), &n_pairs, &n_rejections);
    if (status != ML_OK) return fail_with(status);
    std::printf("wrote %d pairs to %s (%d rejections logged)\n", n_pairs,
                gd_out.c_str(), n_rejections);
    if (n_pairs < gd_n) {
      std::fprintf(stderr, "error: only %d of %d requested pairs survived "
                           "the constraints\n", n_pairs, gd_n);
      return 1;
    }
    return 0;
  }

  if (planted->parsed()) {
    ml_status status = ml_build_planted(bp_out.c_str());
    if (status != ML_OK) return fail_with(status);
    std::printf("planted model written to %s (self-check passed)\n",
                bp_out.c_str());
    return 0;
  }

  if (lens->parsed()) {
    ml_status status =
        ml_run_lens(ln_model.c_str(), ln_prompts.c_str(), ln_groups.c_str(),
                    join_csv(ln_kinds).c_str(), ln_out.c_str());
    if (status != ML_OK) return fail_with(status);
    std::printf("lens curve written to %s\n", ln_out.c_str());
    return 0;
  }

  if (patch->parsed()) {
    ml_status status = ml_run_patch(pt_model.c_str(), pt_pairs.c_str(),
                                    join_csv(pt_sites).c_str(),
                                    pt_out.c_str());
    if (status != ML_OK) return fail_with(status);
    std::printf("patching report written to %s\n", pt_out.c_str());
    return 0;
  }

  if (cross->parsed()) {
    ml_status status = ml_run_crosspatch(cp_model.c_str(), cp_pairs.c_str(),
                                         cp_out.c_str());
    if (status != ML_OK) return fail_with(status);
    std::printf("cross-patch trace written to %s\n", cp_out.c_str());
    return 0;
  }

  if (eval->parsed()) {
    if (ev_endpoint.empty() == ev_builtin.empty()) {
      std::fprintf(stderr,
                   "error: pass exactly one of --endpoint or --builtin\n");
      return 1;
    }
    int32_t flagged = 0;
    double accuracy = 0.0;
    ml_status status = ml_run_eval(
        ev_corpus.c_str(), ev_fieldmap.c_str(), ev_setting.c_str(),
        ev_cot ? 1 : 0, ev_out.c_str(), ev_endpoint.c_str(),
        ev_builtin.c_str(), ev_config.c_str(), ev_skip_validate ? 1 : 0,
        ev_ablation.c_str(), &flagged, &accuracy);
    if (status != ML_OK) return fail_with(status);
    std::printf("accuracy %.4f; report in %s\n", accuracy, ev_out.c_str());
    if (flagged > 0) {
      std::fprintf(stderr,
                   "error: %d corpus records failed symbolic validation "
                   "(see validation_flags.txt)\n",
                   flagged);
      return 1;
    }
    return 0;
  }

  return 1;
}
