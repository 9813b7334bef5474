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

#ifndef MATHLENS_RUNIO_HPP_
#define MATHLENS_RUNIO_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mathlens/model.hpp"

namespace mathlens {

inline constexpr const char* kMathlensVersion = "0.1.0";

// Every batch command records what produced its outputs. Reruns with the
// same config and seeds reproduce byte-identical data files; created_at is
// the only varying field.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;  // flattened key/value
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string created_at;
  std::string version = kMathlensVersion;

  // FNV-1a over sorted "key=value" lines; stable under key reordering.
  std::string config_hash() const;
  void write(const std::filesystem::path& path) const;
};

// "key = value" lines with '#' comments.
std::map<std::string, std::string> parse_kv_config(
    const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

// Loads weights.bin + vocab.txt from a model directory.
ModelBundle load_model_dir(const std::filesystem::path& dir);

// ---- batch commands (the CLI reaches these through the C API) ----

struct GenDataArgs {
  std::string templates_path;
  std::string kind;  // abstraction | computation | cross
  int n = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  int operand_min = 2;
  int operand_max = 50;
  // cross-pair options
  std::string mode = "paired_template";  // or random_template
  std::string clean_logic;
  std::string corrupted_logic;
  bool numeric_clean = false;
};

struct GenDataResult {
  int n_pairs = 0;
  int n_rejections = 0;
};

GenDataResult cmd_gen_data(const GenDataArgs& args);

// Emits weights.bin, vocab.txt, templates.jsonl, corpus.jsonl and
// selfcheck.json for the hand-constructed model.
void cmd_build_planted(const std::filesystem::path& out_dir);

struct LensRunArgs {
  std::filesystem::path model_dir;
  std::string prompts_path;  // JSONL {text, groups?: {label: [tokens]}}
  std::string groups_path;   // JSON {label: [token strings]}
  std::string out_csv;
  std::vector<std::string> kinds;  // default attn_out/mlp_out/resid_mid/resid_final
};

void cmd_lens(const LensRunArgs& args);

struct PatchRunArgs {
  std::filesystem::path model_dir;
  std::string pairs_path;
  std::string out_csv;
  std::vector<std::string> sites;  // kind names; default attn/mlp/resid_final
};

void cmd_patch(const PatchRunArgs& args);
void cmd_crosspatch(const PatchRunArgs& args);  // sites ignored

struct EvalRunArgs {
  std::string corpus_path;
  std::string fieldmap_path;  // optional: map a raw dataset layout
  std::string setting;        // variant name
  bool cot = false;
  std::string out_dir;
  std::string endpoint;     // HTTP client when set
  std::string builtin_dir;  // builtin greedy client when set
  std::string config_path;  // key=value overrides
  bool skip_validate = false;
  std::string ablation = "original";
};

struct EvalRunResult {
  int total = 0;
  int flagged = 0;  // validation mismatches
  double accuracy = 0.0;
  std::string pretty;
};

EvalRunResult cmd_eval(const EvalRunArgs& args);

}  // namespace mathlens

#endif  // MATHLENS_RUNIO_HPP_
