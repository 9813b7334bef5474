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

#ifndef MATHLENS_PLANTED_HPP_
#define MATHLENS_PLANTED_HPP_

#include <filesystem>

#include "mathlens/evalset.hpp"
#include "mathlens/mwp.hpp"
#include "nlohmann/json.hpp"

namespace mathlens {

// Hand-constructed 2-layer model with known layer roles, used as
// localization ground truth:
//   layer 0 attention finds the operator word (content-addressed) and writes
//     an operator direction to every later position; it also pre-moves a
//     faint copy of the operand values.
//   layer 1 attention moves the operand values to the last position through
//     rotary offset-selective heads, and consumes the visible operator
//     direction so the logit-lens divergence is confined to layer 0.
//   layer 1 MLP looks up (operator, operand, operand) and writes the answer
//     token's readout direction; a second gate emits <eot> right after an
//     answer token.
//
// The constructor runs a self-check (top-1 correctness over its corpus,
// block-level activation probes) and throws on any failure.
struct PlantedModel {
  ModelBundle bundle;

  // Declared circuit roles, 0-based.
  int abstraction_layer = 0;
  int operand_layer = 1;
  int compute_layer = 1;

  int operand_min = 2;
  int operand_max = 9;

  std::vector<MwpTemplate> templates;  // numeric + symbolic surfaces
  std::vector<Problem> corpus;         // 20 problems
  std::vector<EvalRecord> records;     // harness view of the corpus

  // Expected operator-group logit at attn_out of the abstraction layer,
  // measured by the constructor's own probe run.
  double operator_lens_attn0 = 0.0;

  nlohmann::json self_check;  // per-problem trace proving top-1 correctness
};

PlantedModel build_planted_model();

// Pair-generation options matched to the planted operand range.
PairGenOptions planted_pair_options(int n, std::uint64_t seed);

// Writes weights.bin, vocab.txt, templates.jsonl, corpus.jsonl and
// selfcheck.json under dir.
void write_planted_files(const std::filesystem::path& dir,
                         const PlantedModel& model);

// Operator token groups for lens sweeps on the planted vocabulary.
std::map<std::string, std::vector<std::string>> planted_operator_groups();

}  // namespace mathlens

#endif  // MATHLENS_PLANTED_HPP_
