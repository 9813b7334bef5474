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

#ifndef MATHLENS_MWP_HPP_
#define MATHLENS_MWP_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mathlens/expr.hpp"
#include "mathlens/patching.hpp"
#include "mathlens/vocab.hpp"

namespace mathlens {

// Templated 1-2 step word problems. A family groups minimally different
// counterparts: same text except for the logic-bearing phrase. Placeholders:
// "[name]" and "{x}", "{y}" ("{z}" for two-op templates). Texts are written
// with space-separated punctuation so the closed-vocabulary whitespace
// tokenizer accepts them.
struct MwpTemplate {
  std::string family;
  std::string logic;    // "+", "-", "*", "/", "++", "+-", "-+", "--"
  std::string surface;  // "numeric" | "symbolic"
  std::string text;

  int arity() const { return logic.size() == 1 ? 2 : 3; }
};

// The 30 first names templates draw from.
const std::vector<std::string>& mwp_names();

struct Problem {
  std::string prompt;
  std::string expr_text;  // e.g. "5 + 3"
  ExprPtr expr;
  Rational answer;
  std::vector<long> operands;
  std::string name;
  std::string template_id;  // family:logic:surface
};

// Fills the template deterministically; rejects constraint violations
// (division must stay integral, subtraction chains non-negative, operands
// in [0, 50], answers single-token). The seed is recorded provenance; the
// mapping itself is a pure function of (template, name, operands).
Problem instantiate(const MwpTemplate& tmpl, const std::string& name,
                    const std::vector<long>& operands, std::uint64_t seed = 0);

// Symbolic variable letters used in order for symbolic surfaces.
inline constexpr char kSymbolLetters[] = {'x', 'y', 'z'};

struct PairGenOptions {
  int n = 0;
  std::uint64_t seed = 0;
  int operand_min = 2;   // avoid 0/1 to keep x and / discriminative
  int operand_max = 50;  // single-token operands
};

enum class CrossMode { kPairedTemplate, kRandomTemplate };

struct CrossPairOptions : PairGenOptions {
  CrossMode mode = CrossMode::kPairedTemplate;
  std::string clean_logic;      // e.g. "-"
  std::string corrupted_logic;  // e.g. "+"
  bool numeric_clean = false;   // false: cross_symbolic, true: cross_numeric
};

// Text-level pair; binding to token ids happens against a concrete
// vocabulary (answers must be single tokens there).
struct GeneratedPair {
  PairKind kind = PairKind::kAbstraction;
  std::string family;
  std::string clean_logic;
  std::string corrupted_logic;
  std::string clean_text;
  std::string corrupted_text;
  long a_clean = 0;
  long a_corrupted = 0;
  std::optional<long> a_target;
  std::vector<long> clean_operands;
  std::vector<long> corrupted_operands;
};

struct PairGenResult {
  std::vector<GeneratedPair> pairs;
  std::vector<std::string> rejections;  // human-readable reasons
};

// Same numbers, different logic (family counterparts).
PairGenResult make_abstraction_pairs(const std::vector<MwpTemplate>& templates,
                                     const PairGenOptions& options);

// Same logic, different numbers (and different answers).
PairGenResult make_computation_pairs(const std::vector<MwpTemplate>& templates,
                                     const PairGenOptions& options);

// Symbolic (or differently-numbered numeric) clean prompts against numeric
// corrupted prompts; a_target = clean logic applied to corrupted operands.
PairGenResult make_cross_pairs(const std::vector<MwpTemplate>& templates,
                               const CrossPairOptions& options);

// Tokenizes both prompts and resolves answer tokens; pairs whose answers are
// not single vocabulary tokens are rejected (never truncated).
std::vector<PromptPair> bind_pairs(const Vocabulary& vocab,
                                   const std::vector<GeneratedPair>& pairs);

// JSONL template file: one {family, logic, surface, text} per line.
std::vector<MwpTemplate> load_templates(const std::filesystem::path& path);
void save_templates(const std::filesystem::path& path,
                    const std::vector<MwpTemplate>& templates);

// JSONL pair files round trip the GeneratedPair fields.
void save_pairs(const std::filesystem::path& path,
                const std::vector<GeneratedPair>& pairs);
std::vector<GeneratedPair> load_pairs(const std::filesystem::path& path);

// Problem corpus JSONL: {prompt, expr, answer, operands, name, template_id}.
void save_problems(const std::filesystem::path& path,
                   const std::vector<Problem>& problems);
std::vector<Problem> load_problems(const std::filesystem::path& path);

}  // namespace mathlens

#endif  // MATHLENS_MWP_HPP_
