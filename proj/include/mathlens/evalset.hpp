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

#ifndef MATHLENS_EVALSET_HPP_
#define MATHLENS_EVALSET_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mathlens/answers.hpp"
#include "mathlens/expr.hpp"

namespace mathlens {

// The four disentangled settings: the original word problem (abstraction and
// computation together), direct evaluation of the expression, and the two
// abstraction-only variants.
enum class EvalVariant {
  kOriginal = 0,
  kArithmeticComputation = 1,
  kNumericalAbstraction = 2,
  kSymbolicAbstraction = 3,
};

const char* variant_name(EvalVariant variant);
EvalVariant variant_from_name(const std::string& name);

struct EvalSetting {
  EvalVariant variant = EvalVariant::kOriginal;
  bool cot = false;
};

// Instruction templates keyed by (variant, cot). The shipped defaults can be
// overridden from a JSON data file so prompts stay data, not code.
class InstructionSet {
 public:
  static const InstructionSet& defaults();
  static InstructionSet from_file(const std::filesystem::path& path);

  const std::string& text(EvalVariant variant, bool cot) const;
  void set(EvalVariant variant, bool cot, std::string text);

 private:
  std::array<std::string, 8> texts_;
};

// One problem with both surface forms and the substitution binding them.
struct EvalRecord {
  std::string id;
  std::string question;           // numeric surface
  std::string question_symbolic;  // symbolic surface ("" when absent)
  std::string expr_numeric;       // e.g. "12 * (50/60)"
  std::string expr_symbolic;      // e.g. "x * (y/60)"
  Substitution substitution;
  Rational answer;
  std::vector<std::string> tags;
};

enum class Verdict { kCorrect, kIncorrect, kExtractionFailure, kParseFailure };
const char* verdict_name(Verdict verdict);

// instruction ++ newline ++ question, with the ArithmeticComputation
// question rendered as "What is the value of <expr>?".
std::string build_prompt(const EvalSetting& setting, const EvalRecord& record,
                         const InstructionSet& instructions =
                             InstructionSet::defaults());

// Numeric settings extract and exactly compare the integer-form answer;
// abstraction settings parse the expression (best effort) and decide by
// rational-function equivalence.
Verdict score(const EvalSetting& setting, const std::string& generation,
              const EvalRecord& record);

// Generate-then-validate checker: substitutes into the symbolic expression
// and compares the exact value to the gold answer. Returns the failure
// reason, or nullopt when the triplet is consistent.
std::optional<std::string> validate_symbolic_variant(const EvalRecord& record);

enum class AblationMode { kOriginal, kReversed, kRandom };
AblationMode ablation_from_name(const std::string& name);

// The letter map the ablation applies to this record's variables. Reversed
// reverses the canonical symbol order x,y,z,u,v,w,p,q,r,s,t restricted to
// the used variables; random applies a fixed published letter map.
std::map<char, char> ablation_mapping(const EvalRecord& record,
                                      AblationMode mode);

// Consistent variable renaming of the symbolic surface and expression (and
// substitution keys). Collisions are an error.
EvalRecord apply_symbol_ablation(const EvalRecord& record, AblationMode mode);

}  // namespace mathlens

#endif  // MATHLENS_EVALSET_HPP_
