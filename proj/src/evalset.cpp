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

#include "mathlens/evalset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "mathlens/equivalence.hpp"
#include "nlohmann/json.hpp"

namespace mathlens {

const char* variant_name(EvalVariant variant) {
  switch (variant) {
    case EvalVariant::kOriginal: return "original";
    case EvalVariant::kArithmeticComputation: return "arithmetic_computation";
    case EvalVariant::kNumericalAbstraction: return "numerical_abstraction";
    case EvalVariant::kSymbolicAbstraction: return "symbolic_abstraction";
  }
  return "?";
}

EvalVariant variant_from_name(const std::string& name) {
  if (name == "original") return EvalVariant::kOriginal;
  if (name == "arithmetic_computation")
    return EvalVariant::kArithmeticComputation;
  if (name == "numerical_abstraction")
    return EvalVariant::kNumericalAbstraction;
  if (name == "symbolic_abstraction") return EvalVariant::kSymbolicAbstraction;
  fail(ErrCode::kInvalidArg, "unknown setting '" + name + "'");
}

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::kCorrect: return "correct";
    case Verdict::kIncorrect: return "incorrect";
    case Verdict::kExtractionFailure: return "extraction_failure";
    case Verdict::kParseFailure: return "parse_failure";
  }
  return "?";
}

namespace {

std::size_t instruction_index(EvalVariant variant, bool cot) {
  return static_cast<std::size_t>(variant) * 2 + (cot ? 1 : 0);
}

InstructionSet builtin_defaults() {
  InstructionSet set;
  set.set(EvalVariant::kOriginal, false,
          "Please answer the question directly WITHOUT showing the reasoning "
          "process, you MUST write the answer as an integer after '####', "
          "without including the equation or units.");
  set.set(EvalVariant::kOriginal, true,
          "Let's think step by step, you MUST write the answer as an integer "
          "after '####' without including the units. Write the answer at the "
          "end.");
  set.set(EvalVariant::kArithmeticComputation, false,
          "Please answer the question directly WITHOUT showing the reasoning "
          "process, you MUST write the answer as an integer after '####'");
  set.set(EvalVariant::kArithmeticComputation, true,
          "Let's think step by step, you MUST write the answer as an integer "
          "after '####' . Write the answer at the end.");
  set.set(EvalVariant::kNumericalAbstraction, false,
          "Please answer the question directly without showing the reasoning "
          "process, you MUST write the expression with appropriate round "
          "brackets after '####', without including the units, and you DO "
          "NOT need to simplify the expression.");
  set.set(EvalVariant::kNumericalAbstraction, true,
          "Let's think step by step, at the end, you MUST write the "
          "expression with appropriate parenthesis after '####', without "
          "including the units, but you DO NOT need to simplify the "
          "expression.");
  set.set(EvalVariant::kSymbolicAbstraction, false,
          "Please answer the question directly WITHOUT showing the reasoning "
          "process, you MUST write the expression with appropriate round "
          "brackets after '####' without including the units, and you DO NOT "
          "need to simplify the expression.");
  set.set(EvalVariant::kSymbolicAbstraction, true,
          "Let's think step by step, at the end, you MUST write the "
          "expression with appropriate round brackets after '####' without "
          "including the units, but you DO NOT need to simplify the "
          "expression.");
  return set;
}

}  // namespace

const InstructionSet& InstructionSet::defaults() {
  static const InstructionSet kDefaults = builtin_defaults();
  return kDefaults;
}

InstructionSet InstructionSet::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrCode::kIo, "cannot open instruction file " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    fail(ErrCode::kFormat, "invalid JSON in " + path.string());
  InstructionSet set = defaults();
  for (auto& [key, value] : j.items()) {
    // Keys look like "original.no_cot" / "symbolic_abstraction.cot".
    auto dotPos = key.find('.');
    if (dotPos == std::string::npos)
      fail(ErrCode::kFormat, "bad instruction key '" + key + "'");
    EvalVariant variant = variant_from_name(key.substr(0, dotPos));
    std::string mode = key.substr(dotPos + 1);
    if (mode != "cot" && mode != "no_cot")
      fail(ErrCode::kFormat, "bad instruction key '" + key + "'");
    set.set(variant, mode == "cot", value.get<std::string>());
  }
  return set;
}

const std::string& InstructionSet::text(EvalVariant variant, bool cot) const {
  return texts_[instruction_index(variant, cot)];
}

void InstructionSet::set(EvalVariant variant, bool cot, std::string text) {
  texts_[instruction_index(variant, cot)] = std::move(text);
}

std::string build_prompt(const EvalSetting& setting, const EvalRecord& record,
                         const InstructionSet& instructions) {
  std::string question;
  switch (setting.variant) {
    case EvalVariant::kOriginal:
    case EvalVariant::kNumericalAbstraction:
      question = record.question;
      break;
    case EvalVariant::kArithmeticComputation:
      question = "What is the value of " + record.expr_numeric + " ?";
      break;
    case EvalVariant::kSymbolicAbstraction:
      if (record.question_symbolic.empty())
        fail(ErrCode::kInvalidArg,
             "record " + record.id + " has no symbolic surface");
      question = record.question_symbolic;
      break;
  }
  return instructions.text(setting.variant, setting.cot) + "\n" + question;
}

Verdict score(const EvalSetting& setting, const std::string& generation,
              const EvalRecord& record) {
  bool numeric = setting.variant == EvalVariant::kOriginal ||
                 setting.variant == EvalVariant::kArithmeticComputation;
  auto extracted = extract_answer(
      generation, numeric ? AnswerKind::kInteger : AnswerKind::kExpression);
  if (!extracted) return Verdict::kExtractionFailure;

  if (numeric) {
    try {
      return parse_numeric(*extracted) == record.answer ? Verdict::kCorrect
                                                        : Verdict::kIncorrect;
    } catch (const Error&) {
      return Verdict::kParseFailure;
    }
  }

  auto parsed = strip_to_expression(*extracted);
  if (!parsed) return Verdict::kParseFailure;
  const std::string& gold_text =
      setting.variant == EvalVariant::kNumericalAbstraction
          ? record.expr_numeric
          : record.expr_symbolic;
  ExprPtr gold;
  try {
    gold = parse_expr(gold_text);
  } catch (const Error&) {
    return Verdict::kParseFailure;  // defective gold flagged as failure
  }
  return equivalent(*parsed, gold) ? Verdict::kCorrect : Verdict::kIncorrect;
}

std::optional<std::string> validate_symbolic_variant(const EvalRecord& record) {
  try {
    ExprPtr sym = parse_expr(record.expr_symbolic);
    Rational substituted = eval_exact(sym, record.substitution);
    if (substituted != record.answer)
      return "substituted symbolic expression gives " + substituted.str() +
             ", gold answer is " + record.answer.str();
    if (!record.expr_numeric.empty()) {
      ExprPtr num = parse_expr(record.expr_numeric);
      Rational value = eval_exact(num, {});
      if (value != record.answer)
        return "numeric expression gives " + value.str() +
               ", gold answer is " + record.answer.str();
    }
  } catch (const Error& e) {
    return std::string("validation error: ") + e.what();
  }
  return std::nullopt;
}

AblationMode ablation_from_name(const std::string& name) {
  if (name == "original") return AblationMode::kOriginal;
  if (name == "reversed") return AblationMode::kReversed;
  if (name == "random") return AblationMode::kRandom;
  fail(ErrCode::kInvalidArg, "unknown ablation mode '" + name + "'");
}

namespace {

// Canonical symbol order for the reversed ablation.
const std::string kSymbolOrder = "xyzuvwpqrst";

// Published random letter map for the random ablation.
const std::map<char, char>& random_symbol_map() {
  static const std::map<char, char> kMap = {
      {'a', 'h'}, {'d', 'i'}, {'m', 's'}, {'n', 'r'}, {'p', 'e'}, {'q', 'l'},
      {'r', 'c'}, {'s', 'v'}, {'t', 'j'}, {'u', 'm'}, {'v', 't'}, {'w', 'o'},
      {'x', 'u'}, {'y', 'p'}, {'z', 'b'}, {'Z', 'f'}};
  return kMap;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)); }

// Replaces isolated single-letter occurrences simultaneously.
std::string rename_text(const std::string& text,
                        const std::map<char, char>& mapping) {
  std::string out = text;
  for (std::size_t i = 0; i < out.size(); ++i) {
    char c = out[i];
    auto it = mapping.find(c);
    if (it == mapping.end()) continue;
    bool left_ok = i == 0 || !is_word_char(out[i - 1]);
    bool right_ok = i + 1 >= out.size() || !is_word_char(out[i + 1]);
    if (left_ok && right_ok) out[i] = it->second;
  }
  return out;
}

}  // namespace

std::map<char, char> ablation_mapping(const EvalRecord& record,
                                      AblationMode mode) {
  std::map<char, char> mapping;
  if (mode == AblationMode::kOriginal) return mapping;
  std::set<char> used = expr_variables(parse_expr(record.expr_symbolic));
  if (mode == AblationMode::kReversed) {
    // Order used variables by the canonical list (others after, in order).
    std::vector<char> ordered;
    for (char c : kSymbolOrder)
      if (used.count(c)) ordered.push_back(c);
    for (char c : used)
      if (kSymbolOrder.find(c) == std::string::npos) ordered.push_back(c);
    for (std::size_t i = 0; i < ordered.size(); ++i)
      mapping[ordered[i]] = ordered[ordered.size() - 1 - i];
  } else {
    const auto& base = random_symbol_map();
    for (char c : used) {
      auto it = base.find(c);
      mapping[c] = it == base.end() ? c : it->second;
    }
  }
  return mapping;
}

EvalRecord apply_symbol_ablation(const EvalRecord& record, AblationMode mode) {
  if (mode == AblationMode::kOriginal) return record;
  if (record.expr_symbolic.empty())
    fail(ErrCode::kInvalidArg,
         "record " + record.id + " has no symbolic surface");

  std::map<char, char> mapping = ablation_mapping(record, mode);

  // Renaming must stay injective on the used variables.
  std::set<char> targets;
  for (const auto& [from, to] : mapping) {
    if (!targets.insert(to).second)
      fail(ErrCode::kInvalidArg, "symbol renaming collision on '" +
                                     std::string(1, to) + "'");
  }

  EvalRecord out = record;
  out.question_symbolic = rename_text(record.question_symbolic, mapping);
  out.expr_symbolic = rename_text(record.expr_symbolic, mapping);
  Substitution renamed;
  for (const auto& [var, value] : record.substitution) {
    auto it = mapping.find(var);
    renamed[it == mapping.end() ? var : it->second] = value;
  }
  out.substitution = std::move(renamed);
  return out;
}

}  // namespace mathlens
