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

#include "mathlens/mwp.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "nlohmann/json.hpp"

namespace mathlens {

using nlohmann::json;

const std::vector<std::string>& mwp_names() {
  static const std::vector<std::string> kNames = {
      "James",   "Emma",      "William", "Olivia", "Benjamin", "Charlotte",
      "Henry",   "Amelia",    "Alexander", "Ava",  "Samuel",   "Sophia",
      "Jacob",   "Mia",       "Daniel",  "Lily",   "Michael",  "Grace",
      "Ethan",   "Ella",      "Jack",    "Chloe",  "Lucas",    "Harper",
      "Thomas",  "Zoe",       "Matthew", "Nora",   "Nathan",   "Isla"};
  return kNames;
}

namespace {

constexpr long kMaxSingleTokenAnswer = 2500;
constexpr long kMaxTwoOpAnswer = 150;

bool is_two_op(const std::string& logic) { return logic.size() == 2; }

// Applies the logic tag left to right; returns the reason on constraint
// violation (non-integral division, negative intermediate, answer range).
std::optional<long> apply_logic(const std::string& logic,
                                const std::vector<long>& ops,
                                std::string* why) {
  auto step = [&why](long acc, char op, long v) -> std::optional<long> {
    switch (op) {
      case '+':
        return acc + v;
      case '-':
        if (acc - v < 0) {
          *why = "negative result in subtraction";
          return std::nullopt;
        }
        return acc - v;
      case '*':
        return acc * v;
      case '/':
        if (v == 0) {
          *why = "division by zero";
          return std::nullopt;
        }
        if (acc % v != 0) {
          *why = "non-integral division " + std::to_string(acc) + "/" +
                 std::to_string(v);
          return std::nullopt;
        }
        return acc / v;
      default:
        *why = "unknown operator";
        return std::nullopt;
    }
  };
  long acc = ops[0];
  for (std::size_t i = 0; i < logic.size(); ++i) {
    auto next = step(acc, logic[i], ops[i + 1]);
    if (!next) return std::nullopt;
    acc = *next;
  }
  long cap = is_two_op(logic) ? kMaxTwoOpAnswer : kMaxSingleTokenAnswer;
  if (acc < 0 || acc > cap) {
    *why = "answer " + std::to_string(acc) + " outside [0, " +
           std::to_string(cap) + "]";
    return std::nullopt;
  }
  return acc;
}

Expr::Kind op_kind(char op) {
  switch (op) {
    case '+': return Expr::Kind::kAdd;
    case '-': return Expr::Kind::kSub;
    case '*': return Expr::Kind::kMul;
    default: return Expr::Kind::kDiv;
  }
}

std::string replace_all(std::string text, const std::string& from,
                        const std::string& to) {
  std::size_t at = 0;
  while ((at = text.find(from, at)) != std::string::npos) {
    text.replace(at, from.size(), to);
    at += to.size();
  }
  return text;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  long between(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(gen() % static_cast<std::uint64_t>(
                                              hi - lo + 1));
  }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(gen() % v.size())];
  }
};

// family -> logic -> template, filtered by surface.
using FamilyIndex = std::map<std::string, std::map<std::string, MwpTemplate>>;

FamilyIndex index_templates(const std::vector<MwpTemplate>& templates,
                            const std::string& surface) {
  FamilyIndex out;
  for (const MwpTemplate& t : templates) {
    if (t.surface == surface) out[t.family][t.logic] = t;
  }
  return out;
}

std::vector<long> sample_operands_for(Rng& rng, const std::string& logic,
                                      int lo, int hi) {
  // Rejection sampling with a divisibility-aware draw for '/'.
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<long> ops;
    if (logic.find('/') != std::string::npos) {
      long b = rng.between(lo, hi);
      long kmax = hi / b;
      if (kmax < 1) continue;
      long a = b * rng.between(1, kmax);
      if (a < lo) continue;
      ops = {a, b};
    } else {
      for (std::size_t i = 0; i <= logic.size(); ++i)
        ops.push_back(rng.between(lo, hi));
    }
    std::string why;
    if (apply_logic(logic, ops, &why)) return ops;
  }
  fail(ErrCode::kInvalidArg,
       "cannot sample operands for logic '" + logic + "' in range");
}

}  // namespace

Problem instantiate(const MwpTemplate& tmpl, const std::string& name,
                    const std::vector<long>& operands, std::uint64_t) {
  const auto& names = mwp_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    fail(ErrCode::kInvalidArg, "name '" + name + "' is not in the name list");
  if (static_cast<int>(operands.size()) != tmpl.arity())
    fail(ErrCode::kInvalidArg, "operand count does not match template arity");
  for (long v : operands) {
    if (v < 0 || v > 50)
      fail(ErrCode::kInvalidArg,
           "operand " + std::to_string(v) + " outside [0, 50]");
  }
  std::string why;
  auto answer = apply_logic(tmpl.logic, operands, &why);
  if (!answer) fail(ErrCode::kInvalidArg, "rejected: " + why);

  bool symbolic = tmpl.surface == "symbolic";
  Problem p;
  p.name = name;
  p.operands = operands;
  p.template_id = tmpl.family + ":" + tmpl.logic + ":" + tmpl.surface;

  std::string text = replace_all(tmpl.text, "[name]", name);
  const char* holes[] = {"{x}", "{y}", "{z}"};
  ExprPtr expr;
  for (std::size_t i = 0; i < operands.size(); ++i) {
    std::string fill = symbolic ? std::string(1, kSymbolLetters[i])
                                : std::to_string(operands[i]);
    text = replace_all(text, holes[i], fill);
    ExprPtr leaf = symbolic
                       ? Expr::variable(kSymbolLetters[i])
                       : Expr::number(Rational(operands[i]));
    expr = i == 0 ? leaf
                  : Expr::binary(op_kind(tmpl.logic[i - 1]), expr, leaf);
  }
  p.prompt = text;
  p.expr = expr;
  p.expr_text = render_expr(expr);
  p.answer = Rational(*answer);
  return p;
}

PairGenResult make_abstraction_pairs(const std::vector<MwpTemplate>& templates,
                                     const PairGenOptions& options) {
  FamilyIndex families = index_templates(templates, "numeric");
  std::vector<std::string> eligible;
  for (const auto& [family, logics] : families) {
    if (logics.size() == 2 && !is_two_op(logics.begin()->first))
      eligible.push_back(family);
  }
  if (eligible.empty())
    fail(ErrCode::kInvalidArg,
         "no family has both logic counterparts for abstraction pairs");

  PairGenResult result;
  Rng rng(options.seed);
  int guard = 0;
  while (static_cast<int>(result.pairs.size()) < options.n &&
         guard++ < options.n * 64 + 64) {
    const std::string& family = rng.pick(eligible);
    auto it = families[family].begin();
    MwpTemplate first = it->second;
    MwpTemplate second = std::next(it)->second;
    if (rng.between(0, 1) == 1) std::swap(first, second);

    const std::string& name = rng.pick(mwp_names());
    std::vector<long> ops = sample_operands_for(
        rng, first.logic, options.operand_min, options.operand_max);
    std::string why;
    auto a_clean = apply_logic(first.logic, ops, &why);
    auto a_cor = apply_logic(second.logic, ops, &why);
    if (!a_clean || !a_cor) {
      result.rejections.push_back(family + ": " + why);
      continue;
    }
    if (*a_clean == *a_cor) {
      result.rejections.push_back(family + ": answers coincide");
      continue;
    }
    GeneratedPair pair;
    pair.kind = PairKind::kAbstraction;
    pair.family = family;
    pair.clean_logic = first.logic;
    pair.corrupted_logic = second.logic;
    pair.clean_text = instantiate(first, name, ops).prompt;
    pair.corrupted_text = instantiate(second, name, ops).prompt;
    pair.a_clean = *a_clean;
    pair.a_corrupted = *a_cor;
    pair.clean_operands = ops;
    pair.corrupted_operands = ops;
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

PairGenResult make_computation_pairs(const std::vector<MwpTemplate>& templates,
                                     const PairGenOptions& options) {
  FamilyIndex families = index_templates(templates, "numeric");
  struct Choice { std::string family; MwpTemplate tmpl; };
  std::vector<Choice> choices;
  for (const auto& [family, logics] : families)
    for (const auto& [logic, tmpl] : logics) choices.push_back({family, tmpl});
  if (choices.empty()) fail(ErrCode::kInvalidArg, "no numeric templates");

  PairGenResult result;
  Rng rng(options.seed);
  int guard = 0;
  while (static_cast<int>(result.pairs.size()) < options.n &&
         guard++ < options.n * 64 + 64) {
    const Choice& choice = rng.pick(choices);
    const std::string& name = rng.pick(mwp_names());
    std::vector<long> clean_ops = sample_operands_for(
        rng, choice.tmpl.logic, options.operand_min, options.operand_max);
    std::vector<long> cor_ops = sample_operands_for(
        rng, choice.tmpl.logic, options.operand_min, options.operand_max);
    if (clean_ops == cor_ops) {
      result.rejections.push_back(choice.family + ": identical operands");
      continue;
    }
    std::string why;
    auto a_clean = apply_logic(choice.tmpl.logic, clean_ops, &why);
    auto a_cor = apply_logic(choice.tmpl.logic, cor_ops, &why);
    if (!a_clean || !a_cor) {
      result.rejections.push_back(choice.family + ": " + why);
      continue;
    }
    if (*a_clean == *a_cor) {
      result.rejections.push_back(choice.family + ": answers coincide");
      continue;
    }
    GeneratedPair pair;
    pair.kind = PairKind::kComputation;
    pair.family = choice.family;
    pair.clean_logic = choice.tmpl.logic;
    pair.corrupted_logic = choice.tmpl.logic;
    pair.clean_text = instantiate(choice.tmpl, name, clean_ops).prompt;
    pair.corrupted_text = instantiate(choice.tmpl, name, cor_ops).prompt;
    pair.a_clean = *a_clean;
    pair.a_corrupted = *a_cor;
    pair.clean_operands = clean_ops;
    pair.corrupted_operands = cor_ops;
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

PairGenResult make_cross_pairs(const std::vector<MwpTemplate>& templates,
                               const CrossPairOptions& options) {
  if (is_two_op(options.clean_logic) || is_two_op(options.corrupted_logic))
    fail(ErrCode::kInvalidArg, "cross pairs support single-op logic only");
  const std::string clean_surface =
      options.numeric_clean ? "numeric" : "symbolic";
  FamilyIndex numeric = index_templates(templates, "numeric");
  FamilyIndex clean_index = index_templates(templates, clean_surface);

  std::vector<std::string> corrupted_families;
  for (const auto& [family, logics] : numeric)
    if (logics.count(options.corrupted_logic))
      corrupted_families.push_back(family);
  std::vector<std::string> clean_families;
  for (const auto& [family, logics] : clean_index)
    if (logics.count(options.clean_logic)) clean_families.push_back(family);
  if (corrupted_families.empty())
    fail(ErrCode::kInvalidArg, "no numeric template with corrupted logic '" +
                                   options.corrupted_logic + "'");
  if (clean_families.empty())
    fail(ErrCode::kInvalidArg, "no " + clean_surface +
                                   " template with clean logic '" +
                                   options.clean_logic + "'");

  PairGenResult result;
  Rng rng(options.seed);
  int guard = 0;
  while (static_cast<int>(result.pairs.size()) < options.n &&
         guard++ < options.n * 128 + 128) {
    std::string cor_family = rng.pick(corrupted_families);
    std::string cl_family = cor_family;
    if (options.mode == CrossMode::kRandomTemplate ||
        !clean_index.count(cor_family) ||
        !clean_index[cor_family].count(options.clean_logic)) {
      if (options.mode == CrossMode::kPairedTemplate &&
          (std::find(clean_families.begin(), clean_families.end(),
                     cor_family) == clean_families.end())) {
        // Paired mode needs the same family on both sides.
        result.rejections.push_back(cor_family +
                                    ": no paired clean-surface counterpart");
        continue;
      }
      cl_family = rng.pick(clean_families);
    }

    const MwpTemplate& cor_tmpl = numeric[cor_family][options.corrupted_logic];
    const MwpTemplate& cl_tmpl = clean_index[cl_family][options.clean_logic];
    const std::string& name = rng.pick(mwp_names());

    std::vector<long> cor_ops = sample_operands_for(
        rng, options.corrupted_logic, options.operand_min, options.operand_max);
    std::string why;
    auto a_cor = apply_logic(options.corrupted_logic, cor_ops, &why);
    if (!a_cor) {
      result.rejections.push_back(cor_family + ": " + why);
      continue;
    }
    // The target composes the clean logic with the corrupted operands;
    // constraint violations reject the pair with the reason.
    auto a_target = apply_logic(options.clean_logic, cor_ops, &why);
    if (!a_target) {
      result.rejections.push_back("target(" + options.clean_logic + " on " +
                                  std::to_string(cor_ops[0]) + "," +
                                  std::to_string(cor_ops[1]) + "): " + why);
      continue;
    }

    GeneratedPair pair;
    pair.family = cl_family + "/" + cor_family;
    pair.clean_logic = options.clean_logic;
    pair.corrupted_logic = options.corrupted_logic;
    pair.corrupted_text = instantiate(cor_tmpl, name, cor_ops).prompt;
    pair.a_corrupted = *a_cor;
    pair.a_target = *a_target;
    pair.corrupted_operands = cor_ops;
    if (options.numeric_clean) {
      std::vector<long> cl_ops = sample_operands_for(
          rng, options.clean_logic, options.operand_min, options.operand_max);
      if (cl_ops == cor_ops) {
        result.rejections.push_back(cl_family + ": identical operands");
        continue;
      }
      auto a_clean = apply_logic(options.clean_logic, cl_ops, &why);
      if (!a_clean) {
        result.rejections.push_back(cl_family + ": " + why);
        continue;
      }
      pair.kind = PairKind::kCrossNumeric;
      pair.clean_text = instantiate(cl_tmpl, name, cl_ops).prompt;
      pair.a_clean = *a_clean;
      pair.clean_operands = cl_ops;
    } else {
      pair.kind = PairKind::kCrossSymbolic;
      pair.clean_text = instantiate(cl_tmpl, name, cor_ops).prompt;
      pair.a_clean = 0;  // symbolic cleans have no numeric answer token
    }
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

std::vector<PromptPair> bind_pairs(const Vocabulary& vocab,
                                   const std::vector<GeneratedPair>& pairs) {
  std::vector<PromptPair> bound;
  bound.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const GeneratedPair& g = pairs[i];
    auto answer_id = [&vocab, i](long value) {
      if (value < 0 || value > kMaxSingleTokenAnswer)
        fail(ErrCode::kInvalidArg,
             "pair " + std::to_string(i) + ": answer " +
                 std::to_string(value) + " is not a single token");
      return vocab.integer_id(value);
    };
    PromptPair p;
    p.kind = g.kind;
    p.clean_text = g.clean_text;
    p.corrupted_text = g.corrupted_text;
    p.clean_ids = vocab.tokenize(g.clean_text);
    p.corrupted_ids = vocab.tokenize(g.corrupted_text);
    p.a_corrupted = answer_id(g.a_corrupted);
    p.a_clean = g.kind == PairKind::kCrossSymbolic ? vocab.pad_id()
                                                   : answer_id(g.a_clean);
    if (g.a_target) p.a_target = answer_id(*g.a_target);
    if (g.kind == PairKind::kCrossSymbolic) {
      for (TokenId id : p.clean_ids) {
        const std::string& tok = vocab.token(id);
        bool digits = !tok.empty() && std::all_of(tok.begin(), tok.end(),
                                                  [](unsigned char c) {
                                                    return c >= '0' && c <= '9';
                                                  });
        if (digits)
          fail(ErrCode::kInvalidArg,
               "pair " + std::to_string(i) +
                   ": symbolic clean prompt contains digit token '" + tok +
                   "'");
      }
    }
    bound.push_back(std::move(p));
  }
  return bound;
}

std::vector<MwpTemplate> load_templates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrCode::kIo, "cannot open template file " + path.string());
  std::vector<MwpTemplate> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      fail(ErrCode::kFormat,
           "bad template JSON at line " + std::to_string(lineno));
    MwpTemplate t;
    t.family = j.value("family", "");
    t.logic = j.value("logic", "");
    t.surface = j.value("surface", "");
    t.text = j.value("text", "");
    static const std::set<std::string> kLogics = {"+",  "-",  "*",  "/",
                                                  "++", "+-", "-+", "--"};
    if (t.family.empty() || t.text.empty() || !kLogics.count(t.logic) ||
        (t.surface != "numeric" && t.surface != "symbolic"))
      fail(ErrCode::kFormat,
           "invalid template at line " + std::to_string(lineno));
    for (int i = 0; i < t.arity(); ++i) {
      const char* holes[] = {"{x}", "{y}", "{z}"};
      if (t.text.find(holes[i]) == std::string::npos)
        fail(ErrCode::kFormat, "template at line " + std::to_string(lineno) +
                                   " is missing placeholder " + holes[i]);
    }
    out.push_back(std::move(t));
  }
  return out;
}

void save_templates(const std::filesystem::path& path,
                    const std::vector<MwpTemplate>& templates) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrCode::kIo, "cannot write template file " + path.string());
  for (const MwpTemplate& t : templates) {
    json j{{"family", t.family},
           {"logic", t.logic},
           {"surface", t.surface},
           {"text", t.text}};
    out << j.dump() << '\n';
  }
}

void save_pairs(const std::filesystem::path& path,
                const std::vector<GeneratedPair>& pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrCode::kIo, "cannot write pair file " + path.string());
  for (const GeneratedPair& p : pairs) {
    json j{{"kind", pair_kind_name(p.kind)},
           {"family", p.family},
           {"clean_logic", p.clean_logic},
           {"corrupted_logic", p.corrupted_logic},
           {"clean_text", p.clean_text},
           {"corrupted_text", p.corrupted_text},
           {"a_clean", p.a_clean},
           {"a_corrupted", p.a_corrupted},
           {"clean_operands", p.clean_operands},
           {"corrupted_operands", p.corrupted_operands}};
    if (p.a_target) j["a_target"] = *p.a_target;
    out << j.dump() << '\n';
  }
}

void save_problems(const std::filesystem::path& path,
                   const std::vector<Problem>& problems) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrCode::kIo, "cannot write problem file " + path.string());
  for (const Problem& p : problems) {
    json j{{"prompt", p.prompt},
           {"expr", p.expr_text},
           {"answer", p.answer.str()},
           {"operands", p.operands},
           {"name", p.name},
           {"template_id", p.template_id}};
    out << j.dump() << '\n';
  }
}

std::vector<Problem> load_problems(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrCode::kIo, "cannot open problem file " + path.string());
  std::vector<Problem> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      fail(ErrCode::kFormat,
           "bad problem JSON at line " + std::to_string(lineno));
    Problem p;
    p.prompt = j.value("prompt", "");
    p.expr_text = j.value("expr", "");
    p.expr = parse_expr(p.expr_text);
    p.answer = Rational::parse(j.at("answer").get<std::string>());
    p.operands = j.value("operands", std::vector<long>{});
    p.name = j.value("name", "");
    p.template_id = j.value("template_id", "");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<GeneratedPair> load_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrCode::kIo, "cannot open pair file " + path.string());
  std::vector<GeneratedPair> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      fail(ErrCode::kFormat, "bad pair JSON at line " + std::to_string(lineno));
    GeneratedPair p;
    p.kind = pair_kind_from_name(j.value("kind", ""));
    p.family = j.value("family", "");
    p.clean_logic = j.value("clean_logic", "");
    p.corrupted_logic = j.value("corrupted_logic", "");
    p.clean_text = j.value("clean_text", "");
    p.corrupted_text = j.value("corrupted_text", "");
    p.a_clean = j.value("a_clean", 0L);
    p.a_corrupted = j.value("a_corrupted", 0L);
    if (j.contains("a_target")) p.a_target = j["a_target"].get<long>();
    p.clean_operands = j.value("clean_operands", std::vector<long>{});
    p.corrupted_operands = j.value("corrupted_operands", std::vector<long>{});
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace mathlens
