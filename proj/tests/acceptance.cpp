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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits non-zero if any criterion fails. The ninth criterion is
// a live-endpoint smoke test and reports SKIP unless MATHLENS_ENDPOINT is
// configured.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "mathlens/attribution.hpp"
#include "mathlens/corpus.hpp"
#include "mathlens/equivalence.hpp"
#include "mathlens/harness.hpp"
#include "mathlens/planted.hpp"
#include "support/gen_expr.hpp"
#include "support/random_bundle.hpp"

using namespace mathlens;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("check failed: " + what);
}

void criterion(int id, const char* title,
               const std::function<std::string()>& body) {
  try {
    std::string detail = body();
    std::printf("CRITERION %d: PASS — %s%s%s\n", id, title,
                detail.empty() ? "" : " — ", detail.c_str());
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("CRITERION %d: FAIL — %s — %s\n", id, title, e.what());
  }
  std::fflush(stdout);
}

const PlantedModel& planted() {
  static const PlantedModel model = build_planted_model();
  return model;
}

std::vector<MwpTemplate> shipped_templates() {
  return load_templates(fs::path(MATHLENS_DATA_DIR) / "templates.jsonl");
}

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "mathlens_acceptance";
  fs::create_directories(dir);
  return dir;
}

// Independent re-derivation of a left-to-right logic chain, used to audit
// generated problems without touching the generator's own arithmetic.
long rederive(const std::string& logic, const std::vector<long>& ops) {
  long acc = ops.at(0);
  for (std::size_t i = 0; i < logic.size(); ++i) {
    long v = ops.at(i + 1);
    switch (logic[i]) {
      case '+': acc += v; break;
      case '-':
        check(acc >= v, "negative subtraction step");
        acc -= v;
        break;
      case '*': acc *= v; break;
      case '/':
        check(v != 0 && acc % v == 0, "non-integral division step");
        acc /= v;
        break;
      default: check(false, "unknown operator");
    }
  }
  return acc;
}

std::string rename_letters(const std::string& text,
                           const std::map<char, char>& mapping) {
  std::string out = text;
  for (std::size_t i = 0; i < out.size(); ++i) {
    bool left = i == 0 || !std::isalnum((unsigned char)out[i - 1]);
    bool right = i + 1 >= out.size() || !std::isalnum((unsigned char)out[i + 1]);
    auto it = mapping.find(out[i]);
    if (left && right && it != mapping.end()) out[i] = it->second;
  }
  return out;
}

// ---- criteria ----

std::string residual_decomposition() {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ModelBundle b =
        testing::random_bundle(testing::small_config(4, 64, 4096), seed);
    std::vector<TokenId> ids =
        b.vocab.tokenize("Emma has 5 apples . Emma buys 3 more .");
    ActivationCache cache = run_with_cache(b, ids);

    std::vector<float> sum = cache.at({0, SiteKind::kResidPre, SiteId::kLast});
    for (int layer = 0; layer < b.config.n_layers; ++layer) {
      auto attn = cache.at({layer, SiteKind::kAttnOut, SiteId::kLast});
      auto mlp = cache.at({layer, SiteKind::kMlpOut, SiteId::kLast});
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += attn[i] + mlp[i];
    }
    auto fin = cache.at({b.config.n_layers - 1, SiteKind::kResidFinal,
                         SiteId::kLast});
    double num = 0, den = 0;
    for (std::size_t i = 0; i < sum.size(); ++i) {
      num += (sum[i] - fin[i]) * (sum[i] - fin[i]);
      den += fin[i] * fin[i];
    }
    check(std::sqrt(num) <= 1e-3 * std::sqrt(den),
          "residual decomposition beyond 1e-3 (seed " + std::to_string(seed) +
              ")");

    std::vector<float> normed(fin.size());
    rms_norm(fin.data(), b.weights.final_norm.data(), b.config.d_model,
             b.config.norm_eps, normed.data());
    std::vector<float> logits(static_cast<std::size_t>(b.config.vocab_size));
    matvec(b.weights.unembed, normed.data(), logits.data());
    auto got = cache.last_logits();
    double scale = 0;
    for (float x : got) scale = std::max(scale, std::abs(double(x)));
    for (std::size_t i = 0; i < logits.size(); ++i)
      check(std::abs(logits[i] - got[i]) <= 1e-4 * std::max(1.0, scale),
            "readout identity beyond 1e-4");
  }
  return "20 random models";
}

std::string patching_endpoints() {
  const PlantedModel& m = planted();
  std::vector<PromptPair> pairs;
  for (auto kind : {PairKind::kAbstraction, PairKind::kComputation}) {
    auto options = planted_pair_options(50, kind == PairKind::kAbstraction
                                                ? 1001
                                                : 1002);
    PairGenResult generated =
        kind == PairKind::kAbstraction
            ? make_abstraction_pairs(m.templates, options)
            : make_computation_pairs(m.templates, options);
    auto bound = bind_pairs(m.bundle.vocab, generated.pairs);
    pairs.insert(pairs.end(), bound.begin(), bound.end());
  }
  check(pairs.size() == 100, "expected 100 generated pairs");

  SiteId final_site{m.bundle.config.n_layers - 1, SiteKind::kResidFinal,
                    SiteId::kLast};
  const SiteKind kKinds[] = {SiteKind::kAttnOut, SiteKind::kMlpOut,
                             SiteKind::kResidMid, SiteKind::kResidFinal};
  int rotate = 0;
  for (const PromptPair& pair : pairs) {
    // Self-patch: replacing a site with the corrupted run's own value must
    // leave the logits bit-identical, hence an effect of exactly 0.
    SiteId self_site{rotate % 2, kKinds[rotate % 4], SiteId::kLast};
    ++rotate;
    ActivationCache corrupted = run_with_cache(m.bundle, pair.corrupted_ids);
    ActivationCache self = run_with_patch(
        m.bundle, pair.corrupted_ids, {self_site, corrupted.at(self_site)});
    check(std::memcmp(corrupted.logits.data.data(), self.logits.data.data(),
                      corrupted.logits.data.size() * sizeof(float)) == 0,
          "self-patch changed the logits");

    EffectResult e = patching_effect(m.bundle, pair, final_site);
    check(!e.degenerate, "degenerate pair in endpoint check");
    check(std::abs(e.value - 1.0) <= 1e-4, "final-layer patch effect not 1");
  }
  return "100 pairs, self-patch exact and final patch = 1";
}

std::string planted_localization() {
  const PlantedModel& m = planted();
  std::vector<SiteId> sites = default_patch_sites(2);

  auto abstraction = bind_pairs(
      m.bundle.vocab,
      make_abstraction_pairs(m.templates, planted_pair_options(16, 2001))
          .pairs);
  PatchReport abs_report = patching_sweep(m.bundle, abstraction, sites);
  double attn_abs = abs_report.mean_for(m.abstraction_layer,
                                        SiteKind::kAttnOut);
  check(attn_abs >= 0.99, "abstraction attn effect below 0.99");
  check(abs_report.mean_for(1, SiteKind::kAttnOut) <= 0.05,
        "attn effect not localized (layer 2)");
  check(abs_report.mean_for(0, SiteKind::kMlpOut) <= 0.05,
        "layer-1 mlp effect unexpectedly high");

  auto computation = bind_pairs(
      m.bundle.vocab,
      make_computation_pairs(m.templates, planted_pair_options(16, 2002))
          .pairs);
  PatchReport comp_report = patching_sweep(m.bundle, computation, sites);
  double mlp_comp = comp_report.mean_for(m.compute_layer, SiteKind::kMlpOut);
  check(mlp_comp > comp_report.mean_for(0, SiteKind::kMlpOut),
        "mlp curve does not peak at the compute layer");
  check(mlp_comp > comp_report.mean_for(0, SiteKind::kAttnOut),
        "mlp effect not maximal (layer-1 attn)");
  check(mlp_comp > comp_report.mean_for(1, SiteKind::kAttnOut),
        "mlp effect not maximal (layer-2 attn)");

  auto add_prompts = [&](char op) {
    std::vector<std::string> prompts;
    for (const Problem& p : m.corpus)
      if (p.template_id.find(std::string(":") + op + ":") != std::string::npos)
        prompts.push_back(p.prompt);
    return prompts;
  };
  LogitDiffCurve diff = logit_diff_sweep(
      m.bundle, add_prompts('+'), add_prompts('-'),
      m.bundle.vocab.id_of("+"), m.bundle.vocab.id_of("-"));
  double gap0 = std::abs(diff.set_a[0] - diff.set_b[0]);
  double gap1 = std::abs(diff.set_a[1] - diff.set_b[1]);
  check(gap0 > 0.5, "no divergence at the abstraction layer");
  check(gap1 <= 0.05 * gap0, "divergence leaks past the abstraction layer");

  CrossPairOptions cross_options;
  static_cast<PairGenOptions&>(cross_options) = planted_pair_options(8, 2003);
  cross_options.clean_logic = "-";
  cross_options.corrupted_logic = "+";
  auto cross = bind_pairs(m.bundle.vocab,
                          make_cross_pairs(m.templates, cross_options).pairs);
  check(!cross.empty(), "no cross_symbolic pairs generated");
  int flips = 0;
  for (const PromptPair& pair : cross) {
    ActivationCache clean = run_with_cache(m.bundle, pair.clean_ids);
    SiteId site{m.abstraction_layer, SiteKind::kResidFinal, SiteId::kLast};
    ActivationCache patched = run_with_patch(m.bundle, pair.corrupted_ids,
                                             {site, clean.at(site)});
    std::vector<float> logits = patched.last_logits();
    TokenId best = 0;
    for (TokenId t = 1; t < m.bundle.config.vocab_size; ++t)
      if (logits[t] > logits[best]) best = t;
    flips += best == *pair.a_target;
  }
  check(flips == static_cast<int>(cross.size()),
        "cross_symbolic patch did not flip every top-1");
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "attn@abstraction %.4f, mlp@compute %.4f, %d/%zu flips",
                attn_abs, mlp_comp, flips, cross.size());
  return buf;
}

std::string expression_engine_agreement() {
  std::mt19937_64 rng(424242);
  std::vector<char> vars{'x', 'y', 'z', 'u'};
  // Expressions with identically-zero denominators denote no rational
  // function and are out of the oracle's reach; draw until both sides are
  // proper so all 500 pairs carry weight.
  auto draw = [&rng, &vars]() {
    for (;;) {
      ExprPtr e = mathlens::testing::random_expr(rng, 3, vars);
      if (to_rational_function(e).has_value()) return e;
    }
  };
  int agreements = 0;
  for (int i = 0; i < 500; ++i) {
    ExprPtr a = draw();
    ExprPtr b;
    do {
      b = i % 2 == 0 ? mathlens::testing::equivalent_rewrite(rng, a) : draw();
    } while (!to_rational_function(b).has_value());
    bool canonical = equivalent(a, b);
    bool sampled = random_eval_oracle(a, b, 20, 7000 + i);
    check(canonical == sampled,
          "canonical/oracle disagreement at pair " + std::to_string(i) +
              ": " + render_expr(a) + " vs " + render_expr(b));
    ++agreements;
  }
  check(agreements == 500, "expected 500 decidable pairs");

  struct Fixture {
    const char* gold;
    const char* generation;
    bool expected;
  };
  const Fixture fixtures[] = {
      {"u*(x+y+z)", "xu + yu + zu", true},
      {"x + x*(1/y)", "x + (x/y)", true},
      {"0.5(x+yz)", "z * (y + 1) * x / 2", false},
      {"(y+z)/x", "xz - y = xy", false},
      {"xz*((1-y)/100)", "(x * (1 - y/100) * z)", false},
      {"(12/x)*y", "y * 12", false},
  };
  for (const Fixture& f : fixtures) {
    auto parsed = strip_to_expression(f.generation);
    bool verdict =
        parsed.has_value() && equivalent(parse_expr(f.gold), *parsed);
    check(verdict == f.expected,
          std::string("fixture mismatch for ") + f.gold + " vs " +
              f.generation);
  }
  return std::to_string(agreements) + " oracle agreements + 6 fixtures";
}

std::string scoring_fixtures() {
  EvalRecord weng;
  weng.id = "weng";
  weng.question =
      "Weng earns $12 an hour for babysitting. Yesterday, she just did 50 "
      "minutes of babysitting. How much did she earn?";
  weng.question_symbolic =
      "Weng earns $x an hour for babysitting. Yesterday, she just did y "
      "minutes of babysitting. How much did she earn?";
  weng.expr_numeric = "12 * (50/60)";
  weng.expr_symbolic = "x * (y/60)";
  weng.substitution = {{'x', Rational(12)}, {'y', Rational(50)}};
  weng.answer = Rational(10);

  check(score({EvalVariant::kOriginal, false}, "#### 10", weng) ==
            Verdict::kCorrect,
        "original replay");
  check(score({EvalVariant::kArithmeticComputation, false}, "#### 10",
              weng) == Verdict::kCorrect,
        "computation replay");
  check(score({EvalVariant::kNumericalAbstraction, false},
              "#### " + weng.expr_numeric, weng) == Verdict::kCorrect,
        "numerical abstraction replay");
  check(score({EvalVariant::kSymbolicAbstraction, false},
              "#### " + weng.expr_symbolic, weng) == Verdict::kCorrect,
        "symbolic abstraction replay");

  check(eval_exact(parse_expr("12*(50/60)")) == Rational(10),
        "12*(50/60) must be exactly 10");

  EvalRecord eggs;
  eggs.id = "eggs";
  eggs.expr_symbolic = "(z - u*y)/(x + y)";
  eggs.expr_numeric = "";
  eggs.substitution = {{'x', Rational(3)},
                       {'y', Rational(5)},
                       {'z', Rational(42)},
                       {'u', Rational(2)}};
  eggs.answer = Rational(4);
  check(!validate_symbolic_variant(eggs).has_value(),
        "egg-count triplet must validate to 4");
  return "";
}

std::string harness_end_to_end() {
  std::vector<EvalRecord> corpus;
  for (int i = 0; i < 10; ++i) {
    EvalRecord r;
    r.id = "fx-" + std::to_string(i);
    long a = 3 + i, b = 2 + (i % 4);
    r.question = "Start with " + std::to_string(a) + " and add " +
                 std::to_string(b) + " . What is the total ?";
    r.question_symbolic = "Start with x and add y . What is the total ?";
    r.expr_numeric = std::to_string(a) + " + " + std::to_string(b);
    r.expr_symbolic = "x + y";
    r.substitution = {{'x', Rational(a)}, {'y', Rational(b)}};
    r.answer = Rational(a + b);
    corpus.push_back(std::move(r));
  }

  // 40 canned generations: per setting, 10 records with a hand-counted
  // number of correct replies.
  struct Plan { EvalVariant variant; int n_correct; };
  const Plan plans[] = {{EvalVariant::kOriginal, 6},
                        {EvalVariant::kArithmeticComputation, 8},
                        {EvalVariant::kNumericalAbstraction, 5},
                        {EvalVariant::kSymbolicAbstraction, 10}};
  std::map<std::string, std::string> canned;
  for (const Plan& plan : plans) {
    for (int i = 0; i < 10; ++i) {
      std::string prompt =
          build_prompt({plan.variant, false}, corpus[static_cast<size_t>(i)]);
      std::string right;
      switch (plan.variant) {
        case EvalVariant::kOriginal:
        case EvalVariant::kArithmeticComputation:
          right = "#### " + corpus[static_cast<size_t>(i)].answer.str();
          break;
        case EvalVariant::kNumericalAbstraction:
          right = "#### " + corpus[static_cast<size_t>(i)].expr_numeric;
          break;
        case EvalVariant::kSymbolicAbstraction:
          right = "#### y + x";  // equivalence handles the commuted form
          break;
      }
      canned[prompt] = i < plan.n_correct ? right : "#### 1000000";
    }
  }

  for (const Plan& plan : plans) {
    MockClient client(canned);
    EvalOptions options;
    options.setting = {plan.variant, false};
    EvalReport report = run_eval(client, corpus, options);
    check(report.correct == plan.n_correct,
          std::string("hand-counted accuracy mismatch for ") +
              variant_name(plan.variant));
    check(report.total == 10, "wrong total");
  }

  // CoT delta fixture: 9/10 with CoT vs 6/10 without is +30 points.
  std::map<std::string, std::string> cot_canned;
  for (int i = 0; i < 10; ++i) {
    std::string prompt =
        build_prompt({EvalVariant::kOriginal, true}, corpus[static_cast<size_t>(i)]);
    cot_canned[prompt] =
        i < 9 ? "#### " + corpus[static_cast<size_t>(i)].answer.str()
              : "#### 0";
  }
  MockClient nocot_client(canned);
  MockClient cot_client(cot_canned);
  EvalOptions nocot_options;
  nocot_options.setting = {EvalVariant::kOriginal, false};
  EvalOptions cot_options;
  cot_options.setting = {EvalVariant::kOriginal, true};
  EvalReport nocot = run_eval(nocot_client, corpus, nocot_options);
  EvalReport cot = run_eval(cot_client, corpus, cot_options);
  double delta = cot_delta(cot, nocot);
  check(std::abs(delta - 30.0) < 1e-9, "CoT delta is not +30.0 points");

  // Journal resume: a second run issues zero client calls.
  fs::path journal = work_dir() / "acceptance_journal.jsonl";
  std::error_code ignored;
  fs::remove(journal, ignored);
  EvalOptions journal_options;
  journal_options.setting = {EvalVariant::kOriginal, false};
  journal_options.journal_path = journal;
  MockClient first(canned);
  run_eval(first, corpus, journal_options);
  check(first.calls_made() == 10, "first run should call the client");
  MockClient second(canned);
  EvalReport resumed = run_eval(second, corpus, journal_options);
  check(second.calls_made() == 0, "resume issued duplicate calls");
  check(resumed.correct == 6, "resume changed verdicts");
  return "fixture accuracies 6/8/5/10, delta +30.0, zero duplicate calls";
}

std::string dataset_invariants() {
  std::vector<MwpTemplate> templates = shipped_templates();
  PairGenOptions options;
  options.n = 250;
  options.seed = 31337;
  PairGenResult abstraction = make_abstraction_pairs(templates, options);
  options.seed = 31338;
  PairGenResult computation = make_computation_pairs(templates, options);
  check(abstraction.pairs.size() == 250 && computation.pairs.size() == 250,
        "expected 250 + 250 pairs (1000 problems)");

  int problems = 0;
  auto audit = [&problems](const std::string& logic,
                           const std::vector<long>& ops, long answer) {
    check(!logic.empty(), "pair without a logic tag");
    for (long v : ops) check(v >= 0 && v <= 50, "operand outside [0, 50]");
    long expected = rederive(logic, ops);  // enforces / and - constraints
    check(expected == answer, "stored answer disagrees with re-derivation");
    check(answer >= 0 && answer <= 2500, "answer is not a single token");
    ++problems;
  };
  for (const PairGenResult* result : {&abstraction, &computation}) {
    for (const GeneratedPair& pair : result->pairs) {
      audit(pair.clean_logic, pair.clean_operands, pair.a_clean);
      audit(pair.corrupted_logic, pair.corrupted_operands, pair.a_corrupted);
    }
  }
  check(problems == 1000, "expected exactly 1000 audited problems");

  // Equal seeds regenerate byte-identical files.
  fs::path a = work_dir() / "regen_a.jsonl";
  fs::path b = work_dir() / "regen_b.jsonl";
  PairGenOptions regen;
  regen.n = 100;
  regen.seed = 555;
  save_pairs(a, make_computation_pairs(templates, regen).pairs);
  save_pairs(b, make_computation_pairs(templates, regen).pairs);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::string ca{std::istreambuf_iterator<char>(fa), {}};
  std::string cb{std::istreambuf_iterator<char>(fb), {}};
  check(!ca.empty() && ca == cb, "equal-seed regeneration differs");
  return "1000 problems audited";
}

std::string ablation_soundness() {
  std::vector<MwpTemplate> templates = shipped_templates();
  std::mt19937_64 rng(99);
  std::vector<EvalRecord> records;
  std::vector<std::string> generations;
  // 200 symbolic records with a mix of right, commuted-right and wrong
  // generations.
  PairGenOptions options;
  options.n = 200;
  options.seed = 777;
  PairGenResult pairs = make_computation_pairs(templates, options);
  check(pairs.pairs.size() == 200, "expected 200 records");
  for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
    const GeneratedPair& pair = pairs.pairs[i];
    EvalRecord r;
    r.id = "abl-" + std::to_string(i);
    r.question = pair.clean_text;
    r.question_symbolic = pair.clean_text;  // text irrelevant for scoring
    r.expr_symbolic = pair.clean_logic.size() == 1
                          ? std::string("x ") + pair.clean_logic + " y"
                          : "x " + pair.clean_logic.substr(0, 1) + " y " +
                                pair.clean_logic.substr(1, 1) + " z";
    r.expr_numeric = "";
    r.answer = Rational(pair.a_clean);
    records.push_back(std::move(r));
    switch (rng() % 3) {
      case 0: generations.push_back("#### " + records.back().expr_symbolic);
              break;
      case 1: generations.push_back("#### x");  // wrong but parseable
              break;
      default: generations.push_back("#### x - x");  // wrong
    }
  }

  EvalSetting setting{EvalVariant::kSymbolicAbstraction, false};
  for (std::size_t i = 0; i < records.size(); ++i) {
    Verdict base = score(setting, generations[i], records[i]);
    for (AblationMode mode : {AblationMode::kOriginal, AblationMode::kReversed,
                              AblationMode::kRandom}) {
      EvalRecord renamed = apply_symbol_ablation(records[i], mode);
      std::map<char, char> mapping = ablation_mapping(records[i], mode);
      std::string renamed_generation = rename_letters(generations[i], mapping);
      Verdict got = score(setting, renamed_generation, renamed);
      check(got == base, "verdict changed under ablation for record " +
                             std::to_string(i));
    }
  }
  return "200 records × 3 modes";
}

std::string live_endpoint_smoke() {
  const char* endpoint = std::getenv("MATHLENS_ENDPOINT");
  if (!endpoint || !*endpoint) return "SKIP";

  HttpClientConfig config;
  config.endpoint = endpoint;
  if (const char* model = std::getenv("MATHLENS_MODEL")) config.model = model;
  if (const char* token = std::getenv("MATHLENS_API_TOKEN"))
    config.auth_token = token;
  HttpChatClient client(config);

  EvalRecord r;
  r.id = "live-1";
  r.question =
      "Weng earns $12 an hour for babysitting. Yesterday, she just did 50 "
      "minutes of babysitting. How much did she earn?";
  r.question_symbolic =
      "Weng earns $x an hour for babysitting. Yesterday, she just did y "
      "minutes of babysitting. How much did she earn?";
  r.expr_numeric = "12 * (50/60)";
  r.expr_symbolic = "x * (y/60)";
  r.substitution = {{'x', Rational(12)}, {'y', Rational(50)}};
  r.answer = Rational(10);

  for (int v = 0; v < 4; ++v) {
    EvalOptions options;
    options.setting = {static_cast<EvalVariant>(v), false};
    EvalReport report = run_eval(client, {r}, options);
    check(report.total == 1, "malformed live report");
    check(report.correct + report.incorrect + report.extraction_failure +
                  report.parse_failure ==
              1,
          "verdict counts must sum to 1");
  }
  return "4 settings, no numeric claim asserted";
}

}  // namespace

int main() {
  criterion(1, "residual decomposition + readout identity",
            residual_decomposition);
  criterion(2, "patching endpoints (self-patch 0, final patch 1)",
            patching_endpoints);
  criterion(3, "planted-circuit localization", planted_localization);
  criterion(4, "expression engine vs randomized oracle + judge fixtures",
            expression_engine_agreement);
  criterion(5, "scoring fixtures (rate triplet, exact arithmetic)",
            scoring_fixtures);
  criterion(6, "harness end-to-end (mock client, CoT delta, resume)",
            harness_end_to_end);
  criterion(7, "dataset invariants on 1000 generated problems",
            dataset_invariants);
  criterion(8, "symbol-ablation scoring soundness", ablation_soundness);

  // Optional live smoke: prints SKIP when no endpoint is configured.
  try {
    std::string detail = live_endpoint_smoke();
    if (detail == "SKIP") {
      std::printf(
          "CRITERION 9: SKIP — live-endpoint smoke (set MATHLENS_ENDPOINT "
          "to enable)\n");
    } else {
      std::printf("CRITERION 9: PASS — live-endpoint smoke — %s\n",
                  detail.c_str());
    }
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("CRITERION 9: FAIL — live-endpoint smoke — %s\n", e.what());
  }

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
