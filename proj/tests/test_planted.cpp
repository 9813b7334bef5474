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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <filesystem>

#include "doctest.h"
#include "mathlens/attribution.hpp"
#include "mathlens/planted.hpp"

using namespace mathlens;
namespace fs = std::filesystem;

namespace {

// Building once keeps the suite fast; the constructor itself is the
// self-checking step.
const PlantedModel& planted() {
  static const PlantedModel model = build_planted_model();
  return model;
}

std::vector<PromptPair> planted_pairs(PairKind kind, int n, std::uint64_t seed) {
  const PlantedModel& m = planted();
  if (kind == PairKind::kAbstraction) {
    return bind_pairs(
        m.bundle.vocab,
        make_abstraction_pairs(m.templates, planted_pair_options(n, seed))
            .pairs);
  }
  if (kind == PairKind::kComputation) {
    return bind_pairs(
        m.bundle.vocab,
        make_computation_pairs(m.templates, planted_pair_options(n, seed))
            .pairs);
  }
  CrossPairOptions options;
  static_cast<PairGenOptions&>(options) = planted_pair_options(n, seed);
  options.clean_logic = "-";
  options.corrupted_logic = "+";
  options.numeric_clean = kind == PairKind::kCrossNumeric;
  return bind_pairs(m.bundle.vocab,
                    make_cross_pairs(m.templates, options).pairs);
}

std::vector<std::string> corpus_prompts(char op) {
  std::vector<std::string> prompts;
  for (const Problem& p : planted().corpus) {
    if (p.template_id.find(std::string(":") + op + ":") != std::string::npos)
      prompts.push_back(p.prompt);
  }
  return prompts;
}

}  // namespace

TEST_CASE("constructor self-check passes and declares its layers") {
  const PlantedModel& m = planted();
  CHECK(m.bundle.config.n_layers == 2);
  CHECK(m.abstraction_layer == 0);
  CHECK(m.operand_layer == 1);
  CHECK(m.compute_layer == 1);
  CHECK(m.corpus.size() == 20);
  CHECK(m.self_check["all_top1_correct"].get<bool>());
  CHECK(m.operator_lens_attn0 > 1.0);
}

TEST_CASE("greedy decode answers the canonical prompt with 8") {
  const PlantedModel& m = planted();
  std::vector<TokenId> ids =
      m.bundle.vocab.tokenize("Emma has 5 apples . Emma buys 3 more .");
  std::vector<TokenId> out = greedy_decode(m.bundle, ids, 4);
  REQUIRE(!out.empty());
  CHECK(out[0] == m.bundle.vocab.id_of("8"));
  CHECK(out.back() == m.bundle.vocab.eot_id());
  CHECK(greedy_decode(m.bundle, ids, 0).empty());
}

TEST_CASE("whole corpus answers top-1 under greedy decoding") {
  const PlantedModel& m = planted();
  for (const Problem& problem : m.corpus) {
    std::vector<TokenId> ids = m.bundle.vocab.tokenize(problem.prompt);
    std::vector<TokenId> out = greedy_decode(m.bundle, ids, 1);
    REQUIRE(out.size() == 1);
    CHECK(m.bundle.vocab.token(out[0]) == problem.answer.str());
  }
}

TEST_CASE("operator lens jumps at the abstraction layer") {
  const PlantedModel& m = planted();
  std::vector<TokenGroup> groups;
  for (const auto& [label, tokens] : planted_operator_groups()) {
    TokenGroup g{label, {}};
    for (const std::string& tok : tokens)
      g.members.push_back(m.bundle.vocab.id_of(tok));
    groups.push_back(std::move(g));
  }
  std::vector<PromptSpec> prompts;
  for (const std::string& text : corpus_prompts('+'))
    prompts.push_back({text, {}});
  REQUIRE(prompts.size() == 5);

  LensCurve curve = lens_sweep(m.bundle, prompts, groups,
                               {SiteKind::kAttnOut, SiteKind::kResidFinal});
  double at_abstraction =
      curve.value(m.abstraction_layer, SiteKind::kAttnOut, "operator:+");
  // The curve lands on the constructor's declared write magnitude.
  CHECK(at_abstraction > 0.5 * m.operator_lens_attn0);
  CHECK(at_abstraction < 2.0 * m.operator_lens_attn0);
}

TEST_CASE("answer-token lens is flat before the compute layer") {
  const PlantedModel& m = planted();
  const Problem& probe = m.corpus[0];
  TokenId answer = m.bundle.vocab.integer_id(probe.answer.to_long());
  std::vector<TokenGroup> groups{{"answer", {answer}}};
  LensCurve curve = lens_sweep(m.bundle, {{probe.prompt, {}}}, groups,
                               {SiteKind::kResidFinal});
  double before = curve.value(0, SiteKind::kResidFinal, "answer");
  double final_value = curve.value(1, SiteKind::kResidFinal, "answer");
  CHECK(std::abs(before) < 0.5);
  CHECK(final_value > 10.0);
}

TEST_CASE("logit difference diverges exactly at the abstraction layer") {
  const PlantedModel& m = planted();
  LogitDiffCurve curve = logit_diff_sweep(
      m.bundle, corpus_prompts('+'), corpus_prompts('-'),
      m.bundle.vocab.id_of("+"), m.bundle.vocab.id_of("-"));
  double gap0 = std::abs(curve.set_a[0] - curve.set_b[0]);
  double gap1 = std::abs(curve.set_a[1] - curve.set_b[1]);
  CHECK(gap0 > 0.5);
  CHECK(gap1 <= 0.05 * gap0);
  // Sign structure: addition prompts push '+', subtraction prompts push '-'.
  CHECK(curve.set_a[0] > 0.0);
  CHECK(curve.set_b[0] < 0.0);
}

TEST_CASE("abstraction pairs localize to attention at the abstraction layer") {
  const PlantedModel& m = planted();
  std::vector<PromptPair> pairs = planted_pairs(PairKind::kAbstraction, 12, 21);
  REQUIRE(pairs.size() == 12);
  PatchReport report =
      patching_sweep(m.bundle, pairs, default_patch_sites(2));
  CHECK(report.mean_for(m.abstraction_layer, SiteKind::kAttnOut) >= 0.99);
  CHECK(report.mean_for(1, SiteKind::kAttnOut) <= 0.05);
  CHECK(report.mean_for(0, SiteKind::kMlpOut) <= 0.05);
  for (int i : report.n_degenerate) CHECK(i == 0);
}

TEST_CASE("computation pairs peak at the compute-layer MLP") {
  const PlantedModel& m = planted();
  std::vector<PromptPair> pairs = planted_pairs(PairKind::kComputation, 12, 22);
  REQUIRE(pairs.size() == 12);
  PatchReport report =
      patching_sweep(m.bundle, pairs, default_patch_sites(2));
  double mlp_compute = report.mean_for(m.compute_layer, SiteKind::kMlpOut);
  // The MLP curve peaks at the compute layer, strictly above every other
  // component site (the final-layer resid_final readout is identically 1 for
  // any pair kind and is excluded from the comparison).
  CHECK(mlp_compute > report.mean_for(0, SiteKind::kMlpOut));
  CHECK(mlp_compute > report.mean_for(0, SiteKind::kAttnOut) + 0.02);
  CHECK(mlp_compute > report.mean_for(1, SiteKind::kAttnOut) + 0.02);
  CHECK(std::abs(report.mean_for(1, SiteKind::kResidFinal) - 1.0) <= 1e-4);
}

TEST_CASE("cross-numeric traces follow the declared layer roles") {
  const PlantedModel& m = planted();
  std::vector<PromptPair> pairs = planted_pairs(PairKind::kCrossNumeric, 8, 23);
  REQUIRE(!pairs.empty());
  CrossPatchTrace trace = cross_patch_mean(m.bundle, pairs);

  double target_at_abstraction = trace.at(m.abstraction_layer, "target");
  double target_at_operand = trace.at(m.operand_layer, "target");
  CHECK(target_at_abstraction > trace.baseline("target") + 5.0);
  CHECK(target_at_abstraction > target_at_operand + 5.0);

  // Patching the final layer forces the clean run's own prediction.
  const PromptPair& pair = pairs[0];
  ActivationCache clean = run_with_cache(m.bundle, pair.clean_ids);
  std::vector<double> clean_lp = log_softmax(clean.last_logits());
  CrossPatchTrace single = cross_patch(m.bundle, pair);
  CHECK(std::abs(single.at(1, "clean") -
                 clean_lp[static_cast<std::size_t>(pair.a_clean)]) <= 1e-4);
}

TEST_CASE("cross-symbolic patches flip the prediction at the abstraction layer") {
  const PlantedModel& m = planted();
  std::vector<PromptPair> pairs = planted_pairs(PairKind::kCrossSymbolic, 8, 24);
  REQUIRE(!pairs.empty());

  CrossPatchTrace trace = cross_patch_mean(m.bundle, pairs);
  // The corrupted answer falls across the abstraction layer while the target
  // rises from its baseline.
  CHECK(trace.at(0, "corrupted") < trace.baseline("corrupted") - 5.0);
  CHECK(trace.at(0, "target") > trace.baseline("target") + 5.0);

  // Top-1 flips to the target answer when the abstraction layer is patched.
  const PromptPair& pair = pairs[0];
  ActivationCache clean = run_with_cache(m.bundle, pair.clean_ids);
  SiteId site{m.abstraction_layer, SiteKind::kResidFinal, SiteId::kLast};
  ActivationCache patched =
      run_with_patch(m.bundle, pair.corrupted_ids, {site, clean.at(site)});
  std::vector<float> logits = patched.last_logits();
  TokenId best = 0;
  for (TokenId t = 1; t < m.bundle.config.vocab_size; ++t)
    if (logits[t] > logits[best]) best = t;
  CHECK(best == *pair.a_target);
}

TEST_CASE("abstraction transfer is template-invariant") {
  // Minimally-different (paired) and unrelated (random) clean templates
  // inject the same operator information, so the target answer rises at the
  // abstraction layer either way.
  const PlantedModel& m = planted();
  for (CrossMode mode : {CrossMode::kPairedTemplate,
                         CrossMode::kRandomTemplate}) {
    CrossPairOptions options;
    static_cast<PairGenOptions&>(options) = planted_pair_options(6, 31);
    options.mode = mode;
    options.clean_logic = "-";
    options.corrupted_logic = "+";
    auto pairs = bind_pairs(m.bundle.vocab,
                            make_cross_pairs(m.templates, options).pairs);
    REQUIRE(!pairs.empty());
    CrossPatchTrace trace = cross_patch_mean(m.bundle, pairs);
    CHECK(trace.at(m.abstraction_layer, "target") >
          trace.baseline("target") + 5.0);
  }
}

TEST_CASE("cross-patch distributions stay normalized") {
  const PlantedModel& m = planted();
  std::vector<PromptPair> pairs = planted_pairs(PairKind::kCrossSymbolic, 2, 33);
  REQUIRE(!pairs.empty());
  const PromptPair& pair = pairs[0];
  ActivationCache clean = run_with_cache(m.bundle, pair.clean_ids);
  for (int layer = 0; layer < m.bundle.config.n_layers; ++layer) {
    SiteId site{layer, SiteKind::kResidFinal, SiteId::kLast};
    ActivationCache patched =
        run_with_patch(m.bundle, pair.corrupted_ids, {site, clean.at(site)});
    std::vector<double> lp = log_softmax(patched.last_logits());
    double total = 0;
    for (double x : lp) total += std::exp(x);
    CHECK(std::abs(total - 1.0) <= 1e-4);
  }
}

TEST_CASE("planted files round trip through the loader") {
  const PlantedModel& m = planted();
  fs::path dir = fs::temp_directory_path() / "mathlens_test_planted";
  write_planted_files(dir, m);
  for (const char* name : {"weights.bin", "vocab.txt", "templates.jsonl",
                           "corpus.jsonl", "selfcheck.json"})
    CHECK(fs::exists(dir / name));

  ModelBundle loaded = load_model(dir / "weights.bin", dir / "vocab.txt");
  std::vector<TokenId> ids =
      loaded.vocab.tokenize("Emma has 5 apples . Emma buys 3 more .");
  Matrix a = forward_logits(m.bundle, ids);
  Matrix b = forward_logits(loaded, ids);
  CHECK(std::memcmp(a.data.data(), b.data.data(),
                    a.data.size() * sizeof(float)) == 0);
}
