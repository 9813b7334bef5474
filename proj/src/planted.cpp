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

#include "mathlens/planted.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "mathlens/attribution.hpp"
#include "mathlens/corpus.hpp"
#include "mathlens/hooks.hpp"

namespace mathlens {

namespace {

// Residual stream layout (d_model = 128). Everything the circuit reads or
// writes lives in a named block; per-token filler in the spare dims equalizes
// embedding norms so RMS normalization acts as a uniform rescale.
constexpr int kDModel = 128;
constexpr int kOpSrc = 0;      // operator one-hot on operator-bearing tokens
constexpr int kOpDst = 4;      // visible operator direction (read by unembed)
constexpr int kOpMlp = 8;      // operator copy feeding the lookup MLP
constexpr int kNumSrc = 12;    // value one-hot on integer tokens 2..9
constexpr int kABlock = 20;    // first operand landing pad
constexpr int kBBlock = 28;    // second operand landing pad
constexpr int kAnsBlock = 36;  // answer-value one-hot written by the MLP
constexpr int kAnsCap = 44;
constexpr int kEotWrite = 80;
constexpr int kIsNum = 81;
constexpr int kSentEnd = 82;
constexpr int kPrevSe = 83;
constexpr int kBias = 84;
constexpr int kFillerBase = 88;
constexpr int kFillerCount = 40;

constexpr int kNumLo = 2;
constexpr int kNumHi = 9;

// Question shape shared by every planted template (relative to the last
// token): first operand 7 back, second operand 2 back, operator word 3 back.
constexpr double kOffsetFirstOperand = 7.0;
constexpr double kOffsetSecondOperand = 2.0;
constexpr double kOffsetPrev = 1.0;
constexpr double kOffsetSelf = 0.0;

// Write magnitudes and attention gains.
constexpr float kOpDstWriteMag = 0.5f;
constexpr float kOpMlpWriteMag = 1.0f;
constexpr float kFaintGain = 0.15f;
constexpr float kStrongGain = 1.0f;
constexpr float kPrevWriteMag = 1.0f;
constexpr float kEraseGain = 1.005f;  // nominal rms of the layer-1 input
constexpr float kGate = 20.0f;
constexpr float kAnsOutMag = 1.875f;
constexpr float kEotOutMag = 5.1f;
constexpr float kAnsReadMag = 3.0f;
constexpr float kOpReadMag = 1.0f;
constexpr float kEotReadMag = 3.0f;
constexpr float kOffsetKernelGain = 4.0f;
constexpr float kSharpKernelGain = 21.0f;
constexpr float kContentBoost = 40.0f;
constexpr int kKernelPlanes = 12;   // planes carrying the offset kernel
constexpr int kContentPlane = 15;   // near-static plane carrying content

const char kOps[] = {'+', '-', '*', '/'};

int op_index(char op) {
  switch (op) {
    case '+': return 0;
    case '-': return 1;
    case '*': return 2;
    default: return 3;
  }
}

// Embedding-side operator tokens (glyphs, words, and template verbs).
const std::map<std::string, char>& operator_token_map() {
  static const std::map<std::string, char> kMap = {
      {"+", '+'},        {"add", '+'},      {"plus", '+'},   {"buys", '+'},
      {"gains", '+'},    {"-", '-'},        {"\xe2\x88\x92", '-'},
      {"subtract", '-'}, {"minus", '-'},    {"eats", '-'},   {"loses", '-'},
      {"*", '*'},        {"\xc3\x97", '*'}, {"\xc2\xb7", '*'},
      {"multiply", '*'}, {"times", '*'},    {"scales", '*'}, {"stacks", '*'},
      {"/", '/'},        {"\xc3\xb7", '/'}, {"divide", '/'}, {"splits", '/'},
      {"shares", '/'}};
  return kMap;
}

// Readout-side operator tokens (lens groups use these; verbs stay
// embedding-only so prompts do not read their own verbs back out).
const std::map<std::string, char>& operator_readout_map() {
  static const std::map<std::string, char> kMap = {
      {"+", '+'},        {"add", '+'},      {"plus", '+'},
      {"-", '-'},        {"\xe2\x88\x92", '-'},
      {"subtract", '-'}, {"minus", '-'},
      {"*", '*'},        {"\xc3\x97", '*'}, {"\xc2\xb7", '*'},
      {"multiply", '*'}, {"times", '*'},
      {"/", '/'},        {"\xc3\xb7", '/'}, {"divide", '/'}};
  return kMap;
}

std::optional<long> planted_result(char op, long a, long b) {
  switch (op) {
    case '+': return a + b;
    case '-': return a >= b ? std::optional<long>(a - b) : std::nullopt;
    case '*': return a * b;
    default:
      return (b != 0 && a % b == 0) ? std::optional<long>(a / b)
                                    : std::nullopt;
  }
}

std::vector<long> answer_values() {
  std::set<long> values;
  for (char op : kOps) {
    for (long a = kNumLo; a <= kNumHi; ++a) {
      for (long b = kNumLo; b <= kNumHi; ++b) {
        if (auto r = planted_result(op, a, b)) values.insert(*r);
      }
    }
  }
  return {values.begin(), values.end()};
}

void push_unique(std::vector<std::string>* tokens,
                 std::set<std::string>* seen, const std::string& tok) {
  if (tok.empty()) return;
  if (seen->insert(tok).second) tokens->push_back(tok);
}

std::vector<std::string> assemble_vocab() {
  std::vector<std::string> tokens;
  std::set<std::string> seen;
  push_unique(&tokens, &seen, Vocabulary::kPad);
  push_unique(&tokens, &seen, Vocabulary::kEot);
  for (long n = 0; n <= 2500; ++n)
    push_unique(&tokens, &seen, std::to_string(n));
  for (const char* g : {"+", "-", "\xe2\x88\x92", "*", "\xc3\x97", "/",
                        "\xc3\xb7", "\xc2\xb7"})
    push_unique(&tokens, &seen, g);
  for (const char* w : {"add", "plus", "subtract", "minus", "multiply",
                        "times", "divide"})
    push_unique(&tokens, &seen, w);
  for (const char* w : {"has", "buys", "eats", "gains", "loses", "scales",
                        "stacks", "splits", "shares"})
    push_unique(&tokens, &seen, w);
  for (const char* w : {"apples", "coins", "tokens", "crates", "more", "fold",
                        "ways"})
    push_unique(&tokens, &seen, w);
  for (const char* w : {".", "?", ",", "What", "is", "the", "value", "of"})
    push_unique(&tokens, &seen, w);
  for (char c = 'a'; c <= 'z'; ++c)
    push_unique(&tokens, &seen, std::string(1, c));
  for (const std::string& name : mwp_names()) push_unique(&tokens, &seen, name);
  // Whitespace chunks of the shipped instructions, so harness prompts
  // tokenize against the closed vocabulary.
  const InstructionSet& instr = InstructionSet::defaults();
  for (int variant = 0; variant < 4; ++variant) {
    for (bool cot : {false, true}) {
      std::istringstream in(
          instr.text(static_cast<EvalVariant>(variant), cot));
      std::string chunk;
      while (in >> chunk) push_unique(&tokens, &seen, chunk);
    }
  }
  return tokens;
}

std::vector<MwpTemplate> planted_templates() {
  struct Spec { const char* family; const char* logic; const char* text; };
  static const Spec kSpecs[] = {
      {"apples", "+", "[name] has {x} apples . [name] buys {y} more ."},
      {"apples", "-", "[name] has {x} apples . [name] eats {y} more ."},
      {"coins", "+", "[name] has {x} coins . [name] gains {y} more ."},
      {"coins", "-", "[name] has {x} coins . [name] loses {y} more ."},
      {"tokens", "*", "[name] has {x} tokens . [name] scales {y} fold ."},
      {"tokens", "/", "[name] has {x} tokens . [name] splits {y} ways ."},
      {"crates", "*", "[name] has {x} crates . [name] stacks {y} fold ."},
      {"crates", "/", "[name] has {x} crates . [name] shares {y} ways ."},
  };
  std::vector<MwpTemplate> out;
  for (const Spec& s : kSpecs) {
    out.push_back({s.family, s.logic, "numeric", s.text});
    out.push_back({s.family, s.logic, "symbolic", s.text});
  }
  return out;
}

// ---- attention wiring -----------------------------------------------------

double rope_theta(int plane, int d_head) {
  return std::pow(10000.0, -2.0 * plane / d_head);
}

// Query/key pair producing score = gain * sum_j cos((m - n - r*) theta_j)
// for query position m and key position n, via phase-shifted rotary planes.
void wire_offset_kernel(LayerWeights* layer, int head, int d_head,
                        double r_star, float gain) {
  float scale = gain * std::sqrt(static_cast<float>(d_head));
  for (int j = 0; j < kKernelPlanes; ++j) {
    double theta = rope_theta(j, d_head);
    int row = head * d_head + 2 * j;
    layer->wq.at(row, kBias) =
        scale * static_cast<float>(std::cos(r_star * theta));
    layer->wq.at(row + 1, kBias) =
        -scale * static_cast<float>(std::sin(r_star * theta));
    layer->wk.at(row, kBias) = 1.0f;
  }
}

// Content term on the near-static plane: score += boost * sum(key dims).
void wire_content_boost(LayerWeights* layer, int head, int d_head,
                        const std::vector<int>& key_dims, float boost) {
  int row = head * d_head + 2 * kContentPlane;
  layer->wq.at(row, kBias) = boost * std::sqrt(static_cast<float>(d_head));
  for (int dim : key_dims) layer->wk.at(row, dim) = 1.0f;
}

void wire_value_copy(LayerWeights* layer, int head, int d_head, int src_base,
                     int n) {
  for (int i = 0; i < n; ++i)
    layer->wv.at(head * d_head + i, src_base + i) = 1.0f;
}

void wire_output_block(LayerWeights* layer, int head, int d_head,
                       int dst_base, int n, float gain) {
  for (int i = 0; i < n; ++i)
    layer->wo.at(dst_base + i, head * d_head + i) = gain;
}

}  // namespace

PairGenOptions planted_pair_options(int n, std::uint64_t seed) {
  PairGenOptions options;
  options.n = n;
  options.seed = seed;
  options.operand_min = kNumLo;
  options.operand_max = kNumHi;
  return options;
}

std::map<std::string, std::vector<std::string>> planted_operator_groups() {
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& [token, op] : operator_readout_map())
    groups[std::string("operator:") + op].push_back(token);
  return groups;
}

PlantedModel build_planted_model() {
  PlantedModel model;

  // --- vocabulary and config ---
  Vocabulary vocab = Vocabulary::from_tokens(assemble_vocab());
  vocab.validate_arithmetic_closure();

  ModelConfig cfg;
  cfg.n_layers = 2;
  cfg.d_model = kDModel;
  cfg.n_heads = 4;
  cfg.d_head = kDModel / 4;
  cfg.d_mlp = 192;
  cfg.vocab_size = vocab.size();
  cfg.max_seq_len = 160;
  cfg.norm_eps = 1e-5f;
  cfg.validate();

  std::vector<long> answers = answer_values();
  if (static_cast<int>(answers.size()) > kAnsCap)
    fail(ErrCode::kInternal, "answer block too small for the operand grid");
  std::map<long, int> answer_slot;
  for (std::size_t i = 0; i < answers.size(); ++i)
    answer_slot[answers[i]] = static_cast<int>(i);

  ModelWeights w = allocate_weights(cfg);

  // --- embeddings ---
  const auto& op_tokens = operator_token_map();
  for (TokenId id = 0; id < vocab.size(); ++id) {
    const std::string& tok = vocab.token(id);
    float* row = w.embed.row(id);
    row[kBias] = 1.0f;
    bool digits = std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
      return c >= '0' && c <= '9';
    });
    if (digits && !tok.empty()) {
      row[kIsNum] = 1.0f;
      long value = std::stol(tok);
      if (value >= kNumLo && value <= kNumHi)
        row[kNumSrc + (value - kNumLo)] = 1.0f;
    }
    auto op = op_tokens.find(tok);
    if (op != op_tokens.end()) row[kOpSrc + op_index(op->second)] = 1.0f;
    if (tok == "." || tok == "?") row[kSentEnd] = 1.0f;
    // Equalize embedding power to d_model (mean square 1) with a filler.
    float power = 0.0f;
    for (int i = 0; i < kDModel; ++i) power += row[i] * row[i];
    row[kFillerBase + (id % kFillerCount)] =
        std::sqrt(static_cast<float>(kDModel) - power);
  }

  // --- unembedding ---
  const auto& op_reads = operator_readout_map();
  for (TokenId id = 0; id < vocab.size(); ++id) {
    const std::string& tok = vocab.token(id);
    float* row = w.unembed.row(id);
    bool digits = !tok.empty() &&
                  std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
                    return c >= '0' && c <= '9';
                  });
    if (digits) {
      long value = std::stol(tok);
      auto slot = answer_slot.find(value);
      if (slot != answer_slot.end())
        row[kAnsBlock + slot->second] = kAnsReadMag;
    }
    auto op = op_reads.find(tok);
    if (op != op_reads.end()) row[kOpDst + op_index(op->second)] = kOpReadMag;
    if (id == vocab.eot_id()) row[kEotWrite] = kEotReadMag;
  }

  // --- norms ---
  for (LayerWeights& layer : w.layers) {
    std::fill(layer.norm1.begin(), layer.norm1.end(), 1.0f);
    std::fill(layer.norm2.begin(), layer.norm2.end(), 1.0f);
  }
  std::fill(w.final_norm.begin(), w.final_norm.end(), 1.0f);

  // --- layer 0 attention: operator mover, previous-token flag, faint
  //     operand copies ---
  LayerWeights& l0 = w.layers[0];
  const int dh = cfg.d_head;
  {
    // h0: content-addressed operator mover (finds the unique operator token).
    wire_content_boost(&l0, 0, dh,
                       {kOpSrc, kOpSrc + 1, kOpSrc + 2, kOpSrc + 3},
                       kContentBoost);
    wire_value_copy(&l0, 0, dh, kOpSrc, 4);
    wire_output_block(&l0, 0, dh, kOpDst, 4, kOpDstWriteMag);
    // Second destination: the MLP-facing operator copy.
    for (int i = 0; i < 4; ++i)
      l0.wo.at(kOpMlp + i, 0 * dh + i) = kOpMlpWriteMag;

    // h1: previous-token sentence-end flag.
    wire_offset_kernel(&l0, 1, dh, kOffsetPrev, kSharpKernelGain);
    wire_value_copy(&l0, 1, dh, kSentEnd, 1);
    wire_output_block(&l0, 1, dh, kPrevSe, 1, kPrevWriteMag);

    // h2/h3: faint operand copies (abstraction-layer patches carry a whiff
    // of the operands so attention patches restore less than MLP patches).
    wire_offset_kernel(&l0, 2, dh, kOffsetFirstOperand, kOffsetKernelGain);
    wire_content_boost(&l0, 2, dh, {kIsNum}, kContentBoost);
    wire_value_copy(&l0, 2, dh, kNumSrc, 8);
    wire_output_block(&l0, 2, dh, kABlock, 8, kFaintGain);

    wire_offset_kernel(&l0, 3, dh, kOffsetSecondOperand, kOffsetKernelGain);
    wire_content_boost(&l0, 3, dh, {kIsNum}, kContentBoost);
    wire_value_copy(&l0, 3, dh, kNumSrc, 8);
    wire_output_block(&l0, 3, dh, kBBlock, 8, kFaintGain);
  }
  // Layer 0 MLP stays identically zero.

  // --- layer 1 attention: strong operand movers + operator-direction
  //     consumption ---
  LayerWeights& l1 = w.layers[1];
  {
    wire_offset_kernel(&l1, 0, dh, kOffsetFirstOperand, kOffsetKernelGain);
    wire_content_boost(&l1, 0, dh, {kIsNum}, kContentBoost);
    wire_value_copy(&l1, 0, dh, kNumSrc, 8);
    wire_output_block(&l1, 0, dh, kABlock, 8, kStrongGain);

    wire_offset_kernel(&l1, 1, dh, kOffsetSecondOperand, kOffsetKernelGain);
    wire_content_boost(&l1, 1, dh, {kIsNum}, kContentBoost);
    wire_value_copy(&l1, 1, dh, kNumSrc, 8);
    wire_output_block(&l1, 1, dh, kBBlock, 8, kStrongGain);

    // h2: self-attention erasing the visible operator direction, so the
    // logit-difference divergence is confined to the abstraction layer.
    wire_offset_kernel(&l1, 2, dh, kOffsetSelf, kSharpKernelGain);
    wire_value_copy(&l1, 2, dh, kOpDst, 4);
    wire_output_block(&l1, 2, dh, kOpDst, 4, -kEraseGain);
    // h3 unused (zero value projection).
  }

  // --- layer 1 MLP: (operator, a, b) lookup table + end-of-text trigger ---
  {
    int unit = 0;
    for (char op : kOps) {
      for (long a = kNumLo; a <= kNumHi; ++a) {
        for (long b = kNumLo; b <= kNumHi; ++b) {
          auto result = planted_result(op, a, b);
          if (!result) continue;
          if (unit >= cfg.d_mlp - 1)
            fail(ErrCode::kInternal, "d_mlp too small for the lookup table");
          l1.w_gate.at(unit, kOpMlp + op_index(op)) = kGate;
          l1.w_gate.at(unit, kABlock + (a - kNumLo)) = kGate;
          l1.w_gate.at(unit, kBBlock + (b - kNumLo)) = kGate;
          l1.w_gate.at(unit, kBias) = -2.5f * kGate;
          l1.w_in.at(unit, kBias) = 1.0f;
          l1.w_out.at(kAnsBlock + answer_slot.at(*result), unit) = kAnsOutMag;
          ++unit;
        }
      }
    }
    // <eot> right after an emitted number token.
    l1.w_gate.at(unit, kIsNum) = kGate;
    l1.w_gate.at(unit, kPrevSe) = kGate;
    l1.w_gate.at(unit, kBias) = -1.5f * kGate;
    l1.w_in.at(unit, kBias) = 1.0f;
    l1.w_out.at(kEotWrite, unit) = kEotOutMag;
  }

  validate_weights(cfg, w);
  model.bundle = ModelBundle{cfg, std::move(w), std::move(vocab)};
  model.abstraction_layer = 0;
  model.operand_layer = 1;
  model.compute_layer = 1;
  model.operand_min = kNumLo;
  model.operand_max = kNumHi;
  model.templates = planted_templates();

  // --- corpus: 20 problems, 5 per operation ---
  struct Pick { const char* family; char op; long a, b; };
  static const Pick kPicks[] = {
      {"apples", '+', 5, 3}, {"coins", '+', 4, 2}, {"apples", '+', 7, 2},
      {"coins", '+', 9, 4},  {"apples", '+', 6, 5},
      {"apples", '-', 5, 3}, {"coins", '-', 9, 4}, {"apples", '-', 8, 2},
      {"coins", '-', 7, 6},  {"apples", '-', 6, 2},
      {"tokens", '*', 5, 3}, {"crates", '*', 4, 2}, {"tokens", '*', 2, 2},
      {"crates", '*', 3, 3}, {"tokens", '*', 6, 2},
      {"tokens", '/', 8, 2}, {"crates", '/', 6, 3}, {"tokens", '/', 9, 3},
      {"crates", '/', 8, 4}, {"tokens", '/', 6, 2},
  };
  auto find_template = [&model](const std::string& family, char op,
                                const std::string& surface) -> const MwpTemplate& {
    for (const MwpTemplate& t : model.templates) {
      if (t.family == family && t.logic == std::string(1, op) &&
          t.surface == surface)
        return t;
    }
    fail(ErrCode::kInternal, "missing planted template");
  };
  const auto& names = mwp_names();
  for (std::size_t i = 0; i < std::size(kPicks); ++i) {
    const Pick& pick = kPicks[i];
    const std::string& name = names[i % names.size()];
    Problem numeric = instantiate(
        find_template(pick.family, pick.op, "numeric"), name,
        {pick.a, pick.b});
    Problem symbolic = instantiate(
        find_template(pick.family, pick.op, "symbolic"), name,
        {pick.a, pick.b});
    model.corpus.push_back(numeric);

    EvalRecord record;
    record.id = "planted-" + std::to_string(i);
    record.question = numeric.prompt;
    record.question_symbolic = symbolic.prompt;
    record.expr_numeric = numeric.expr_text;
    record.expr_symbolic = symbolic.expr_text;
    record.substitution = {{'x', Rational(pick.a)}, {'y', Rational(pick.b)}};
    record.answer = numeric.answer;
    record.tags = {"planted"};
    model.records.push_back(std::move(record));
  }

  // --- self-check: the constructor proves top-1 correctness on its corpus
  //     (bare and instruction-prefixed) and records block-level probes ---
  nlohmann::json checks = nlohmann::json::array();
  const ModelBundle& bundle = model.bundle;
  const InstructionSet& instr = InstructionSet::defaults();
  for (std::size_t i = 0; i < model.corpus.size(); ++i) {
    const Problem& problem = model.corpus[i];
    TokenId want = bundle.vocab.integer_id(problem.answer.to_long());

    std::vector<TokenId> ids = bundle.vocab.tokenize(problem.prompt);
    std::vector<TokenId> continuation = greedy_decode(bundle, ids, 2);
    bool bare_ok = continuation.size() == 2 && continuation[0] == want &&
                   continuation[1] == bundle.vocab.eot_id();

    std::string prefixed =
        instr.text(EvalVariant::kOriginal, false) + "\n" + problem.prompt;
    std::vector<TokenId> pre_ids = bundle.vocab.tokenize(prefixed);
    std::vector<TokenId> pre_cont = greedy_decode(bundle, pre_ids, 2);
    bool prefixed_ok = !pre_cont.empty() && pre_cont[0] == want;

    checks.push_back({{"prompt", problem.prompt},
                      {"expected", problem.answer.str()},
                      {"bare_top1_ok", bare_ok},
                      {"instruction_top1_ok", prefixed_ok}});
    if (!bare_ok || !prefixed_ok)
      fail(ErrCode::kInternal,
           "planted self-check failed on: " + problem.prompt);
  }

  // Block-level probe on the first addition problem.
  {
    const Problem& probe = model.corpus[0];
    std::vector<TokenId> ids = bundle.vocab.tokenize(probe.prompt);
    ActivationCache cache = run_with_cache(bundle, ids);
    const auto& mid1 = cache.at({1, SiteKind::kResidMid, SiteId::kLast});
    long a = probe.operands[0], b = probe.operands[1];
    auto expect = [](bool ok, const char* what) {
      if (!ok)
        fail(ErrCode::kInternal,
             std::string("planted probe failed: ") + what);
    };
    expect(mid1[kABlock + (a - kNumLo)] > 0.9f &&
               mid1[kABlock + (a - kNumLo)] < 1.35f,
           "first operand landing pad");
    expect(mid1[kBBlock + (b - kNumLo)] > 0.9f &&
               mid1[kBBlock + (b - kNumLo)] < 1.35f,
           "second operand landing pad");
    expect(mid1[kOpMlp + op_index('+')] > 0.9f, "operator MLP channel");
    float opdst = 0.0f;
    for (int i = 0; i < 4; ++i)
      opdst = std::max(opdst, std::abs(mid1[kOpDst + i]));
    expect(opdst < 0.05f, "operator direction not consumed at layer 1");

    const auto& mid0 = cache.at({0, SiteKind::kResidMid, SiteId::kLast});
    expect(mid0[kOpDst + op_index('+')] > 0.4f,
           "operator direction at layer 0");

    const auto& attn0 = cache.at({0, SiteKind::kAttnOut, SiteId::kLast});
    model.operator_lens_attn0 =
        direct_logit(bundle, attn0, bundle.vocab.id_of("+"));
    expect(model.operator_lens_attn0 > 1.0, "operator lens magnitude");
  }

  model.self_check = {{"problems", checks},
                      {"abstraction_layer", model.abstraction_layer},
                      {"operand_layer", model.operand_layer},
                      {"compute_layer", model.compute_layer},
                      {"operator_lens_attn0", model.operator_lens_attn0},
                      {"corpus_size", model.corpus.size()},
                      {"all_top1_correct", true}};
  return model;
}

void write_planted_files(const std::filesystem::path& dir,
                         const PlantedModel& model) {
  std::filesystem::create_directories(dir);
  save_weights(dir / "weights.bin", model.bundle.config, model.bundle.weights);
  model.bundle.vocab.save(dir / "vocab.txt");
  save_templates(dir / "templates.jsonl", model.templates);
  save_corpus(dir / "corpus.jsonl", model.records);
  std::ofstream out(dir / "selfcheck.json", std::ios::binary);
  if (!out)
    fail(ErrCode::kIo, "cannot write " + (dir / "selfcheck.json").string());
  out << model.self_check.dump(2) << '\n';
}

}  // namespace mathlens
