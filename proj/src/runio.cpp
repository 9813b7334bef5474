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

#include "mathlens/runio.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "mathlens/attribution.hpp"
#include "mathlens/corpus.hpp"
#include "mathlens/harness.hpp"
#include "mathlens/mwp.hpp"
#include "mathlens/planted.hpp"
#include "nlohmann/json.hpp"

namespace mathlens {

namespace {

using nlohmann::json;

std::string iso_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string trim_copy(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace((unsigned char)s[b])) ++b;
  while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
  return s.substr(b, e - b);
}

RunManifest base_manifest(const std::string& command) {
  RunManifest m;
  m.command = command;
  m.created_at = iso_now();
  return m;
}

}  // namespace

std::string RunManifest::config_hash() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [key, value] : config) {  // std::map is sorted
    mix(key);
    mix("=");
    mix(value);
    mix("\n");
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void RunManifest::write(const std::filesystem::path& path) const {
  json j{{"command", command},
         {"config", config},
         {"config_hash", config_hash()},
         {"inputs", inputs},
         {"outputs", outputs},
         {"created_at", created_at},
         {"version", version}};
  write_text_file(path, j.dump(2) + "\n");
}

std::map<std::string, std::string> parse_kv_config(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrCode::kIo, "cannot open config " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim_copy(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrCode::kFormat, path.string() + ": line " +
                                 std::to_string(lineno) + " is not key=value");
    std::string key = trim_copy(line.substr(0, eq));
    std::string value = trim_copy(line.substr(eq + 1));
    if (key.empty())
      fail(ErrCode::kFormat,
           path.string() + ": empty key at line " + std::to_string(lineno));
    out[key] = value;
  }
  return out;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrCode::kIo, "short write to " + path.string());
}

ModelBundle load_model_dir(const std::filesystem::path& dir) {
  return load_model(dir / "weights.bin", dir / "vocab.txt");
}

namespace {

// Pulls the accuracy column back out of a summary CSV written above.
double read_report_accuracy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrCode::kIo, "cannot open " + path.string());
  std::string header, row;
  if (!std::getline(in, header) || !std::getline(in, row))
    fail(ErrCode::kFormat, "truncated report " + path.string());
  std::vector<std::string> names, values;
  auto split = [](const std::string& line, std::vector<std::string>* out) {
    std::istringstream stream(line);
    std::string cell;
    while (std::getline(stream, cell, ',')) out->push_back(cell);
  };
  split(header, &names);
  split(row, &values);
  for (std::size_t i = 0; i < names.size() && i < values.size(); ++i) {
    if (names[i] == "accuracy") return std::stod(values[i]);
  }
  fail(ErrCode::kFormat, "no accuracy column in " + path.string());
}

}  // namespace

GenDataResult cmd_gen_data(const GenDataArgs& args) {
  std::vector<MwpTemplate> templates = load_templates(args.templates_path);
  PairGenResult generated;
  if (args.kind == "abstraction" || args.kind == "computation") {
    PairGenOptions options;
    options.n = args.n;
    options.seed = args.seed;
    options.operand_min = args.operand_min;
    options.operand_max = args.operand_max;
    generated = args.kind == "abstraction"
                    ? make_abstraction_pairs(templates, options)
                    : make_computation_pairs(templates, options);
  } else if (args.kind == "cross") {
    CrossPairOptions options;
    options.n = args.n;
    options.seed = args.seed;
    options.operand_min = args.operand_min;
    options.operand_max = args.operand_max;
    options.mode = args.mode == "random_template" ? CrossMode::kRandomTemplate
                                                  : CrossMode::kPairedTemplate;
    if (args.mode != "random_template" && args.mode != "paired_template")
      fail(ErrCode::kInvalidArg, "unknown cross mode '" + args.mode + "'");
    options.clean_logic = args.clean_logic;
    options.corrupted_logic = args.corrupted_logic;
    options.numeric_clean = args.numeric_clean;
    generated = make_cross_pairs(templates, options);
  } else {
    fail(ErrCode::kInvalidArg, "unknown pair kind '" + args.kind + "'");
  }

  save_pairs(args.out_path, generated.pairs);
  if (!generated.rejections.empty()) {
    std::ostringstream log;
    for (const std::string& reason : generated.rejections)
      log << reason << '\n';
    write_text_file(args.out_path + ".rejections.txt", log.str());
  }

  RunManifest manifest = base_manifest("gen-data");
  manifest.config = {{"kind", args.kind},
                     {"n", std::to_string(args.n)},
                     {"seed", std::to_string(args.seed)},
                     {"operand_min", std::to_string(args.operand_min)},
                     {"operand_max", std::to_string(args.operand_max)},
                     {"mode", args.mode},
                     {"clean_logic", args.clean_logic},
                     {"corrupted_logic", args.corrupted_logic},
                     {"numeric_clean", args.numeric_clean ? "1" : "0"}};
  manifest.inputs = {args.templates_path};
  manifest.outputs = {args.out_path};
  if (!generated.rejections.empty())
    manifest.outputs.push_back(args.out_path + ".rejections.txt");
  manifest.write(args.out_path + ".manifest.json");

  return {static_cast<int>(generated.pairs.size()),
          static_cast<int>(generated.rejections.size())};
}

void cmd_build_planted(const std::filesystem::path& out_dir) {
  PlantedModel model = build_planted_model();
  write_planted_files(out_dir, model);

  // Shipable lens groups for the planted vocabulary.
  json groups = json::object();
  for (const auto& [label, tokens] : planted_operator_groups())
    groups[label] = tokens;
  write_text_file(out_dir / "token_groups.json", groups.dump(2) + "\n");

  RunManifest manifest = base_manifest("build-planted");
  manifest.config = {
      {"abstraction_layer", std::to_string(model.abstraction_layer)},
      {"operand_layer", std::to_string(model.operand_layer)},
      {"compute_layer", std::to_string(model.compute_layer)},
      {"operand_min", std::to_string(model.operand_min)},
      {"operand_max", std::to_string(model.operand_max)}};
  for (const char* name : {"weights.bin", "vocab.txt", "templates.jsonl",
                           "corpus.jsonl", "selfcheck.json",
                           "token_groups.json"})
    manifest.outputs.push_back((out_dir / name).string());
  manifest.write(out_dir / "manifest.json");
}

namespace {

std::vector<TokenId> token_ids(const Vocabulary& vocab, const json& names) {
  std::vector<TokenId> ids;
  for (const auto& name : names) ids.push_back(vocab.id_of(name));
  return ids;
}

}  // namespace

void cmd_lens(const LensRunArgs& args) {
  ModelBundle bundle = load_model_dir(args.model_dir);

  std::ifstream groups_in(args.groups_path);
  if (!groups_in) fail(ErrCode::kIo, "cannot open " + args.groups_path);
  json groups_json = json::parse(groups_in, nullptr, false);
  if (groups_json.is_discarded())
    fail(ErrCode::kFormat, "invalid JSON in " + args.groups_path);
  std::vector<TokenGroup> groups;
  for (auto& [label, members] : groups_json.items())
    groups.push_back({label, token_ids(bundle.vocab, members)});

  std::vector<PromptSpec> prompts;
  std::ifstream prompts_in(args.prompts_path);
  if (!prompts_in) fail(ErrCode::kIo, "cannot open " + args.prompts_path);
  std::string line;
  while (std::getline(prompts_in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      fail(ErrCode::kFormat, "invalid JSONL in " + args.prompts_path);
    PromptSpec spec;
    spec.text = j.at("text").get<std::string>();
    if (j.contains("groups")) {
      for (auto& [label, members] : j["groups"].items())
        spec.local_groups[label] = token_ids(bundle.vocab, members);
    }
    prompts.push_back(std::move(spec));
  }

  std::vector<SiteKind> kinds;
  std::vector<std::string> kind_names =
      args.kinds.empty() ? std::vector<std::string>{"attn_out", "mlp_out",
                                                    "resid_mid", "resid_final"}
                         : args.kinds;
  for (const std::string& name : kind_names)
    kinds.push_back(site_kind_from_name(name));

  LensCurve curve = lens_sweep(bundle, prompts, groups, kinds);
  write_text_file(args.out_csv, curve.to_csv());

  RunManifest manifest = base_manifest("lens");
  manifest.config = {{"model", args.model_dir.string()},
                     {"n_prompts", std::to_string(curve.n_prompts)},
                     {"n_skipped", std::to_string(curve.n_skipped)}};
  for (std::size_t i = 0; i < kind_names.size(); ++i)
    manifest.config["kind." + std::to_string(i)] = kind_names[i];
  manifest.inputs = {args.prompts_path, args.groups_path};
  manifest.outputs = {args.out_csv};
  manifest.write(args.out_csv + ".manifest.json");
}

void cmd_patch(const PatchRunArgs& args) {
  ModelBundle bundle = load_model_dir(args.model_dir);
  std::vector<PromptPair> pairs =
      bind_pairs(bundle.vocab, load_pairs(args.pairs_path));
  for (const PromptPair& pair : pairs) {
    // Symbolic cleans have no numeric answer token, so logit-difference
    // effects are undefined for them; they belong to crosspatch.
    if (pair.kind == PairKind::kCrossSymbolic)
      fail(ErrCode::kInvalidArg,
           "patch expects pairs with numeric clean answers; run crosspatch "
           "for cross_symbolic pairs");
  }

  std::vector<SiteId> sites;
  if (args.sites.empty()) {
    sites = default_patch_sites(bundle.config.n_layers);
  } else {
    for (const std::string& name : args.sites) {
      SiteKind kind = site_kind_from_name(name);
      for (int layer = 0; layer < bundle.config.n_layers; ++layer)
        sites.push_back({layer, kind, SiteId::kLast});
    }
  }

  PatchReport report = patching_sweep(bundle, pairs, sites);
  write_text_file(args.out_csv, report.to_csv());

  RunManifest manifest = base_manifest("patch");
  manifest.config = {{"model", args.model_dir.string()},
                     {"n_pairs", std::to_string(report.n_pairs)}};
  manifest.inputs = {args.pairs_path};
  manifest.outputs = {args.out_csv};
  manifest.write(args.out_csv + ".manifest.json");
}

void cmd_crosspatch(const PatchRunArgs& args) {
  ModelBundle bundle = load_model_dir(args.model_dir);
  std::vector<PromptPair> pairs =
      bind_pairs(bundle.vocab, load_pairs(args.pairs_path));
  for (const PromptPair& pair : pairs) {
    if (pair.kind != PairKind::kCrossNumeric &&
        pair.kind != PairKind::kCrossSymbolic)
      fail(ErrCode::kInvalidArg,
           "crosspatch expects cross_numeric/cross_symbolic pairs");
  }
  CrossPatchTrace trace = cross_patch_mean(bundle, pairs);
  write_text_file(args.out_csv, trace.to_csv());

  RunManifest manifest = base_manifest("crosspatch");
  manifest.config = {{"model", args.model_dir.string()},
                     {"n_pairs", std::to_string(pairs.size())}};
  manifest.inputs = {args.pairs_path};
  manifest.outputs = {args.out_csv};
  manifest.write(args.out_csv + ".manifest.json");
}

EvalRunResult cmd_eval(const EvalRunArgs& args) {
  std::vector<EvalRecord> corpus =
      args.fieldmap_path.empty()
          ? load_corpus(args.corpus_path)
          : load_mapped_corpus(args.corpus_path, args.fieldmap_path);

  AblationMode ablation = ablation_from_name(args.ablation);
  if (ablation != AblationMode::kOriginal) {
    for (EvalRecord& record : corpus)
      record = apply_symbol_ablation(record, ablation);
  }

  std::filesystem::path out_dir(args.out_dir);
  std::filesystem::create_directories(out_dir);

  EvalRunResult result;
  if (!args.skip_validate) {
    std::ostringstream flags;
    for (const EvalRecord& record : corpus) {
      if (record.expr_symbolic.empty()) continue;
      if (auto reason = validate_symbolic_variant(record)) {
        ++result.flagged;
        flags << record.id << ": " << *reason << '\n';
      }
    }
    if (result.flagged > 0)
      write_text_file(out_dir / "validation_flags.txt", flags.str());
  }

  std::map<std::string, std::string> config;
  if (!args.config_path.empty()) config = parse_kv_config(args.config_path);
  auto config_int = [&config](const char* key, int fallback) {
    auto it = config.find(key);
    return it == config.end() ? fallback : std::stoi(it->second);
  };

  std::unique_ptr<ModelClient> client;
  std::shared_ptr<const ModelBundle> bundle;
  if (!args.builtin_dir.empty()) {
    bundle = std::make_shared<const ModelBundle>(
        load_model_dir(args.builtin_dir));
    client = std::make_unique<BuiltinClient>(bundle);
  } else {
    HttpClientConfig http;
    http.endpoint = !args.endpoint.empty()
                        ? args.endpoint
                        : (config.count("endpoint") ? config["endpoint"] : "");
    if (http.endpoint.empty())
      fail(ErrCode::kInvalidArg, "eval needs --endpoint or --builtin");
    if (config.count("path")) http.path = config["path"];
    if (config.count("model")) http.model = config["model"];
    std::string auth_env =
        config.count("auth_env") ? config["auth_env"] : "MATHLENS_API_TOKEN";
    if (const char* token = std::getenv(auth_env.c_str()))
      http.auth_token = token;
    http.max_retries = config_int("retries", 3);
    http.timeout_seconds = config_int("timeout_s", 120);
    client = std::make_unique<HttpChatClient>(http);
  }

  EvalOptions options;
  options.setting = {variant_from_name(args.setting), args.cot};
  options.budget.cot_tokens = config_int("cot_budget", 512);
  options.budget.nocot_tokens = config_int("nocot_budget", 64);
  options.concurrency = config_int("concurrency", 1);
  // Ablated runs answer different prompts under the same record ids, so
  // they must not resume from (or pollute) the unablated journal.
  options.journal_path =
      out_dir / (ablation == AblationMode::kOriginal
                     ? "journal.jsonl"
                     : "journal." + args.ablation + ".jsonl");

  // Outputs are namespaced by (setting, ablation, mode) so CoT and no-CoT
  // runs of the same corpus can live in one directory and be compared.
  const std::string mode = args.cot ? "cot" : "no_cot";
  const std::string label =
      args.setting +
      (ablation == AblationMode::kOriginal ? "" : "." + args.ablation);
  const std::string stem = label + "." + mode;
  EvalReport report = run_eval(*client, corpus, options);
  write_text_file(out_dir / ("report." + stem + ".csv"),
                  report.summary_csv());
  write_text_file(out_dir / ("verdicts." + stem + ".csv"),
                  report.verdicts_csv());

  RunManifest manifest = base_manifest("eval");
  manifest.config = {{"setting", args.setting},
                     {"cot", args.cot ? "1" : "0"},
                     {"ablation", args.ablation},
                     {"model", report.model_id},
                     {"decode_budget", std::to_string(report.decode_budget)},
                     {"skip_validate", args.skip_validate ? "1" : "0"}};
  manifest.inputs = {args.corpus_path};
  if (!args.fieldmap_path.empty())
    manifest.inputs.push_back(args.fieldmap_path);
  manifest.outputs = {(out_dir / ("report." + stem + ".csv")).string(),
                      (out_dir / ("verdicts." + stem + ".csv")).string(),
                      (out_dir / "journal.jsonl").string()};

  // When the counterpart report is already present, record the CoT delta.
  const std::string other_stem = label + "." + (args.cot ? "no_cot" : "cot");
  std::filesystem::path counterpart = out_dir / ("report." + other_stem +
                                                 ".csv");
  if (std::filesystem::exists(counterpart)) {
    double other_accuracy = read_report_accuracy(counterpart);
    double with_cot = args.cot ? report.accuracy() : other_accuracy;
    double without_cot = args.cot ? other_accuracy : report.accuracy();
    char line[160];
    std::snprintf(line, sizeof(line), "setting,delta_points\n%s,%.1f\n",
                  label.c_str(), 100.0 * (with_cot - without_cot));
    write_text_file(out_dir / ("cot_delta." + label + ".csv"), line);
    manifest.outputs.push_back(
        (out_dir / ("cot_delta." + label + ".csv")).string());
  }
  manifest.write(out_dir / ("manifest." + stem + ".json"));

  result.total = report.total;
  result.accuracy = report.accuracy();
  result.pretty = report.pretty();
  return result;
}

}  // namespace mathlens
