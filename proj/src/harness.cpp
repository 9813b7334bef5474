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

#include "mathlens/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

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

Verdict verdict_from_name(const std::string& name) {
  if (name == "correct") return Verdict::kCorrect;
  if (name == "incorrect") return Verdict::kIncorrect;
  if (name == "extraction_failure") return Verdict::kExtractionFailure;
  if (name == "parse_failure") return Verdict::kParseFailure;
  fail(ErrCode::kFormat, "unknown verdict '" + name + "' in journal");
}

std::string journal_key(const std::string& id, const EvalSetting& setting) {
  return id + "\x1f" + variant_name(setting.variant) +
         (setting.cot ? "\x1f" "cot" : "\x1f" "no_cot");
}

}  // namespace

std::string EvalReport::summary_csv() const {
  std::ostringstream out;
  out << "setting,cot,model,total,correct,incorrect,extraction_failure,"
         "parse_failure,accuracy,decode_budget\n";
  char acc[32];
  std::snprintf(acc, sizeof(acc), "%.6f", accuracy());
  out << variant_name(setting.variant) << ',' << (setting.cot ? 1 : 0) << ','
      << model_id << ',' << total << ',' << correct << ',' << incorrect << ','
      << extraction_failure << ',' << parse_failure << ',' << acc << ','
      << decode_budget << '\n';
  return out.str();
}

std::string EvalReport::verdicts_csv() const {
  std::ostringstream out;
  out << "id,verdict\n";
  for (const ItemResult& item : items)
    out << item.id << ',' << verdict_name(item.verdict) << '\n';
  return out.str();
}

std::string EvalReport::pretty() const {
  std::ostringstream out;
  char acc[32];
  std::snprintf(acc, sizeof(acc), "%.1f", 100.0 * accuracy());
  out << variant_name(setting.variant) << (setting.cot ? " (CoT)" : " (no CoT)")
      << " on " << total << " records: " << acc << "% ("
      << correct << " correct, " << incorrect << " incorrect, "
      << extraction_failure << " extraction failures, " << parse_failure
      << " parse failures)";
  return out.str();
}

EvalReport run_eval(ModelClient& client,
                    const std::vector<EvalRecord>& corpus,
                    const EvalOptions& options) {
  if (corpus.empty())
    fail(ErrCode::kInvalidArg, "refusing to evaluate an empty corpus");
  const InstructionSet& instructions = options.instructions
                                           ? *options.instructions
                                           : InstructionSet::defaults();

  // Resume: journaled (id, setting) entries keep their generation/verdict.
  std::map<std::string, ItemResult> done;
  if (!options.journal_path.empty() &&
      std::filesystem::exists(options.journal_path)) {
    std::ifstream in(options.journal_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded())
        fail(ErrCode::kFormat,
             "corrupt journal line in " + options.journal_path.string());
      EvalSetting entry_setting{variant_from_name(j.at("setting")),
                                j.at("cot").get<bool>()};
      if (entry_setting.variant != options.setting.variant ||
          entry_setting.cot != options.setting.cot)
        continue;
      ItemResult item;
      item.id = j.at("id").get<std::string>();
      item.generation = j.value("generation", "");
      item.verdict = verdict_from_name(j.at("verdict"));
      item.error = j.value("error", "");
      done[journal_key(item.id, options.setting)] = std::move(item);
    }
  }

  std::ofstream journal;
  std::mutex journal_mutex;
  if (!options.journal_path.empty()) {
    std::filesystem::create_directories(
        options.journal_path.parent_path().empty()
            ? "."
            : options.journal_path.parent_path());
    journal.open(options.journal_path, std::ios::app);
    if (!journal)
      fail(ErrCode::kIo,
           "cannot open journal " + options.journal_path.string());
  }

  int budget = options.budget.tokens_for(options.setting.cot);
  std::vector<ItemResult> items(corpus.size());
  std::vector<int> pending;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto hit = done.find(journal_key(corpus[i].id, options.setting));
    if (hit != done.end()) {
      items[i] = hit->second;
    } else {
      pending.push_back(static_cast<int>(i));
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t at = next.fetch_add(1);
      if (at >= pending.size()) return;
      int i = pending[at];
      const EvalRecord& record = corpus[static_cast<std::size_t>(i)];
      ItemResult item;
      item.id = record.id;
      std::string started = iso_now();
      try {
        std::string prompt =
            build_prompt(options.setting, record, instructions);
        item.generation = client.complete(prompt, budget, 0.0);
      } catch (const std::exception& e) {
        item.error = e.what();  // scored below as a failed generation
        item.generation.clear();
      }
      item.verdict = score(options.setting, item.generation, record);
      if (journal.is_open()) {
        json line{{"id", item.id},
                  {"setting", variant_name(options.setting.variant)},
                  {"cot", options.setting.cot},
                  {"generation", item.generation},
                  {"verdict", verdict_name(item.verdict)},
                  {"started_at", started},
                  {"finished_at", iso_now()}};
        if (!item.error.empty()) line["error"] = item.error;
        // Endpoint replies are not guaranteed to be valid UTF-8; replace
        // rather than throw mid-journal.
        std::string serialized =
            line.dump(-1, ' ', false, json::error_handler_t::replace);
        std::lock_guard<std::mutex> hold(journal_mutex);
        journal << serialized << '\n';
        journal.flush();
      }
      items[static_cast<std::size_t>(i)] = std::move(item);
    }
  };

  int n_workers = std::max(1, options.concurrency);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < n_workers; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  EvalReport report;
  report.setting = options.setting;
  report.model_id = client.model_id();
  report.decode_budget = budget;
  report.total = static_cast<int>(corpus.size());
  report.items = std::move(items);
  for (const ItemResult& item : report.items) {
    switch (item.verdict) {
      case Verdict::kCorrect: ++report.correct; break;
      case Verdict::kIncorrect: ++report.incorrect; break;
      case Verdict::kExtractionFailure: ++report.extraction_failure; break;
      case Verdict::kParseFailure: ++report.parse_failure; break;
    }
  }
  return report;
}

double cot_delta(const EvalReport& with_cot, const EvalReport& without_cot) {
  if (with_cot.setting.variant != without_cot.setting.variant)
    fail(ErrCode::kInvalidArg, "reports cover different settings");
  if (!with_cot.setting.cot || without_cot.setting.cot)
    fail(ErrCode::kInvalidArg, "expected one CoT and one no-CoT report");
  if (with_cot.total != without_cot.total)
    fail(ErrCode::kInvalidArg, "reports cover different corpora");
  for (std::size_t i = 0; i < with_cot.items.size(); ++i) {
    if (with_cot.items[i].id != without_cot.items[i].id)
      fail(ErrCode::kInvalidArg, "reports cover different corpora");
  }
  return 100.0 * (with_cot.accuracy() - without_cot.accuracy());
}

std::string format_cot_delta_table(
    const std::vector<std::string>& model_names,
    const std::map<EvalVariant, std::vector<double>>& deltas) {
  static const std::pair<EvalVariant, const char*> kRows[] = {
      {EvalVariant::kOriginal, "Original"},
      {EvalVariant::kArithmeticComputation, "Arith. Comp."},
      {EvalVariant::kNumericalAbstraction, "Numerical Abstr."},
      {EvalVariant::kSymbolicAbstraction, "Symbolic Abstr."},
  };
  std::ostringstream out;
  out << "Delta Accuracy";
  for (const std::string& name : model_names) out << " | " << name;
  out << '\n';
  for (const auto& [variant, label] : kRows) {
    out << label;
    auto it = deltas.find(variant);
    if (it == deltas.end())
      fail(ErrCode::kInvalidArg,
           std::string("missing deltas for setting ") + label);
    if (it->second.size() != model_names.size())
      fail(ErrCode::kInvalidArg, "delta column count mismatch");
    char buf[32];
    for (double d : it->second) {
      std::snprintf(buf, sizeof(buf), "%.1f", d);
      out << " | " << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mathlens
