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

#ifndef MATHLENS_HARNESS_HPP_
#define MATHLENS_HARNESS_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mathlens/client.hpp"
#include "mathlens/evalset.hpp"

namespace mathlens {

struct EvalBudget {
  int cot_tokens = 512;    // CoT generations are capped here
  int nocot_tokens = 64;   // enough for "#### <answer>" forms
  int tokens_for(bool cot) const { return cot ? cot_tokens : nocot_tokens; }
};

struct EvalOptions {
  EvalSetting setting;
  EvalBudget budget;
  int concurrency = 1;  // bounded in-flight client calls
  std::filesystem::path journal_path;  // empty disables the journal
  const InstructionSet* instructions = nullptr;  // defaults when null
};

struct ItemResult {
  std::string id;
  Verdict verdict = Verdict::kIncorrect;
  std::string generation;
  std::string error;  // transport failure detail, if any
};

struct EvalReport {
  EvalSetting setting;
  std::string model_id;
  int decode_budget = 0;
  int total = 0;
  int correct = 0;
  int incorrect = 0;
  int extraction_failure = 0;
  int parse_failure = 0;
  std::vector<ItemResult> items;  // corpus order

  double accuracy() const {
    return total > 0 ? static_cast<double>(correct) / total : 0.0;
  }
  std::string summary_csv() const;
  std::string verdicts_csv() const;
  std::string pretty() const;
};

// One completion per record at temperature 0; resumable through the on-disk
// journal (a journaled record costs no client call and keeps its verdict).
// Transport failures after the client's own retries score as extraction
// failures with the error recorded.
EvalReport run_eval(ModelClient& client,
                    const std::vector<EvalRecord>& corpus,
                    const EvalOptions& options);

// Accuracy difference in points: 100 * (cot - nocot). Both reports must
// cover the same corpus and variant.
double cot_delta(const EvalReport& with_cot, const EvalReport& without_cot);

// Table with one row per setting (original first) and one column per model,
// in the layout of the usual CoT-delta summaries.
std::string format_cot_delta_table(
    const std::vector<std::string>& model_names,
    const std::map<EvalVariant, std::vector<double>>& deltas);

}  // namespace mathlens

#endif  // MATHLENS_HARNESS_HPP_
