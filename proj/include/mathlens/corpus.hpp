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

#ifndef MATHLENS_CORPUS_HPP_
#define MATHLENS_CORPUS_HPP_

#include <filesystem>
#include <vector>

#include "mathlens/evalset.hpp"

namespace mathlens {

// Native corpus JSONL: one record per line with
//   {id, question, question_symbolic, expr_numeric, expr_symbolic,
//    substitution, answer, tags}
// answer and substitution values are exact rationals written as strings
// ("10", "2/3"); plain JSON integers are accepted too.
std::vector<EvalRecord> load_corpus(const std::filesystem::path& path);
void save_corpus(const std::filesystem::path& path,
                 const std::vector<EvalRecord>& records);

// Converts a raw dataset (user-supplied JSONL) into native records through a
// field-mapping config:
//   {"question": "<field>", "answer": "<field>",
//    "answer_extract": "verbatim" | "after_####",
//    "question_symbolic": "<field>", "expr_numeric": "<field>",
//    "expr_symbolic": "<field>", "substitution": "<field>",
//    "join_question": ["<field>", "<field>"], "id": "<field>"}
// Absent optional fields yield empty strings. Shipped configs cover the
// GSM8K and SVAMP layouts.
std::vector<EvalRecord> load_mapped_corpus(
    const std::filesystem::path& data_path,
    const std::filesystem::path& fieldmap_path);

}  // namespace mathlens

#endif  // MATHLENS_CORPUS_HPP_
