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

#include "mathlens/corpus.hpp"

#include <fstream>
#include <functional>

#include "mathlens/answers.hpp"
#include "nlohmann/json.hpp"

namespace mathlens {

using nlohmann::json;

namespace {

Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
    return Rational::parse(buf);
  }
  fail(ErrCode::kFormat, "cannot read rational from JSON value " + j.dump());
}

Substitution substitution_from_json(const json& j) {
  Substitution subst;
  if (j.is_null()) return subst;
  for (auto& [key, value] : j.items()) {
    if (key.size() != 1)
      fail(ErrCode::kFormat, "substitution key '" + key +
                                 "' is not a single letter");
    subst[key[0]] = rational_from_json(value);
  }
  return subst;
}

json substitution_to_json(const Substitution& subst) {
  json j = json::object();
  for (const auto& [var, value] : subst) j[std::string(1, var)] = value.str();
  return j;
}

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const json&, int)>& fn) {
  std::ifstream in(path);
  if (!in) fail(ErrCode::kIo, "cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      fail(ErrCode::kFormat,
           path.string() + ": bad JSON at line " + std::to_string(lineno));
    fn(j, lineno);
  }
}

}  // namespace

std::vector<EvalRecord> load_corpus(const std::filesystem::path& path) {
  std::vector<EvalRecord> records;
  for_each_jsonl(path, [&records, &path](const json& j, int lineno) {
    EvalRecord r;
    r.id = j.contains("id") && j["id"].is_string()
               ? j["id"].get<std::string>()
               : (j.contains("id") ? j["id"].dump()
                                   : "line-" + std::to_string(lineno));
    r.question = j.value("question", "");
    r.question_symbolic = j.value("question_symbolic", "");
    r.expr_numeric = j.value("expr_numeric", "");
    r.expr_symbolic = j.value("expr_symbolic", "");
    if (j.contains("substitution"))
      r.substitution = substitution_from_json(j["substitution"]);
    if (!j.contains("answer"))
      fail(ErrCode::kFormat,
           path.string() + ": record at line " + std::to_string(lineno) +
               " has no answer");
    r.answer = rational_from_json(j["answer"]);
    if (j.contains("tags"))
      for (const auto& t : j["tags"]) r.tags.push_back(t.get<std::string>());
    records.push_back(std::move(r));
  });
  return records;
}

void save_corpus(const std::filesystem::path& path,
                 const std::vector<EvalRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrCode::kIo, "cannot write " + path.string());
  for (const EvalRecord& r : records) {
    json j{{"id", r.id},
           {"question", r.question},
           {"question_symbolic", r.question_symbolic},
           {"expr_numeric", r.expr_numeric},
           {"expr_symbolic", r.expr_symbolic},
           {"substitution", substitution_to_json(r.substitution)},
           {"answer", r.answer.str()},
           {"tags", r.tags}};
    out << j.dump() << '\n';
  }
}

std::vector<EvalRecord> load_mapped_corpus(
    const std::filesystem::path& data_path,
    const std::filesystem::path& fieldmap_path) {
  std::ifstream mapin(fieldmap_path);
  if (!mapin) fail(ErrCode::kIo, "cannot open " + fieldmap_path.string());
  json map = json::parse(mapin, nullptr, false);
  if (map.is_discarded())
    fail(ErrCode::kFormat, "invalid JSON in " + fieldmap_path.string());

  auto field = [&map](const char* key) { return map.value(key, ""); };
  std::string answer_extract = map.value("answer_extract", "verbatim");

  std::vector<EvalRecord> records;
  for_each_jsonl(data_path, [&](const json& j, int lineno) {
    EvalRecord r;
    std::string id_field = field("id");
    r.id = !id_field.empty() && j.contains(id_field)
               ? (j[id_field].is_string() ? j[id_field].get<std::string>()
                                          : j[id_field].dump())
               : "line-" + std::to_string(lineno);
    if (map.contains("join_question")) {
      for (const auto& part : map["join_question"]) {
        std::string text = j.value(part.get<std::string>(), "");
        if (text.empty()) continue;
        if (!r.question.empty()) r.question += " ";
        r.question += text;
      }
    } else {
      r.question = j.value(field("question"), "");
    }
    if (!field("question_symbolic").empty())
      r.question_symbolic = j.value(field("question_symbolic"), "");
    if (!field("expr_numeric").empty())
      r.expr_numeric = j.value(field("expr_numeric"), "");
    if (!field("expr_symbolic").empty())
      r.expr_symbolic = j.value(field("expr_symbolic"), "");
    if (!field("substitution").empty() && j.contains(field("substitution")))
      r.substitution = substitution_from_json(j[field("substitution")]);

    std::string answer_field = field("answer");
    if (!j.contains(answer_field))
      fail(ErrCode::kFormat, data_path.string() + ": line " +
                                 std::to_string(lineno) + " has no '" +
                                 answer_field + "'");
    if (answer_extract == "after_####") {
      std::string solution = j[answer_field].get<std::string>();
      auto tail = extract_answer(solution, AnswerKind::kInteger);
      if (!tail)
        fail(ErrCode::kFormat, data_path.string() + ": line " +
                                   std::to_string(lineno) +
                                   " has no '####' answer");
      r.answer = parse_numeric(*tail);
    } else {
      r.answer = rational_from_json(j[answer_field]);
    }
    records.push_back(std::move(r));
  });
  return records;
}

}  // namespace mathlens
