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

#include "mathlens/client.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include "httplib.h"
#include "nlohmann/json.hpp"

namespace mathlens {

BuiltinClient::BuiltinClient(std::shared_ptr<const ModelBundle> bundle,
                             std::string id)
    : bundle_(std::move(bundle)), id_(std::move(id)) {
  if (!bundle_) fail(ErrCode::kInvalidArg, "null model bundle");
}

std::string BuiltinClient::complete(const std::string& prompt, int max_tokens,
                                    double temperature) {
  count_call();
  if (temperature != 0.0)
    fail(ErrCode::kInvalidArg, "builtin client is greedy (temperature 0)");
  std::vector<TokenId> ids = bundle_->vocab.tokenize(prompt);
  int budget = std::min(
      max_tokens,
      bundle_->config.max_seq_len - static_cast<int>(ids.size()));
  if (budget <= 0)
    fail(ErrCode::kOverflow, "prompt leaves no room for a completion");
  std::vector<TokenId> continuation = greedy_decode(*bundle_, ids, budget);
  if (!continuation.empty() && continuation.back() == bundle_->vocab.eot_id())
    continuation.pop_back();
  return "#### " + bundle_->vocab.detokenize(continuation);
}

HttpChatClient::HttpChatClient(HttpClientConfig config)
    : config_(std::move(config)) {
  if (config_.endpoint.empty())
    fail(ErrCode::kInvalidArg, "empty endpoint");
}

std::string HttpChatClient::complete(const std::string& prompt,
                                     int max_tokens, double temperature) {
  count_call();
  nlohmann::json request{
      {"model", config_.model},
      {"messages",
       nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", temperature},
      {"max_tokens", max_tokens}};
  std::string body = request.dump();

  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      auto delay = std::chrono::duration<double>(
          config_.backoff_seconds * std::pow(2.0, attempt - 1));
      std::this_thread::sleep_for(
          std::chrono::duration_cast<std::chrono::milliseconds>(delay));
    }
    httplib::Client http(config_.endpoint);
    http.set_connection_timeout(config_.timeout_seconds, 0);
    http.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.auth_token.empty())
      headers.emplace("Authorization", "Bearer " + config_.auth_token);
    auto res = http.Post(config_.path, headers, body, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_failure = "HTTP " + std::to_string(res->status);
      if (res->status >= 400 && res->status < 500 && res->status != 429)
        break;  // client errors do not heal with retries
      continue;
    }
    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) {
      last_failure = "invalid JSON in response";
      continue;
    }
    try {
      const auto& choice = reply.at("choices").at(0);
      if (choice.contains("message"))
        return choice["message"].at("content").get<std::string>();
      return choice.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      last_failure = std::string("unexpected response shape: ") + e.what();
      break;
    }
  }
  fail(ErrCode::kNet, "completion failed after retries: " + last_failure);
}

MockClient::MockClient(std::map<std::string, std::string> by_prompt,
                       std::string fallback)
    : by_prompt_(std::move(by_prompt)), fallback_(std::move(fallback)) {}

std::string MockClient::complete(const std::string& prompt, int /*max_tokens*/,
                                 double /*temperature*/) {
  count_call();
  auto it = by_prompt_.find(prompt);
  return it == by_prompt_.end() ? fallback_ : it->second;
}

}  // namespace mathlens
