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

#ifndef MATHLENS_CLIENT_HPP_
#define MATHLENS_CLIENT_HPP_

#include <atomic>
#include <map>
#include <memory>
#include <string>

#include "mathlens/model.hpp"

namespace mathlens {

// Completion backend. The harness always calls with temperature 0.
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string complete(const std::string& prompt, int max_tokens,
                               double temperature) = 0;
  virtual std::string model_id() const = 0;

  int calls_made() const { return calls_; }

 protected:
  void count_call() { ++calls_; }

 private:
  std::atomic<int> calls_{0};
};

// Greedy decoding over a loaded bundle. The toy models emit bare answer
// tokens, so completions are formatted as "#### <text>" to satisfy the
// harness extraction convention that instruction-following models produce
// themselves.
class BuiltinClient : public ModelClient {
 public:
  explicit BuiltinClient(std::shared_ptr<const ModelBundle> bundle,
                         std::string id = "builtin");
  std::string complete(const std::string& prompt, int max_tokens,
                       double temperature) override;
  std::string model_id() const override { return id_; }

 private:
  std::shared_ptr<const ModelBundle> bundle_;
  std::string id_;
};

// Chat-completion HTTP convention: POST {model, messages, temperature,
// max_tokens} to endpoint+path; the first choice's message content is taken
// verbatim. Bounded retries with exponential backoff; idempotent.
struct HttpClientConfig {
  std::string endpoint;  // e.g. "http://127.0.0.1:8080"
  std::string path = "/v1/chat/completions";
  std::string model = "default";
  std::string auth_token;  // sent as "Authorization: Bearer <token>" if set
  int max_retries = 3;
  double backoff_seconds = 0.5;
  int timeout_seconds = 120;
};

class HttpChatClient : public ModelClient {
 public:
  explicit HttpChatClient(HttpClientConfig config);
  std::string complete(const std::string& prompt, int max_tokens,
                       double temperature) override;
  std::string model_id() const override { return config_.model; }

 private:
  HttpClientConfig config_;
};

// Canned generations for fixtures: looks completions up by prompt, falling
// back to a default. Thread-safe for concurrent harness calls.
class MockClient : public ModelClient {
 public:
  explicit MockClient(std::map<std::string, std::string> by_prompt,
                      std::string fallback = "");
  std::string complete(const std::string& prompt, int max_tokens,
                       double temperature) override;
  std::string model_id() const override { return "mock"; }

 private:
  std::map<std::string, std::string> by_prompt_;
  std::string fallback_;
};

}  // namespace mathlens

#endif  // MATHLENS_CLIENT_HPP_
