// Copyright 2026 The memfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEMFIX_LLM_H_
#define MEMFIX_LLM_H_

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace memfix {

enum class ChatRole { kSystem, kUser, kAssistant };

std::string_view ChatRoleName(ChatRole role);

struct ChatMessage {
  ChatRole role = ChatRole::kUser;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using TokenEstimator = std::function<std::size_t(std::string_view)>;

// ceil(chars / 4).
std::size_t EstimateTokens(std::string_view text);

// Sum over message contents; an empty estimator means the default.
std::size_t EstimateTokens(const std::vector<ChatMessage>& messages,
                           const TokenEstimator& estimator = {});

struct LlmConfig {
  std::string model_name = "gpt-3.5-turbo-0125";
  double temperature = 1.0;
  std::size_t max_context_tokens = 16000;
  int request_timeout_seconds = 120;
  int max_retries = 3;
  std::chrono::milliseconds retry_base_delay{1000};
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  // Name of the environment variable holding the API key.
  std::string api_key_env = "OPENAI_API_KEY";
  // Bound on concurrent in-flight HTTP requests across the process.
  int max_in_flight = 4;

  std::string Validate() const;
};

// Thrown by LlmClient::Send for failures worth retrying.
class TransientFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;

  // Pre-flight context check, then Send() with exponential backoff on
  // TransientFailure. Throws Error{kContextOverflow}, Error{kEndpointError}
  // once retries are exhausted, or Error{kAuthMissing}.
  std::string Complete(const std::vector<ChatMessage>& messages,
                       const LlmConfig& config);

  void set_sleep_function(
      std::function<void(std::chrono::milliseconds)> sleep) {
    sleep_ = std::move(sleep);
  }
  void set_token_estimator(TokenEstimator estimator) {
    estimator_ = std::move(estimator);
  }

 protected:
  virtual std::string Send(const std::vector<ChatMessage>& messages,
                           const LlmConfig& config) = 0;

 private:
  std::function<void(std::chrono::milliseconds)> sleep_;
  TokenEstimator estimator_;
};

// Deterministic stand-in for the remote model. Behaviours:
//  * scripted: `replies` are returned in order, one per Send(); entries may be
//    failure markers. After the script runs out the last entry repeats when
//    `repeat_last` is set, otherwise Send() fails permanently.
//  * probabilistic: each Send() returns `correct_reply` with probability
//    `probability` and `wrong_reply` otherwise, from a seeded generator.
//  * echo: returns the first fenced block of the latest user message
//    unchanged (the whole message when it has no fence).
class MockLlmClient : public LlmClient {
 public:
  struct Step {
    enum class Kind { kReply, kTransientFailure, kPermanentFailure, kAuthFailure };
    Kind kind = Kind::kReply;
    std::string text;
  };

  struct Script {
    std::vector<Step> steps;
    bool repeat_last = true;
    std::optional<double> probability;
    std::uint64_t seed = 0;
    std::string correct_reply;
    std::string wrong_reply;
    bool echo = false;
  };

  struct Request {
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
  };

  explicit MockLlmClient(Script script);
  // Moves script, counters and generator state; `other` must be idle.
  MockLlmClient(MockLlmClient&& other);

  static MockLlmClient FixedReply(std::string reply);
  static MockLlmClient Replies(std::vector<std::string> replies);
  static MockLlmClient WithProbability(double p, std::uint64_t seed,
                                       std::string correct, std::string wrong);

  // Script file format: see docs/config.md ("Mock LLM script").
  static Script ParseScript(const nlohmann::json& j);
  static Script LoadScript(const std::string& path);

  // Number of Send() invocations, failed ones included.
  std::size_t call_count() const;
  std::vector<Request> requests() const;

 protected:
  std::string Send(const std::vector<ChatMessage>& messages,
                   const LlmConfig& config) override;

 private:
  Script script_;
  mutable std::mutex mu_;
  std::size_t calls_ = 0;
  std::vector<Request> requests_;
  std::mt19937_64 rng_;
};

// OpenAI-style chat-completion endpoint over HTTPS. The key is read from the
// environment variable named by LlmConfig::api_key_env on every request.
class HttpLlmClient : public LlmClient {
 public:
  HttpLlmClient() = default;

  // Request body for the wire; exposed for tests.
  static nlohmann::json RequestBody(const std::vector<ChatMessage>& messages,
                                    const LlmConfig& config);
  // Extracts choices[0].message.content; throws Error{kEndpointError}.
  static std::string ParseResponse(std::string_view body);

 protected:
  std::string Send(const std::vector<ChatMessage>& messages,
                   const LlmConfig& config) override;
};

}  // namespace memfix

#endif  // MEMFIX_LLM_H_
