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

#include "memfix/llm.h"

#include <algorithm>
#include <thread>

#include "memfix/error.h"
#include "memfix/patch_engine.h"
#include "memfix/text.h"

namespace memfix {

std::string_view ChatRoleName(ChatRole role) {
  switch (role) {
    case ChatRole::kSystem:
      return "system";
    case ChatRole::kUser:
      return "user";
    case ChatRole::kAssistant:
      return "assistant";
  }
  return "user";
}

std::size_t EstimateTokens(std::string_view text) {
  return (text.size() + 3) / 4;
}

std::size_t EstimateTokens(const std::vector<ChatMessage>& messages,
                           const TokenEstimator& estimator) {
  std::size_t total = 0;
  for (const ChatMessage& m : messages) {
    total += estimator ? estimator(m.content) : EstimateTokens(m.content);
  }
  return total;
}

std::string LlmConfig::Validate() const {
  if (model_name.empty()) return "model_name must not be empty";
  if (!(temperature >= 0.0)) return "temperature must be >= 0";
  if (max_context_tokens == 0) return "max_context_tokens must be positive";
  if (request_timeout_seconds <= 0) {
    return "request_timeout_seconds must be positive";
  }
  if (max_retries < 0) return "max_retries must be >= 0";
  if (retry_base_delay.count() < 0) return "retry_base_delay must be >= 0";
  if (max_in_flight < 1) return "max_in_flight must be >= 1";
  return {};
}

std::string LlmClient::Complete(const std::vector<ChatMessage>& messages,
                                const LlmConfig& config) {
  const std::size_t tokens = EstimateTokens(messages, estimator_);
  if (tokens > config.max_context_tokens) {
    throw Error(ErrorCode::kContextOverflow,
                "request needs ~" + std::to_string(tokens) +
                    " tokens, limit is " +
                    std::to_string(config.max_context_tokens));
  }
  for (int attempt = 0;; ++attempt) {
    try {
      return Send(messages, config);
    } catch (const TransientFailure& failure) {
      if (attempt >= config.max_retries) {
        throw Error(ErrorCode::kEndpointError,
                    "giving up after " + std::to_string(attempt + 1) +
                        " tries: " + failure.what());
      }
      const auto delay = config.retry_base_delay * (1LL << std::min(attempt, 20));
      if (sleep_) {
        sleep_(delay);
      } else {
        std::this_thread::sleep_for(delay);
      }
    }
  }
}

MockLlmClient::MockLlmClient(Script script)
    : script_(std::move(script)), rng_(script_.seed) {}

MockLlmClient::MockLlmClient(MockLlmClient&& other) : LlmClient(other) {
  std::lock_guard lock(other.mu_);
  script_ = std::move(other.script_);
  calls_ = other.calls_;
  requests_ = std::move(other.requests_);
  rng_ = other.rng_;
}

MockLlmClient MockLlmClient::FixedReply(std::string reply) {
  return Replies({std::move(reply)});
}

MockLlmClient MockLlmClient::Replies(std::vector<std::string> replies) {
  Script script;
  for (std::string& r : replies) {
    script.steps.push_back({Step::Kind::kReply, std::move(r)});
  }
  return MockLlmClient(std::move(script));
}

MockLlmClient MockLlmClient::WithProbability(double p, std::uint64_t seed,
                                             std::string correct,
                                             std::string wrong) {
  Script script;
  script.probability = p;
  script.seed = seed;
  script.correct_reply = std::move(correct);
  script.wrong_reply = std::move(wrong);
  return MockLlmClient(std::move(script));
}

MockLlmClient::Script MockLlmClient::ParseScript(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfigError, "mock script must be a JSON object");
  }
  Script script;
  try {
    if (j.contains("replies")) {
      for (const auto& entry : j.at("replies")) {
        if (entry.is_string()) {
          script.steps.push_back({Step::Kind::kReply, entry.get<std::string>()});
          continue;
        }
        const std::string kind = entry.at("error").get<std::string>();
        Step step;
        if (kind == "transient") {
          step.kind = Step::Kind::kTransientFailure;
        } else if (kind == "fatal") {
          step.kind = Step::Kind::kPermanentFailure;
        } else if (kind == "auth") {
          step.kind = Step::Kind::kAuthFailure;
        } else {
          throw Error(ErrorCode::kConfigError,
                      "unknown mock failure marker '" + kind + "'");
        }
        step.text = entry.value("message", kind + " failure (scripted)");
        script.steps.push_back(std::move(step));
      }
    }
    script.repeat_last = j.value("repeat_last", true);
    if (j.contains("probability")) {
      const double p = j.at("probability").get<double>();
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::kConfigError, "probability must be in [0, 1]");
      }
      script.probability = p;
    }
    script.seed = j.value("seed", std::uint64_t{0});
    script.correct_reply = j.value("correct_reply", std::string());
    script.wrong_reply = j.value("wrong_reply", std::string());
    script.echo = j.value("echo", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("mock script: ") + e.what());
  }
  if (script.steps.empty() && !script.probability && !script.echo) {
    throw Error(ErrorCode::kConfigError,
                "mock script needs replies, a probability or echo");
  }
  return script;
}

MockLlmClient::Script MockLlmClient::LoadScript(const std::string& path) {
  const std::string text = ReadFile(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, path + ": " + e.what());
  }
  return ParseScript(j);
}

std::size_t MockLlmClient::call_count() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::vector<MockLlmClient::Request> MockLlmClient::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::string MockLlmClient::Send(const std::vector<ChatMessage>& messages,
                                const LlmConfig& config) {
  std::lock_guard lock(mu_);
  const std::size_t index = calls_++;
  requests_.push_back({messages, config.temperature});

  if (script_.echo) {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
      if (it->role != ChatRole::kUser) continue;
      std::string code;
      try {
        code = ExtractCode(it->content, false);
      } catch (const Error&) {
        code = it->content;
      }
      return "```c\n" + code + "\n```";
    }
    return std::string();
  }

  if (script_.probability) {
    std::bernoulli_distribution coin(*script_.probability);
    return coin(rng_) ? script_.correct_reply : script_.wrong_reply;
  }

  if (script_.steps.empty() ||
      (index >= script_.steps.size() && !script_.repeat_last)) {
    throw Error(ErrorCode::kEndpointError,
                "mock script exhausted after " +
                    std::to_string(script_.steps.size()) + " replies");
  }
  const Step& step = script_.steps[std::min(index, script_.steps.size() - 1)];
  switch (step.kind) {
    case Step::Kind::kReply:
      return step.text;
    case Step::Kind::kTransientFailure:
      throw TransientFailure(step.text);
    case Step::Kind::kPermanentFailure:
      throw Error(ErrorCode::kEndpointError, step.text);
    case Step::Kind::kAuthFailure:
      throw Error(ErrorCode::kAuthMissing, step.text);
  }
  return step.text;
}

}  // namespace memfix
