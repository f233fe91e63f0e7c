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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <condition_variable>
#include <cstdlib>

#include "memfix/error.h"
#include "memfix/llm.h"

namespace memfix {
namespace {

// Process-wide bound on concurrent requests.
class InFlightLimiter {
 public:
  static InFlightLimiter& Instance() {
    static InFlightLimiter limiter;
    return limiter;
  }

  void Acquire(int limit) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return active_ < limit; });
    ++active_;
  }

  void Release() {
    {
      std::lock_guard lock(mu_);
      --active_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int active_ = 0;
};

class InFlightSlot {
 public:
  explicit InFlightSlot(int limit) { InFlightLimiter::Instance().Acquire(limit); }
  ~InFlightSlot() { InFlightLimiter::Instance().Release(); }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;
};

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint SplitEndpoint(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfigError, "endpoint is not a URL: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

nlohmann::json HttpLlmClient::RequestBody(const std::vector<ChatMessage>& messages,
                                          const LlmConfig& config) {
  nlohmann::json wire = nlohmann::json::array();
  for (const ChatMessage& m : messages) {
    wire.push_back({{"role", ChatRoleName(m.role)}, {"content", m.content}});
  }
  return {{"model", config.model_name},
          {"temperature", config.temperature},
          {"messages", std::move(wire)}};
}

std::string HttpLlmClient::ParseResponse(std::string_view body) {
  try {
    const nlohmann::json j = nlohmann::json::parse(body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kEndpointError,
                std::string("unexpected response body: ") + e.what());
  }
}

std::string HttpLlmClient::Send(const std::vector<ChatMessage>& messages,
                                const LlmConfig& config) {
  const char* key = std::getenv(config.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::kAuthMissing,
                "environment variable " + config.api_key_env + " is not set");
  }
  const Endpoint endpoint = SplitEndpoint(config.endpoint);
  httplib::Client client(endpoint.origin);
  client.set_connection_timeout(config.request_timeout_seconds, 0);
  client.set_read_timeout(config.request_timeout_seconds, 0);
  client.set_write_timeout(config.request_timeout_seconds, 0);
  client.set_bearer_token_auth(key);

  const std::string body = RequestBody(messages, config).dump();
  httplib::Result result;
  {
    InFlightSlot slot(config.max_in_flight);
    result = client.Post(endpoint.path, body, "application/json");
  }
  if (!result) {
    throw TransientFailure("transport error: " +
                           httplib::to_string(result.error()));
  }
  const int status = result->status;
  if (status == 401 || status == 403) {
    throw Error(ErrorCode::kAuthMissing,
                "endpoint rejected credentials (HTTP " + std::to_string(status) + ")");
  }
  if (status == 429 || status >= 500) {
    throw TransientFailure("HTTP " + std::to_string(status));
  }
  if (status != 200) {
    throw Error(ErrorCode::kEndpointError,
                "HTTP " + std::to_string(status) + ": " + result->body);
  }
  return ParseResponse(result->body);
}

}  // namespace memfix
