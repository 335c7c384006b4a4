// Copyright 2026 The Minos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <string>

#include "minos/curation.hpp"

namespace minos {

struct ClientConfig {
  std::string endpoint_url = "http://127.0.0.1:8000";
  std::string model_name = "gpt-4-turbo";
  double temperature = 0.0;
  int max_in_flight = 8;
  /// Total attempts per request, including the first.
  int max_retries = 5;
  int timeout_seconds = 60;
  std::chrono::milliseconds backoff_base{1000};
  double backoff_factor = 2.0;
};

void validate(const ClientConfig& config);

struct HttpRequest {
  std::string url;
  std::string body;
  std::map<std::string, std::string> headers;
};

/// status 0 means the request never produced an HTTP response.
struct HttpResponse {
  int status = 0;
  std::string body;
};

using Transport = std::function<HttpResponse(const HttpRequest&)>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Blocking HTTP POST through cpp-httplib.
Transport make_http_transport(int timeout_seconds);

/// Answers every request with a chat-completion body wrapping `content`.
nlohmann::json chat_completion_body(const std::string& content);

struct FeedbackResponse {
  std::string content;
  int attempts = 0;
};

/// Chat-completion client with jittered exponential backoff and a bound on
/// concurrent requests shared by every thread that uses the instance.
class ChatClient {
 public:
  explicit ChatClient(ClientConfig config, Transport transport = {},
                      Sleeper sleeper = {}, std::uint64_t seed = 0);

  ChatClient(const ChatClient&) = delete;
  ChatClient& operator=(const ChatClient&) = delete;

  /// Throws Error{TransportError} or Error{RateLimited} once attempts are
  /// exhausted and Error{MalformedResponse} for unusable bodies.
  FeedbackResponse request_feedback(const FeedbackPrompt& prompt);
  /// `request_id` is sent as X-Request-Id when non-empty.
  FeedbackResponse complete(const std::string& prompt_text,
                            const std::string& request_id = {});

  /// Delay before retry number `retry` (0-based): uniform in
  /// [0, base * factor^retry].
  std::chrono::milliseconds backoff_delay(int retry);

  const ClientConfig& config() const { return config_; }

 private:
  HttpResponse send_bounded(const HttpRequest& request);

  ClientConfig config_;
  Transport transport_;
  Sleeper sleeper_;
  std::mutex mutex_;
  std::condition_variable slot_free_;
  int in_flight_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace minos
