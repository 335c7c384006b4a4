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

#include "minos/client.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "minos/error.hpp"

namespace minos {
namespace {

constexpr std::string_view kCompletionsPath = "/v1/chat/completions";

bool is_transient(int status) {
  return status == 0 || status == 408 || status == 429 || status >= 500;
}

// "http://host:port/prefix" -> {"http://host:port", "/prefix"}
std::pair<std::string, std::string> split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  const std::size_t path = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path), prefix};
}

}  // namespace

void validate(const ClientConfig& config) {
  if (config.max_in_flight < 1) throw Error(Errc::DomainError, "max_in_flight must be >= 1");
  if (config.temperature < 0.0) throw Error(Errc::DomainError, "temperature must be >= 0");
  if (config.max_retries < 1) throw Error(Errc::DomainError, "max_retries must be >= 1");
  if (config.timeout_seconds < 1) throw Error(Errc::DomainError, "timeout must be >= 1 s");
}

Transport make_http_transport(int timeout_seconds) {
  return [timeout_seconds](const HttpRequest& request) {
    auto [base, path] = split_url(request.url);
    httplib::Client client(base);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);
    httplib::Headers headers;
    for (const auto& [k, v] : request.headers) {
      if (k != "Content-Type") headers.emplace(k, v);
    }
    auto result = client.Post(path.empty() ? "/" : path, headers, request.body,
                              "application/json");
    if (!result) return HttpResponse{0, httplib::to_string(result.error())};
    return HttpResponse{result->status, result->body};
  };
}

nlohmann::json chat_completion_body(const std::string& content) {
  return {{"object", "chat.completion"},
          {"choices",
           {{{"index", 0},
             {"message", {{"role", "assistant"}, {"content", content}}},
             {"finish_reason", "stop"}}}}};
}

ChatClient::ChatClient(ClientConfig config, Transport transport, Sleeper sleeper,
                       std::uint64_t seed)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      rng_(seed) {
  validate(config_);
  if (!transport_) transport_ = make_http_transport(config_.timeout_seconds);
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::chrono::milliseconds ChatClient::backoff_delay(int retry) {
  const double cap = static_cast<double>(config_.backoff_base.count()) *
                     std::pow(config_.backoff_factor, retry);
  std::lock_guard lock(mutex_);
  std::uniform_real_distribution<double> jitter(0.0, cap);
  return std::chrono::milliseconds(static_cast<long long>(jitter(rng_)));
}

HttpResponse ChatClient::send_bounded(const HttpRequest& request) {
  {
    std::unique_lock lock(mutex_);
    slot_free_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
    ++in_flight_;
  }
  HttpResponse response;
  try {
    response = transport_(request);
  } catch (const std::exception& e) {
    response = {0, e.what()};
  }
  {
    std::lock_guard lock(mutex_);
    --in_flight_;
  }
  slot_free_.notify_one();
  return response;
}

FeedbackResponse ChatClient::request_feedback(const FeedbackPrompt& prompt) {
  return complete(prompt.text, prompt.question_id + "/" + prompt.solution_id);
}

FeedbackResponse ChatClient::complete(const std::string& prompt_text,
                                      const std::string& request_id) {
  HttpRequest request;
  request.url = config_.endpoint_url;
  while (!request.url.empty() && request.url.back() == '/') request.url.pop_back();
  request.url += kCompletionsPath;
  request.body = nlohmann::json{{"model", config_.model_name},
                                {"temperature", config_.temperature},
                                {"messages", {{{"role", "user"}, {"content", prompt_text}}}}}
                     .dump();
  request.headers["Content-Type"] = "application/json";
  if (!request_id.empty()) request.headers["X-Request-Id"] = request_id;
  if (const char* key = std::getenv("MINOS_API_KEY"); key != nullptr && *key != '\0') {
    request.headers["Authorization"] = std::string("Bearer ") + key;
  }

  HttpResponse last;
  for (int attempt = 1; attempt <= config_.max_retries; ++attempt) {
    last = send_bounded(request);
    if (last.status >= 200 && last.status < 300) {
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(last.body);
        const auto& content = body.at("choices").at(0).at("message").at("content");
        return {content.get<std::string>(), attempt};
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedResponse, e.what());
      }
    }
    if (!is_transient(last.status)) {
      throw Error(Errc::TransportError,
                  "HTTP " + std::to_string(last.status) + ": " + last.body.substr(0, 200));
    }
    if (attempt < config_.max_retries) sleeper_(backoff_delay(attempt - 1));
  }
  if (last.status == 429) {
    throw Error(Errc::RateLimited, "still rate limited after " +
                                       std::to_string(config_.max_retries) + " attempts");
  }
  throw Error(Errc::TransportError,
              "gave up after " + std::to_string(config_.max_retries) + " attempts (status " +
                  std::to_string(last.status) + "): " + last.body.substr(0, 200));
}

}  // namespace minos
