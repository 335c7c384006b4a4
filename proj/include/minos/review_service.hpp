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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "minos/corpus.hpp"
#include "minos/review_store.hpp"

namespace minos {

/// JSON view of a record for reviewers: the stored record plus the question
/// text, the solution's steps with their gold verdicts and the gold outcome.
nlohmann::json record_view(const FeedbackRecord& record, const Corpus& corpus);
nlohmann::json to_json(const ReviewStats& stats);

/// HTTP API over a ReviewStore:
///   GET  /api/queue?status=pending|accepted|rejected|edited|all
///   GET  /api/records/{id}
///   POST /api/records/{id}/verdict  {decision, edited_text?, reviewer}
///   GET  /api/stats
///   GET  /api/export?status=accepted
class ReviewService {
 public:
  ReviewService(ReviewStore& store, const Corpus& corpus,
                std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~ReviewService();

  ReviewService(const ReviewService&) = delete;
  ReviewService& operator=(const ReviewService&) = delete;

  /// Binds and serves until stop(). Returns false if binding fails.
  bool listen(const std::string& host, int port);
  /// Binds to a free port and returns it, or -1. Serve with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace minos
