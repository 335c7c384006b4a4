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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "minos/curation.hpp"

namespace minos {

enum class Decision { Accept, Reject, Edit };

Decision parse_decision(std::string_view text);

struct ReviewStats {
  std::size_t total = 0;
  std::size_t pending = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t edited = 0;
  std::size_t flagged = 0;
  std::map<std::string, std::size_t> flags;
};

/// Feedback records backed by an append-only JSONL journal of record states.
/// Replaying the journal rebuilds the index; every write is appended and
/// fsync'd before it becomes visible. Writers are serialized; readers get
/// immutable snapshots.
class ReviewStore {
 public:
  /// Opens (or creates) the journal and replays it. Throws
  /// Error{IllegalTransition} when the journal contains an illegal state
  /// change.
  explicit ReviewStore(std::filesystem::path journal);

  ReviewStore(const ReviewStore&) = delete;
  ReviewStore& operator=(const ReviewStore&) = delete;

  /// Appends a new Pending record. Throws Error{IllegalTransition} when the
  /// id already exists.
  void add(const FeedbackRecord& record);

  /// Throws Error{NotFound}, Error{IllegalTransition} or
  /// Error{MalformedInput} (edit without text).
  FeedbackRecord apply_verdict(const std::string& id, Decision decision,
                               const std::optional<std::string>& edited_text,
                               const std::string& reviewer);

  bool contains(const std::string& id) const;
  std::optional<FeedbackRecord> get(const std::string& id) const;
  /// All records in insertion order.
  std::vector<FeedbackRecord> records() const;
  /// Records with `status` (all when absent), flagged records first, then
  /// insertion order.
  std::vector<FeedbackRecord> queue(std::optional<ReviewStatus> status) const;
  ReviewStats stats() const;

  const std::filesystem::path& journal() const { return journal_; }

 private:
  struct State {
    std::vector<FeedbackRecord> records;
    std::map<std::string, std::size_t> index;
  };

  std::shared_ptr<const State> snapshot() const;
  void append_line(const std::string& line);
  static void apply(State& state, const FeedbackRecord& record);

  std::filesystem::path journal_;
  std::mutex write_mutex_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const State> state_;
};

}  // namespace minos
