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

#include "minos/review_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include "minos/corpus.hpp"
#include "minos/error.hpp"
#include "strings.hpp"

namespace minos {

Decision parse_decision(std::string_view text) {
  const std::string t = detail::lower(detail::trim(text));
  if (t == "accept" || t == "accepted") return Decision::Accept;
  if (t == "reject" || t == "rejected") return Decision::Reject;
  if (t == "edit" || t == "edited") return Decision::Edit;
  throw Error(Errc::MalformedInput, "unknown decision '" + std::string(text) + "'");
}

ReviewStore::ReviewStore(std::filesystem::path journal) : journal_(std::move(journal)) {
  auto state = std::make_shared<State>();
  if (std::filesystem::exists(journal_)) {
    for (const auto& row : read_jsonl(journal_)) apply(*state, row.get<FeedbackRecord>());
  } else {
    if (journal_.has_parent_path()) std::filesystem::create_directories(journal_.parent_path());
    std::ofstream touch(journal_, std::ios::app);
    if (!touch) throw Error(Errc::Io, "cannot create " + journal_.string());
  }
  state_ = std::move(state);
}

void ReviewStore::apply(State& state, const FeedbackRecord& record) {
  auto it = state.index.find(record.id);
  if (it == state.index.end()) {
    if (record.review_status != ReviewStatus::Pending) {
      throw Error(Errc::IllegalTransition,
                  "record '" + record.id + "' first appears as " +
                      std::string(to_string(record.review_status)));
    }
    state.index.emplace(record.id, state.records.size());
    state.records.push_back(record);
    return;
  }
  FeedbackRecord& current = state.records[it->second];
  if (!is_legal_transition(current.review_status, record.review_status)) {
    throw Error(Errc::IllegalTransition,
                "record '" + record.id + "': " + std::string(to_string(current.review_status)) +
                    " -> " + std::string(to_string(record.review_status)));
  }
  current = record;
}

std::shared_ptr<const ReviewStore::State> ReviewStore::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return state_;
}

void ReviewStore::append_line(const std::string& line) {
  const int fd = ::open(journal_.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) throw Error(Errc::Io, journal_.string() + ": " + std::strerror(errno));
  const std::string data = line + "\n";
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string reason = std::strerror(errno);
      ::close(fd);
      throw Error(Errc::Io, journal_.string() + ": " + reason);
    }
    written += static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) throw Error(Errc::Io, "fsync failed on " + journal_.string());
}

void ReviewStore::add(const FeedbackRecord& record) {
  std::lock_guard lock(write_mutex_);
  auto next = std::make_shared<State>(*snapshot());
  FeedbackRecord pending = record;
  pending.review_status = ReviewStatus::Pending;
  if (next->index.count(pending.id) != 0) {
    throw Error(Errc::IllegalTransition, "record '" + pending.id + "' already exists");
  }
  apply(*next, pending);
  append_line(nlohmann::json(pending).dump());
  std::lock_guard swap(snapshot_mutex_);
  state_ = std::move(next);
}

FeedbackRecord ReviewStore::apply_verdict(const std::string& id, Decision decision,
                                          const std::optional<std::string>& edited_text,
                                          const std::string& reviewer) {
  std::lock_guard lock(write_mutex_);
  auto next = std::make_shared<State>(*snapshot());
  auto it = next->index.find(id);
  if (it == next->index.end()) throw Error(Errc::NotFound, "record '" + id + "'");
  FeedbackRecord updated = next->records[it->second];
  switch (decision) {
    case Decision::Accept: updated.review_status = ReviewStatus::Accepted; break;
    case Decision::Reject: updated.review_status = ReviewStatus::Rejected; break;
    case Decision::Edit:
      if (!edited_text || detail::trim(*edited_text).empty()) {
        throw Error(Errc::MalformedInput, "an edit needs non-empty edited_text");
      }
      updated.review_status = ReviewStatus::Edited;
      updated.edited_text = *edited_text;
      break;
  }
  updated.reviewer = reviewer;
  apply(*next, updated);
  append_line(nlohmann::json(updated).dump());
  std::lock_guard swap(snapshot_mutex_);
  state_ = std::move(next);
  return updated;
}

bool ReviewStore::contains(const std::string& id) const {
  return snapshot()->index.count(id) != 0;
}

std::optional<FeedbackRecord> ReviewStore::get(const std::string& id) const {
  auto state = snapshot();
  auto it = state->index.find(id);
  if (it == state->index.end()) return std::nullopt;
  return state->records[it->second];
}

std::vector<FeedbackRecord> ReviewStore::records() const { return snapshot()->records; }

std::vector<FeedbackRecord> ReviewStore::queue(std::optional<ReviewStatus> status) const {
  auto state = snapshot();
  std::vector<FeedbackRecord> flagged;
  std::vector<FeedbackRecord> clean;
  for (const auto& r : state->records) {
    if (status && r.review_status != *status) continue;
    (r.consistency_flags.empty() ? clean : flagged).push_back(r);
  }
  flagged.insert(flagged.end(), clean.begin(), clean.end());
  return flagged;
}

ReviewStats ReviewStore::stats() const {
  auto state = snapshot();
  ReviewStats s;
  for (FlagKind k : {FlagKind::StepOutcomeContradiction, FlagKind::LabelContradiction,
                     FlagKind::FalsePositiveSample}) {
    s.flags[std::string(to_string(k))] = 0;
  }
  for (const auto& r : state->records) {
    ++s.total;
    switch (r.review_status) {
      case ReviewStatus::Pending: ++s.pending; break;
      case ReviewStatus::Accepted: ++s.accepted; break;
      case ReviewStatus::Rejected: ++s.rejected; break;
      case ReviewStatus::Edited: ++s.edited; break;
    }
    if (!r.consistency_flags.empty()) ++s.flagged;
    for (const auto& f : r.consistency_flags) ++s.flags[std::string(to_string(f.kind))];
  }
  return s;
}

}  // namespace minos
