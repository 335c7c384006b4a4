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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "minos/reward.hpp"

namespace minos {

/// One sampled solution for a question. `answer` is F(s): absent when no
/// final answer could be extracted.
struct Candidate {
  std::string solution_id;
  std::optional<std::string> answer;
  std::optional<double> outcome_reward;
  std::optional<std::vector<double>> step_rewards;
};

struct CandidateSet {
  std::string question_id;
  std::vector<Candidate> candidates;
};

enum class Strategy { BestOfN, SelfConsistency, ScPlusRm };

std::string_view to_string(Strategy strategy);
/// Accepts "bon", "sc" and "sc_rm".
Strategy parse_strategy(std::string_view text);

struct SelectionResult {
  std::string chosen_answer;
  std::optional<std::string> chosen_solution_id;
  Strategy strategy = Strategy::BestOfN;
  /// Vote strategies only; one entry per answer group in order of the
  /// group's first sample.
  std::vector<std::pair<std::string, double>> group_scores;
};

/// Candidates whose answers are mutually equivalent. The representative is
/// the member with the lowest sample index.
struct AnswerGroup {
  std::size_t representative = 0;
  std::vector<std::size_t> members;
};

/// Greedy grouping in sample order: each answer joins the first group whose
/// representative it is equivalent to. Candidates without answers are
/// skipped.
std::vector<AnswerGroup> group_answers(const CandidateSet& set);

/// Fills missing outcome rewards by reducing step rewards.
void fill_outcome_rewards(CandidateSet& set, Aggregation aggregation);

// All argmaxes break ties toward the lowest sample index.
SelectionResult best_of_n(const CandidateSet& set);
SelectionResult self_consistency(const CandidateSet& set);
SelectionResult sc_plus_rm(const CandidateSet& set);
SelectionResult select_answer(const CandidateSet& set, Strategy strategy);

/// Groups candidates.jsonl rows by question in order of first appearance.
std::vector<CandidateSet> candidate_sets_from_jsonl(const std::vector<nlohmann::json>& rows);
nlohmann::json candidate_to_json(const std::string& question_id, const Candidate& c);

}  // namespace minos
