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

#include "minos/rerank.hpp"

#include <map>

#include "minos/error.hpp"
#include "minos/solution.hpp"
#include "strings.hpp"

namespace minos {
namespace {

bool has_answer(const Candidate& c) { return c.answer.has_value(); }

void require_answers(const CandidateSet& set) {
  for (const auto& c : set.candidates) {
    if (has_answer(c)) return;
  }
  throw Error(Errc::NoExtractableAnswer, "question '" + set.question_id + "'");
}

double reward_of(const Candidate& c) {
  if (!c.outcome_reward) {
    throw Error(Errc::MissingReward, "candidate '" + c.solution_id + "'");
  }
  return *c.outcome_reward;
}

SelectionResult vote(const CandidateSet& set, Strategy strategy, bool weighted) {
  require_answers(set);
  const auto groups = group_answers(set);
  SelectionResult result;
  result.strategy = strategy;
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double score = 0.0;
    for (std::size_t i : groups[g].members) {
      score += weighted ? reward_of(set.candidates[i]) : 1.0;
    }
    result.group_scores.emplace_back(*set.candidates[groups[g].representative].answer,
                                     score);
    if (g == 0 || score > best_score) {
      best = g;
      best_score = score;
    }
  }
  result.chosen_answer = *set.candidates[groups[best].representative].answer;
  return result;
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::BestOfN: return "bon";
    case Strategy::SelfConsistency: return "sc";
    case Strategy::ScPlusRm: return "sc_rm";
  }
  return "bon";
}

Strategy parse_strategy(std::string_view text) {
  const std::string t = detail::lower(detail::trim(text));
  if (t == "bon" || t == "best_of_n") return Strategy::BestOfN;
  if (t == "sc" || t == "self_consistency") return Strategy::SelfConsistency;
  if (t == "sc_rm" || t == "sc+rm" || t == "sc_plus_rm") return Strategy::ScPlusRm;
  throw Error(Errc::MalformedInput, "unknown strategy '" + std::string(text) + "'");
}

std::vector<AnswerGroup> group_answers(const CandidateSet& set) {
  std::vector<AnswerGroup> groups;
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    const Candidate& c = set.candidates[i];
    if (!has_answer(c)) continue;
    bool placed = false;
    for (auto& g : groups) {
      if (answers_equivalent(*set.candidates[g.representative].answer, *c.answer)) {
        g.members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({i, {i}});
  }
  return groups;
}

void fill_outcome_rewards(CandidateSet& set, Aggregation aggregation) {
  for (auto& c : set.candidates) {
    if (c.outcome_reward || !c.step_rewards || c.step_rewards->empty()) continue;
    c.outcome_reward = aggregate_step_scores(
        Eigen::Map<const Eigen::VectorXd>(c.step_rewards->data(),
                                          static_cast<Eigen::Index>(c.step_rewards->size())),
        aggregation);
  }
}

SelectionResult best_of_n(const CandidateSet& set) {
  require_answers(set);
  std::optional<std::size_t> best;
  double best_reward = 0.0;
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    const Candidate& c = set.candidates[i];
    if (!has_answer(c)) continue;
    const double r = reward_of(c);
    if (!best || r > best_reward) {
      best = i;
      best_reward = r;
    }
  }
  const Candidate& chosen = set.candidates[*best];
  return {*chosen.answer, chosen.solution_id, Strategy::BestOfN, {}};
}

SelectionResult self_consistency(const CandidateSet& set) {
  return vote(set, Strategy::SelfConsistency, false);
}

SelectionResult sc_plus_rm(const CandidateSet& set) {
  return vote(set, Strategy::ScPlusRm, true);
}

SelectionResult select_answer(const CandidateSet& set, Strategy strategy) {
  switch (strategy) {
    case Strategy::BestOfN: return best_of_n(set);
    case Strategy::SelfConsistency: return self_consistency(set);
    case Strategy::ScPlusRm: return sc_plus_rm(set);
  }
  return best_of_n(set);
}

std::vector<CandidateSet> candidate_sets_from_jsonl(const std::vector<nlohmann::json>& rows) {
  std::vector<CandidateSet> sets;
  std::map<std::string, std::size_t> position;
  for (const auto& row : rows) {
    const std::string qid = row.at("question_id").get<std::string>();
    Candidate c;
    c.solution_id = row.at("solution_id").get<std::string>();
    if (row.contains("answer") && !row["answer"].is_null()) {
      std::string answer = row["answer"].get<std::string>();
      if (!detail::trim(answer).empty()) c.answer = std::move(answer);
    }
    if (row.contains("outcome_reward") && !row["outcome_reward"].is_null()) {
      c.outcome_reward = row["outcome_reward"].get<double>();
    }
    if (row.contains("step_rewards") && !row["step_rewards"].is_null()) {
      c.step_rewards = row["step_rewards"].get<std::vector<double>>();
    }
    auto [it, inserted] = position.emplace(qid, sets.size());
    if (inserted) sets.push_back({qid, {}});
    sets[it->second].candidates.push_back(std::move(c));
  }
  return sets;
}

nlohmann::json candidate_to_json(const std::string& question_id, const Candidate& c) {
  nlohmann::json j{{"question_id", question_id}, {"solution_id", c.solution_id}};
  j["answer"] = c.answer ? nlohmann::json(*c.answer) : nlohmann::json(nullptr);
  j["outcome_reward"] =
      c.outcome_reward ? nlohmann::json(*c.outcome_reward) : nlohmann::json(nullptr);
  j["step_rewards"] =
      c.step_rewards ? nlohmann::json(*c.step_rewards) : nlohmann::json(nullptr);
  return j;
}

}  // namespace minos
