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

#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "minos/error.hpp"
#include "minos/rerank.hpp"

using namespace minos;

namespace {

template <typename Fn>
Errc error_code(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected minos::Error");
  return Errc::Io;
}

CandidateSet make_set(const std::vector<std::optional<std::string>>& answers,
                      const std::vector<double>& rewards = {}) {
  CandidateSet set{"q", {}};
  for (std::size_t i = 0; i < answers.size(); ++i) {
    Candidate c{"s" + std::to_string(i), answers[i], std::nullopt, std::nullopt};
    if (i < rewards.size()) c.outcome_reward = rewards[i];
    set.candidates.push_back(c);
  }
  return set;
}

}  // namespace

TEST_CASE("best_of_n examples") {
  auto r = best_of_n(make_set({"a", "b", "c"}, {0.1, 0.9, 0.4}));
  CHECK(r.chosen_answer == "b");
  CHECK(r.chosen_solution_id == "s1");
  CHECK(best_of_n(make_set({"x"}, {0.3})).chosen_answer == "x");
  CHECK(best_of_n(make_set({"a", "b"}, {0.9, 0.9})).chosen_solution_id == "s0");
  CHECK(best_of_n(make_set({std::nullopt, "b"}, {0.99, 0.1})).chosen_answer == "b");
  CHECK(error_code([] { best_of_n(make_set({std::nullopt}, {0.5})); }) ==
        Errc::NoExtractableAnswer);
  CHECK(error_code([] { best_of_n(make_set({"a"})); }) == Errc::MissingReward);
}

TEST_CASE("self_consistency examples") {
  CHECK(self_consistency(make_set({"5", "5", "7"})).chosen_answer == "5");
  CHECK(self_consistency(make_set({"5", "7"})).chosen_answer == "5");
  const auto r = self_consistency(make_set({"1/2", "0.5", "3"}));
  CHECK(r.chosen_answer == "1/2");
  CHECK_FALSE(r.chosen_solution_id.has_value());
  REQUIRE(r.group_scores.size() == 2);
  CHECK(r.group_scores[0].second == 2.0);
  CHECK(error_code([] { self_consistency(make_set({std::nullopt})); }) ==
        Errc::NoExtractableAnswer);
}

TEST_CASE("sc_plus_rm examples") {
  const auto r = sc_plus_rm(make_set({"5", "5", "7"}, {0.2, 0.3, 0.6}));
  CHECK(r.chosen_answer == "7");
  REQUIRE(r.group_scores.size() == 2);
  CHECK(r.group_scores[0] == std::pair<std::string, double>{"5", 0.5});
  CHECK(r.group_scores[1].second == 0.6);
  CHECK(sc_plus_rm(make_set({"9"}, {0.01})).chosen_answer == "9");
  CHECK(error_code([] { sc_plus_rm(make_set({"5", "6"}, {0.2})); }) == Errc::MissingReward);
}

TEST_CASE("fill_outcome_rewards reduces step rewards") {
  CandidateSet set = make_set({"1", "2"});
  set.candidates[0].step_rewards = std::vector<double>{0.9, 0.2, 0.7};
  set.candidates[1].outcome_reward = 0.4;
  set.candidates[1].step_rewards = std::vector<double>{0.1};
  fill_outcome_rewards(set, Aggregation::Product);
  CHECK(*set.candidates[0].outcome_reward == doctest::Approx(0.126));
  CHECK(*set.candidates[1].outcome_reward == 0.4);
}

TEST_CASE("uniform rewards reduce sc_plus_rm to self_consistency") {
  std::mt19937_64 rng(21);
  const std::vector<std::string> pool = {"1", "2", "0.5", "1/2", "3", "x"};
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<std::optional<std::string>> answers;
    for (std::size_t i = 0; i < n; ++i) answers.emplace_back(pool[rng() % pool.size()]);
    const double r = (1 + rng() % 99) / 100.0;
    const auto set = make_set(answers, std::vector<double>(n, r));
    CHECK(sc_plus_rm(set).chosen_answer == self_consistency(set).chosen_answer);
  }
}

TEST_CASE("best_of_n and sc_plus_rm are invariant under monotone rescaling") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<std::optional<std::string>> answers;
    std::vector<double> rewards;
    for (std::size_t i = 0; i < n; ++i) {
      answers.emplace_back(std::to_string(rng() % 3));
      rewards.push_back((1 + rng() % 99) / 100.0);
    }
    const auto base = make_set(answers, rewards);
    std::vector<double> cubed, halved;
    for (double v : rewards) {
      cubed.push_back(std::exp(3 * v) - 7.0);
      halved.push_back(v * 0.25);
    }
    CHECK(best_of_n(make_set(answers, cubed)).chosen_solution_id ==
          best_of_n(base).chosen_solution_id);
    CHECK(sc_plus_rm(make_set(answers, halved)).chosen_answer == sc_plus_rm(base).chosen_answer);
  }
}

TEST_CASE("candidate JSON round trip") {
  Candidate c{"s1", "42", 0.7, std::vector<double>{0.9, 0.7}};
  const auto j = candidate_to_json("q9", c);
  const auto sets = candidate_sets_from_jsonl({j, candidate_to_json("q8", {"s2", {}, {}, {}}), j});
  REQUIRE(sets.size() == 2);
  CHECK(sets[0].question_id == "q9");
  CHECK(sets[0].candidates.size() == 2);
  CHECK(*sets[0].candidates[0].answer == "42");
  CHECK(sets[0].candidates[0].step_rewards->size() == 2);
  CHECK_FALSE(sets[1].candidates[0].answer.has_value());
  CHECK(parse_strategy("sc_rm") == Strategy::ScPlusRm);
  CHECK(to_string(Strategy::BestOfN) == "bon");
}
