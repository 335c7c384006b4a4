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

#include <random>

#include "doctest.h"
#include "minos/error.hpp"
#include "minos/metaeval.hpp"

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

Corpus small_corpus() {
  Corpus c;
  c.questions.emplace("q1", Question{"q1", Dataset::GSM8K, "How many?", "18"});
  c.questions.emplace("q2", Question{"q2", Dataset::MATH, "Half?", "1/2"});
  c.solutions.push_back(parse_solution("a", "q1", "Step 1: 3*6=18\n#### 18", Dataset::GSM8K));
  c.solutions.push_back(parse_solution("b", "q1", "Step 1: 3*6=18 so 18", Dataset::GSM8K));
  c.solutions.push_back(
      parse_solution("c", "q2", "Step 1: halve\nStep 2: \\boxed{0.5}", Dataset::MATH));
  c.labels.emplace("c", SolutionLabels{"c", {Verdict::Correct},
                                       {{1, Verdict::Incorrect}, {2, Verdict::Correct}}});
  return c;
}

MetaEvalSet planted(int n_fp, int n_other) {
  MetaEvalSet set;
  for (int i = 0; i < n_fp; ++i) {
    set.items.push_back({"q", "fp" + std::to_string(i), Verdict::Correct,
                         std::vector<StepLabel>{{1, Verdict::Correct}, {2, Verdict::Incorrect}}});
  }
  for (int i = 0; i < n_other; ++i) {
    set.items.push_back({"q", "ok" + std::to_string(i), i % 2 ? Verdict::Correct : Verdict::Incorrect,
                         std::vector<StepLabel>{{1, Verdict::Correct}}});
  }
  return set;
}

}  // namespace

TEST_CASE("build_meta_eval_set labels by rule") {
  const auto set = build_meta_eval_set(small_corpus());
  REQUIRE(set.items.size() == 3);
  CHECK(set.items[0].outcome_label == Verdict::Correct);
  CHECK(set.items[1].outcome_label == Verdict::Incorrect);
  CHECK(set.items[2].outcome_label == Verdict::Correct);
  CHECK_FALSE(set.items[0].step_labels.has_value());
  REQUIRE(set.items[2].step_labels.has_value());
  CHECK(is_false_positive(set.items[2]));
  CHECK_FALSE(is_false_positive(set.items[0]));

  Corpus broken = small_corpus();
  broken.solutions.push_back(parse_solution("d", "q9", "#### 1", Dataset::GSM8K));
  CHECK(error_code([&] { build_meta_eval_set(broken); }) == Errc::MissingQuestion);
}

TEST_CASE("eval_verifier oracle, anti-oracle and constant scorers") {
  const auto set = planted(3, 6);
  std::vector<ItemScores> oracle, anti, constant;
  for (const auto& item : set.items) {
    const double y = as_binary(item.outcome_label);
    oracle.push_back({y, std::nullopt});
    anti.push_back({1 - y, std::nullopt});
    constant.push_back({0.5, std::nullopt});
  }
  CHECK(eval_verifier(set, oracle).outcome_accuracy == 1.0);
  CHECK(eval_verifier(set, anti).outcome_accuracy == 0.0);
  std::size_t correct = 0;
  for (const auto& item : set.items) correct += item.outcome_label == Verdict::Correct;
  CHECK(eval_verifier(set, constant).outcome_accuracy ==
        static_cast<double>(correct) / set.items.size());
}

TEST_CASE("step accuracy over labeled steps") {
  const auto set = planted(1, 1);
  Eigen::VectorXd s0(2), s1(1);
  s0 << 0.9, 0.9;
  s1 << 0.2;
  const std::vector<ItemScores> scores{{0.9, s0}, {0.2, s1}};
  const auto m = eval_verifier(set, scores);
  REQUIRE(m.step_accuracy.has_value());
  CHECK(*m.step_accuracy == doctest::Approx(1.0 / 3.0));
  CHECK(m.n_steps == 3);
  CHECK(m.n_items == 2);
}

TEST_CASE("complement scorer accuracies sum to one") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.001, 0.999);
  for (int trial = 0; trial < 50; ++trial) {
    const auto set = planted(static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 20));
    std::vector<ItemScores> a, b;
    for (std::size_t i = 0; i < set.items.size(); ++i) {
      double v = unit(rng);
      if (v == 0.5) v = 0.25;
      a.push_back({v, std::nullopt});
      b.push_back({1 - v, std::nullopt});
    }
    CHECK(eval_verifier(set, a).outcome_accuracy + eval_verifier(set, b).outcome_accuracy ==
          doctest::Approx(1.0));
  }
}

TEST_CASE("model-based evaluation checks mode") {
  const Corpus corpus = small_corpus();
  const auto set = build_meta_eval_set(corpus);
  ToyRewardModel orm(RewardMode::ORM, 16);
  const auto m = eval_verifier(orm, set, corpus);
  CHECK(m.outcome_accuracy == doctest::Approx(2.0 / 3.0));
  ToyRewardModel prm(RewardMode::PRM, 16);
  CHECK(eval_verifier(prm, set, corpus).step_accuracy.has_value());
  MetaEvalSet unlabeled = set;
  for (auto& item : unlabeled.items) item.step_labels.reset();
  CHECK(error_code([&] { score_items(prm, unlabeled, corpus); }) == Errc::ModeMismatch);
}

TEST_CASE("false_positive_report") {
  const auto set = planted(7, 5);
  std::vector<ItemScores> low(set.items.size(), {0.05, std::nullopt});
  const auto r = false_positive_report(set, low);
  CHECK(r.recall == 1.0);
  CHECK(r.average_reward == 0.05);
  CHECK(r.n_samples == 7);
  std::vector<ItemScores> high(set.items.size(), {0.9, std::nullopt});
  const auto h = false_positive_report(set, high);
  CHECK(h.recall == 0.0);
  CHECK(h.average_reward == 0.9);
  const std::vector<ItemScores> four(4, {0.05, std::nullopt});
  CHECK(error_code([&] { false_positive_report(planted(0, 4), four); }) ==
        Errc::NoFalsePositives);
  CHECK(error_code([&] { false_positive_report(set, four); }) == Errc::LengthMismatch);
}

TEST_CASE("error analysis prompt and parsing") {
  const Question q{"q1", Dataset::GSM8K, "How many?", "18"};
  const Solution s = parse_solution("a", "q1", "Step 1: 3*6=19\nStep 2: so 19\n#### 19",
                                    Dataset::GSM8K);
  FeedbackRecord fb;
  fb.step_feedback = {{1, Verdict::Incorrect, "3*6 is 18"}, {2, Verdict::Correct, "ok"}};
  fb.outcome_verdict = Verdict::Incorrect;
  const std::string p = build_error_analysis_prompt(q, s, fb);
  CHECK(p == build_error_analysis_prompt(q, s, fb));
  CHECK(p.find("Classify these 1 incorrect step(s): 1\n") != std::string::npos);
  fb.step_feedback[0].verdict = Verdict::Correct;
  CHECK(error_code([&] { build_error_analysis_prompt(q, s, fb); }) == Errc::NoIncorrectSteps);

  const auto parsed = parse_error_analysis("Step 2: Calculation", 1);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0] == std::pair<int, ErrorType>{2, ErrorType::Calculation});
  CHECK(error_code([] { parse_error_analysis("Step 2: Typo", 1); }) == Errc::UnknownCategory);
  CHECK(error_code([] { parse_error_analysis("Step 1: Logic\nStep 2: Other", 1); }) ==
        Errc::CountMismatch);
}

TEST_CASE("error_distribution") {
  const std::vector<ErrorType> c{ErrorType::Calculation, ErrorType::Calculation, ErrorType::Logic};
  const auto d = error_distribution(c);
  CHECK(d[ErrorType::Calculation] == 2);
  CHECK(d[ErrorType::Logic] == 1);
  CHECK(d[ErrorType::Other] == 0);
  CHECK(d.total() == 3);
  CHECK(error_distribution(std::span<const ErrorType>{}).total() == 0);
  auto sum = d;
  sum += d;
  CHECK(sum.total() == 6);
  CHECK(to_json(d)["counts"]["Calculation"] == 2);
}
