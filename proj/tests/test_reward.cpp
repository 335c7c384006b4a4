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
#include <random>

#include "doctest.h"
#include "minos/error.hpp"
#include "minos/reward.hpp"

using namespace minos;
using Eigen::VectorXd;

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

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Question gsm_question() { return Question{"q1", Dataset::GSM8K, "Add two and three.", "5"}; }

}  // namespace

TEST_CASE("bce_outcome_loss values") {
  CHECK(bce_outcome_loss(1.0, 0.999999) == doctest::Approx(1e-6).epsilon(1e-5));
  CHECK(bce_outcome_loss(1.0, 0.5) == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(bce_outcome_loss(0.0, 0.5) == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(error_code([] { bce_outcome_loss(1.0, 0.0); }) == Errc::DomainError);
  CHECK(error_code([] { bce_outcome_loss(1.0, 1.0); }) == Errc::DomainError);
  CHECK(error_code([] { bce_outcome_loss(0.5, 0.3); }) == Errc::DomainError);
}

TEST_CASE("bce_outcome_loss clamps near saturation") {
  const double tiny = 1e-300;
  CHECK(std::isfinite(bce_outcome_loss(1.0, tiny)));
  CHECK(bce_outcome_loss(1.0, tiny) == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("bce_process_loss values") {
  CHECK(bce_process_loss(vec({1, 1}), vec({0.5, 0.5})) == doctest::Approx(1.386294).epsilon(1e-6));
  CHECK(bce_process_loss(vec({1}), vec({0.999999})) == doctest::Approx(1e-6).epsilon(1e-5));
  CHECK(error_code([] { bce_process_loss(vec({1, 0}), vec({0.5})); }) == Errc::LengthMismatch);
  CHECK(error_code([] { bce_process_loss(VectorXd(), VectorXd()); }) == Errc::EmptyArray);
  CHECK(error_code([] { bce_process_loss(vec({1}), vec({1.5})); }) == Errc::DomainError);
}

TEST_CASE("sft_nll values") {
  const double q = std::log(0.25), h = std::log(0.5);
  CHECK(sft_nll(vec({q, q, q}), vec({1, 1, 1})) == doctest::Approx(4.158883).epsilon(1e-6));
  CHECK(sft_nll(vec({0, 0}), vec({1, 1})) == 0.0);
  CHECK(sft_nll(vec({h, h}), vec({1, 0})) == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(error_code([] { sft_nll(vec({-1, -1}), vec({1})); }) == Errc::LengthMismatch);
  CHECK(error_code([] { sft_nll(vec({0.1}), vec({1})); }) == Errc::DomainError);
}

TEST_CASE("loss properties on random inputs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(1e-6, 1 - 1e-6);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int i = 0; i < 500; ++i) {
    const double y = bit(rng), p = unit(rng);
    CHECK(bce_outcome_loss(y, p) == doctest::Approx(bce_outcome_loss(1 - y, 1 - p)).epsilon(1e-9));
    CHECK(bce_process_loss(vec({y}), vec({p})) == bce_outcome_loss(y, p));
    CHECK(bce_outcome_loss(y, p) >= 0.0);

    const int m = 1 + static_cast<int>(rng() % 10);
    VectorXd lp(m), m1(m), m2(m);
    for (int t = 0; t < m; ++t) {
      lp(t) = std::log(unit(rng));
      const int which = static_cast<int>(rng() % 3);
      m1(t) = which == 1;
      m2(t) = which == 2;
    }
    const VectorXd both = m1 + m2;
    CHECK(sft_nll(lp, m1) + sft_nll(lp, m2) == doctest::Approx(sft_nll(lp, both)).epsilon(1e-12));
  }
}

TEST_CASE("aggregate_step_scores") {
  const VectorXd r = vec({0.9, 0.2, 0.7});
  CHECK(aggregate_step_scores(r) == 0.2);
  CHECK(aggregate_step_scores(r, Aggregation::Min) == 0.2);
  CHECK(aggregate_step_scores(r, Aggregation::Product) == doctest::Approx(0.126));
  CHECK(aggregate_step_scores(r, Aggregation::Last) == 0.7);
  CHECK(aggregate_step_scores(r, Aggregation::Mean) == doctest::Approx(0.6));
  CHECK(error_code([] { aggregate_step_scores(VectorXd()); }) == Errc::EmptyArray);
  CHECK(error_code([] { aggregate_step_scores(vec({0.5, 1.0})); }) == Errc::DomainError);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    VectorXd x(1 + static_cast<int>(rng() % 6));
    for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = unit(rng);
    CHECK(aggregate_step_scores(x, Aggregation::Min) <= x.minCoeff());
    const double mean = aggregate_step_scores(x, Aggregation::Mean);
    CHECK(mean >= x.minCoeff());
    CHECK(mean <= x.maxCoeff());
  }
}

TEST_CASE("parse and print enums") {
  CHECK(parse_reward_mode("ORM") == RewardMode::ORM);
  CHECK(parse_reward_mode("prm") == RewardMode::PRM);
  CHECK(parse_aggregation("product") == Aggregation::Product);
  CHECK(to_string(Aggregation::Min) == "min");
  CHECK_THROWS_AS(parse_aggregation("median"), Error);
}

TEST_CASE("featurize arithmetic slot and determinism") {
  const Question q = gsm_question();
  const int d = 64;
  CHECK(featurize(q, "2+3=6", 1, 1, d)(arithmetic_slot(d)) == 1.0);
  CHECK(featurize(q, "2+3=5", 1, 1, d)(arithmetic_slot(d)) == 0.0);
  const FeatureVector a = featurize(q, "Step text with 2+3=5", 2, 4, d);
  const FeatureVector b = featurize(q, "Step text with 2+3=5", 2, 4, d);
  CHECK(a == b);
  CHECK(a.size() == d);
  CHECK(a(position_slot(d)) == doctest::Approx(0.5));
  CHECK(a(length_slot(d)) == doctest::Approx(0.04));
  CHECK(a.head(d - 3).norm() == doctest::Approx(1.0));
  CHECK((a.head(d - 3).array() >= 0).all());
}

TEST_CASE("score_outcome and score_steps") {
  const Question q = gsm_question();
  const Solution s = parse_solution("s1", "q1", "Step 1: 2+3=5\nStep 2: so 5\nStep 3: done\n#### 5",
                                    Dataset::GSM8K);
  ToyRewardModel orm(RewardMode::ORM, 32);
  CHECK(score_outcome(orm, q, s) == 0.5);
  orm.bias() = 2.0;
  CHECK(score_outcome(orm, q, s) == doctest::Approx(0.880797).epsilon(1e-6));
  CHECK(error_code([&] { score_steps(orm, q, s); }) == Errc::ModeMismatch);

  ToyRewardModel prm(RewardMode::PRM, 32);
  const VectorXd steps = score_steps(prm, q, s);
  REQUIRE(steps.size() == 3);
  CHECK((steps.array() == 0.5).all());
  CHECK(error_code([&] { score_outcome(prm, q, s); }) == Errc::ModeMismatch);
  Solution empty = s;
  empty.steps.clear();
  CHECK(error_code([&] { score_steps(prm, q, empty); }) == Errc::EmptySolution);

  prm.weights().setConstant(0.3);
  const auto scored = score_solution(prm, q, s, Aggregation::Min);
  REQUIRE(scored.step_rewards.has_value());
  CHECK(scored.step_rewards->size() == 3);
  CHECK(scored.outcome_reward == scored.step_rewards->minCoeff());
}

TEST_CASE("scores stay strictly inside the unit interval") {
  ToyRewardModel m(RewardMode::ORM, 8);
  VectorXd x = VectorXd::Ones(8);
  m.weights().setConstant(1e6);
  CHECK(m.score(x) < 1.0);
  m.weights().setConstant(-1e6);
  CHECK(m.score(x) > 0.0);
}
