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

#include <algorithm>
#include <filesystem>
#include <random>
#include <vector>

#include "doctest.h"
#include "minos/error.hpp"
#include "minos/curation.hpp"
#include "minos/train.hpp"

using namespace minos;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kCalculation = static_cast<int>(ErrorType::Calculation);

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

// Two Gaussian clusters at +/- mu along a random direction.
std::vector<LabeledExample> clusters(int n, int d, std::uint64_t seed, int rows = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  VectorXd dir = VectorXd::Zero(d);
  dir(0) = 1.0;
  std::vector<LabeledExample> out;
  for (int i = 0; i < n; ++i) {
    LabeledExample ex{MatrixXd(rows, d), VectorXd(rows)};
    for (int r = 0; r < rows; ++r) {
      const double y = (rng() % 2) ? 1.0 : 0.0;
      for (int j = 0; j < d; ++j) ex.features(r, j) = noise(rng);
      ex.features.row(r) += ((y == 1.0 ? 1.0 : -1.0) * dir).transpose();
      ex.labels(r) = y;
    }
    out.push_back(std::move(ex));
  }
  return out;
}

// Mann-Whitney AUC counting ties as half.
double auc(const std::vector<double>& scores, const std::vector<double>& labels) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1.0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0.0) continue;
      pairs += 1;
      wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
    }
  }
  return wins / pairs;
}

ToyRewardModel random_model(RewardMode mode, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ToyRewardModel m(mode, d);
  for (int j = 0; j < d; ++j) m.weights()(j) = g(rng);
  m.bias() = g(rng);
  for (Eigen::Index r = 0; r < m.aux_weights().rows(); ++r) {
    for (int j = 0; j < d; ++j) m.aux_weights()(r, j) = g(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("make_example shapes and label checks") {
  const Question q{"q", Dataset::GSM8K, "What is 2+3?", "5"};
  const Solution s = parse_solution("s", "q", "Step 1: 2+3=5\nStep 2: ok\n#### 5", Dataset::GSM8K);
  SolutionLabels labels{"s", {Verdict::Correct}, {{1, Verdict::Correct}, {2, Verdict::Incorrect}}};
  const auto prm = make_example(ToyRewardModel(RewardMode::PRM, 16), q, s, labels);
  CHECK(prm.features.rows() == 2);
  CHECK(prm.labels(0) == 1.0);
  CHECK(prm.labels(1) == 0.0);
  const auto orm = make_example(ToyRewardModel(RewardMode::ORM, 16), q, s, labels);
  CHECK(orm.features.rows() == 1);
  labels.steps.pop_back();
  CHECK(error_code([&] { make_example(ToyRewardModel(RewardMode::PRM, 16), q, s, labels); }) ==
        Errc::LabelCountMismatch);
}

TEST_CASE("gradients match finite differences") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const auto m_orm = random_model(RewardMode::ORM, 12, rng);
    const auto m_prm = random_model(RewardMode::PRM, 12, rng);
    const auto orm = clusters(1, 12, rng(), 1).front();
    const auto prm = clusters(1, 12, rng(), 1 + static_cast<int>(rng() % 5)).front();
    CHECK(grad_check(m_orm, orm) <= 1e-6);
    CHECK(grad_check(m_prm, prm) <= 1e-6);
    AuxExample aux{orm.features.row(0).transpose()};
    aux.targets << 1, 0, 0, 1, 0;
    CHECK(grad_check_stage1(m_orm, aux) <= 1e-6);
  }
}

TEST_CASE("bias gradient equals prediction minus label at zero weights") {
  ToyRewardModel m(RewardMode::ORM, 4);
  LabeledExample ex{MatrixXd::Ones(1, 4), VectorXd::Ones(1)};
  const auto g = stage2_gradient(m, std::span(&ex, 1), 0.0);
  CHECK(g.bias == doctest::Approx(0.5 - 1.0));
}

TEST_CASE("train_stage2 reaches high AUC on separable clusters") {
  const auto train = clusters(200, 8, 1);
  const auto held = clusters(200, 8, 2);
  TrainConfig cfg;
  cfg.seed = 3;
  const auto result = train_stage2(ToyRewardModel(RewardMode::ORM, 8), train, held, cfg);
  std::vector<double> scores, labels;
  for (const auto& ex : held) {
    scores.push_back(result.model.score(ex.features.row(0).transpose()));
    labels.push_back(ex.labels(0));
  }
  CHECK(auc(scores, labels) >= 0.95);
  CHECK(result.series.size() == static_cast<std::size_t>(cfg.epochs) + 1);
  CHECK(result.series.front().step == 0);
  CHECK(result.series.back().heldout_accuracy >= 0.9);
}

TEST_CASE("train_stage2 determinism and no-op") {
  const auto train = clusters(50, 6, 4, 3);
  TrainConfig cfg;
  cfg.seed = 9;
  cfg.batch_size = 7;
  const auto a = train_stage2(ToyRewardModel(RewardMode::PRM, 6), train, {}, cfg);
  const auto b = train_stage2(ToyRewardModel(RewardMode::PRM, 6), train, {}, cfg);
  CHECK(a.model == b.model);
  CHECK(std::isnan(a.series.back().heldout_accuracy));
  cfg.epochs = 0;
  std::mt19937_64 rng(1);
  const auto start = random_model(RewardMode::PRM, 6, rng);
  CHECK(train_stage2(start, train, {}, cfg).model == start);
}

TEST_CASE("train_stage2 errors") {
  TrainConfig cfg;
  CHECK(error_code([&] { train_stage2(ToyRewardModel(RewardMode::ORM, 4), {}, {}, cfg); }) ==
        Errc::EmptyDataset);
  const auto multi = clusters(3, 4, 1, 2);
  CHECK(error_code([&] { train_stage2(ToyRewardModel(RewardMode::ORM, 4), multi, {}, cfg); }) ==
        Errc::ModeMismatch);
}

TEST_CASE("full-batch loss is non-increasing at a small learning rate") {
  const auto train = clusters(40, 5, 8, 2);
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.batch_size = 40;
  cfg.epochs = 30;
  std::mt19937_64 rng(2);
  const auto result = train_stage2(random_model(RewardMode::PRM, 5, rng), train, {}, cfg);
  for (std::size_t i = 1; i < result.series.size(); ++i) {
    CHECK(result.series[i].loss <= result.series[i - 1].loss);
  }
}

TEST_CASE("stage one isolates the calculation feature") {
  const int d = 16;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.2);
  std::vector<AuxExample> data;
  for (int i = 0; i < 200; ++i) {
    AuxExample ex{VectorXd(d)};
    for (int j = 0; j < d; ++j) ex.features(j) = noise(rng);
    const bool calc = rng() % 2;
    ex.features(arithmetic_slot(d)) = calc ? 1.0 : 0.0;
    ex.targets(kCalculation) = calc ? 1.0 : 0.0;
    data.push_back(ex);
  }
  TrainConfig cfg;
  cfg.epochs = 100;
  const auto start = ToyRewardModel(RewardMode::ORM, d);
  const auto trained = train_stage1_analog(start, data, cfg);
  CHECK(trained.weights() == start.weights());
  CHECK(trained.bias() == start.bias());
  Eigen::Index argmax = 0;
  trained.aux_weights().row(kCalculation).cwiseAbs().maxCoeff(&argmax);
  CHECK(argmax == arithmetic_slot(d));
  cfg.epochs = 0;
  CHECK(train_stage1_analog(start, data, cfg) == start);
  CHECK(error_code([&] { train_stage1_analog(start, {}, cfg); }) == Errc::EmptyDataset);
}

TEST_CASE("init_from_auxiliary negates the column sum and normalizes") {
  ToyRewardModel m(RewardMode::ORM, 4);
  m.aux_weights().setZero();
  m.aux_weights()(0, 0) = 3.0;
  m.aux_weights()(1, 1) = 4.0;
  init_from_auxiliary(m);
  CHECK(m.weights()(0) == doctest::Approx(-0.6));
  CHECK(m.weights()(1) == doctest::Approx(-0.8));
  CHECK(m.weights()(2) == 0.0);
  ToyRewardModel zero(RewardMode::ORM, 4);
  zero.weights().setConstant(2.0);
  init_from_auxiliary(zero);
  CHECK((zero.weights().array() == 2.0).all());
}

TEST_CASE("checkpoint and convergence round trip") {
  std::mt19937_64 rng(6);
  const auto m = random_model(RewardMode::PRM, 10, rng);
  CHECK(checkpoint_from_json(checkpoint_to_json(m)) == m);
  const auto path = std::filesystem::temp_directory_path() / "minos_test_ckpt.json";
  save_checkpoint(path, m);
  CHECK(load_checkpoint(path) == m);
  std::filesystem::remove(path);

  ConvergenceSeries s{{0, 0.693, 0.5}, {4, 0.1 / 3.0, 0.875}};
  const auto back = parse_convergence_csv(convergence_csv(s));
  REQUIRE(back.size() == 2);
  CHECK(back[1].step == 4);
  CHECK(back[1].loss == s[1].loss);
  CHECK(back[1].heldout_accuracy == 0.875);
  CHECK(convergence_csv(s).rfind("step,loss,heldout_accuracy\n", 0) == 0);
}
