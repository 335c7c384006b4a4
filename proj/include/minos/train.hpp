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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "minos/reward.hpp"

namespace minos {

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 50;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double l2 = 1e-4;
};

/// One solution as seen by the scorer: a single feature row for ORM, one
/// row per step for PRM, with matching 0/1 labels.
struct LabeledExample {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;
};

/// One step with its multi-hot error-type targets.
struct AuxExample {
  Eigen::VectorXd features;
  Eigen::Matrix<double, kErrorTypeCount, 1> targets =
      Eigen::Matrix<double, kErrorTypeCount, 1>::Zero();
};

struct ConvergencePoint {
  long step = 0;
  double loss = 0.0;
  double heldout_accuracy = 0.0;
};
using ConvergenceSeries = std::vector<ConvergencePoint>;

struct TrainResult {
  ToyRewardModel model;
  ConvergenceSeries series;
};

struct Stage2Gradient {
  Eigen::VectorXd weights;
  double bias = 0.0;
};

/// Throws Error{LabelCountMismatch} when a PRM example lacks one label per
/// step.
LabeledExample make_example(const ToyRewardModel& model, const Question& question,
                            const Solution& solution, const SolutionLabels& labels);

/// Mean per-solution loss over `batch` plus (l2 / 2) |w|^2.
double stage2_objective(const ToyRewardModel& model,
                        std::span<const LabeledExample> batch, double l2);
Stage2Gradient stage2_gradient(const ToyRewardModel& model,
                               std::span<const LabeledExample> batch, double l2);

/// Mean over steps of the summed per-type BCE plus (l2 / 2) |A|_F^2.
double stage1_objective(const ToyRewardModel& model,
                        std::span<const AuxExample> batch, double l2);
Eigen::MatrixXd stage1_gradient(const ToyRewardModel& model,
                                std::span<const AuxExample> batch, double l2);

/// Fraction of scored rows whose thresholded prediction matches the label.
double heldout_accuracy(const ToyRewardModel& model,
                        std::span<const LabeledExample> examples,
                        double threshold = 0.5);

/// Mini-batch gradient descent on the outcome (ORM) or process (PRM) loss.
/// One convergence point is recorded before training and after every epoch.
TrainResult train_stage2(ToyRewardModel model, std::span<const LabeledExample> train,
                         std::span<const LabeledExample> heldout,
                         const TrainConfig& config);

/// Fits the auxiliary error-type heads; weights and bias are left alone.
ToyRewardModel train_stage1_analog(ToyRewardModel model,
                                   std::span<const AuxExample> dataset,
                                   const TrainConfig& config);

/// Sets the scoring weights to the negated column sum of the auxiliary
/// heads, scaled to unit norm. No-op when the heads are all zero.
void init_from_auxiliary(ToyRewardModel& model);

TrainResult train_two_stage(ToyRewardModel model, std::span<const AuxExample> feedback,
                            std::span<const LabeledExample> train,
                            std::span<const LabeledExample> heldout,
                            const TrainConfig& stage1, const TrainConfig& stage2);

/// Max relative error between the analytic stage-2 gradient on `sample` and
/// central finite differences with step `h`, over weights and bias. The
/// differences are evaluated in extended precision.
double grad_check(const ToyRewardModel& model, const LabeledExample& sample,
                  double l2 = 1e-4, double h = 1e-5);
double grad_check_stage1(const ToyRewardModel& model, const AuxExample& sample,
                         double l2 = 1e-4, double h = 1e-5);

nlohmann::json checkpoint_to_json(const ToyRewardModel& model);
ToyRewardModel checkpoint_from_json(const nlohmann::json& j);
void save_checkpoint(const std::filesystem::path& path, const ToyRewardModel& model);
ToyRewardModel load_checkpoint(const std::filesystem::path& path);

/// "step,loss,heldout_accuracy" with a header row.
std::string convergence_csv(const ConvergenceSeries& series);
ConvergenceSeries parse_convergence_csv(std::string_view csv);

}  // namespace minos
