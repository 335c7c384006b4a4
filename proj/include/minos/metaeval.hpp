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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "minos/corpus.hpp"
#include "minos/curation.hpp"
#include "minos/reward.hpp"

namespace minos {

struct MetaEvalItem {
  std::string question_id;
  std::string solution_id;
  Verdict outcome_label = Verdict::Incorrect;
  std::optional<std::vector<StepLabel>> step_labels;
};

struct MetaEvalSet {
  std::vector<MetaEvalItem> items;
};

/// Outcome labels come from comparing each extracted final answer with the
/// gold answer; unextractable answers count as Incorrect. Step labels are
/// attached when `corpus.labels` has an entry for the solution.
MetaEvalSet build_meta_eval_set(const Corpus& corpus);

/// Verifier output for one item: an outcome score and optional step scores.
struct ItemScores {
  double outcome = 0.5;
  std::optional<Eigen::VectorXd> steps;
};

struct VerifierMetrics {
  double outcome_accuracy = 0.0;
  std::optional<double> step_accuracy;
  double threshold = 0.5;
  std::size_t n_items = 0;
  std::size_t n_steps = 0;
};

/// A score predicts Correct iff score >= threshold.
VerifierMetrics eval_verifier(const MetaEvalSet& set, std::span<const ItemScores> scores,
                              double threshold = 0.5);

/// Scores every item with `model`. PRM models need step labels somewhere in
/// the set (Error{ModeMismatch} otherwise).
std::vector<ItemScores> score_items(const ToyRewardModel& model, const MetaEvalSet& set,
                                    const Corpus& corpus,
                                    Aggregation aggregation = Aggregation::Min);
VerifierMetrics eval_verifier(const ToyRewardModel& model, const MetaEvalSet& set,
                              const Corpus& corpus, double threshold = 0.5,
                              Aggregation aggregation = Aggregation::Min);

struct FalsePositiveReport {
  double recall = 0.0;
  double average_reward = 0.0;
  std::size_t n_samples = 0;
  double threshold = 0.5;
};

/// Correct final answer with at least one Incorrect gold step.
bool is_false_positive(const MetaEvalItem& item);

/// Over false-positive items only: recall is the fraction scored below
/// `threshold`, average_reward the mean outcome score.
/// Throws Error{NoFalsePositives}.
FalsePositiveReport false_positive_report(const MetaEvalSet& set,
                                          std::span<const ItemScores> scores,
                                          double threshold = 0.5);

std::string build_error_analysis_prompt(const Question& question, const Solution& solution,
                                        const FeedbackRecord& feedback);

/// One "Step <k>: <Category>" line per expected incorrect step.
std::vector<std::pair<int, ErrorType>> parse_error_analysis(std::string_view raw,
                                                            std::size_t expected);

struct ErrorDistribution {
  std::array<std::size_t, 5> counts{};

  std::size_t total() const;
  std::size_t operator[](ErrorType type) const {
    return counts[static_cast<std::size_t>(type)];
  }
  ErrorDistribution& operator+=(const ErrorDistribution& other);
  friend bool operator==(const ErrorDistribution&, const ErrorDistribution&) = default;
};

ErrorDistribution error_distribution(std::span<const ErrorType> classifications);
ErrorDistribution error_distribution(std::span<const std::pair<int, ErrorType>> classifications);

nlohmann::json to_json(const VerifierMetrics& metrics);
nlohmann::json to_json(const FalsePositiveReport& report);
nlohmann::json to_json(const ErrorDistribution& distribution);

}  // namespace minos
