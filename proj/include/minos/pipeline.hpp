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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "minos/client.hpp"
#include "minos/curation.hpp"
#include "minos/rerank.hpp"
#include "minos/reward.hpp"
#include "minos/train.hpp"

namespace minos {

inline constexpr int kConfigVersion = 1;

/// Everything a pipeline run needs. Empty paths mean "not provided".
struct PipelineConfig {
  std::filesystem::path questions;
  std::filesystem::path solutions;
  std::filesystem::path labels;
  std::filesystem::path feedback;    // review journal; default <output>/feedback.jsonl
  std::filesystem::path candidates;  // candidates.jsonl, also used as a score source
  std::filesystem::path checkpoint;  // default <output>/model.json
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> mock_dir;

  ClientConfig client;
  TrainConfig train;
  TrainConfig stage1;
  RewardMode reward_mode = RewardMode::ORM;
  int feature_dim = kDefaultFeatureDim;
  bool two_stage = false;
  double heldout_fraction = 0.2;
  double feedback_fraction = 1.0;

  PromptMode prompt_mode = PromptMode::LabelAware;
  std::vector<Strategy> strategies = {Strategy::BestOfN, Strategy::SelfConsistency,
                                      Strategy::ScPlusRm};
  Aggregation aggregation = Aggregation::Min;
  double threshold = 0.5;
  std::uint64_t seed = 0;
  bool error_analysis = false;

  std::string bind_address = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> static_dir;

  std::filesystem::path feedback_path() const;
  std::filesystem::path checkpoint_path() const;
  std::filesystem::path output(const std::string& name) const;
};

/// Versioned JSON document; unknown keys are rejected. Relative paths are
/// resolved against `base_dir`.
PipelineConfig config_from_json(const nlohmann::json& j,
                                const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

/// Serves "<dir>/<id>.txt" as the completion content for a request whose
/// X-Request-Id ends in "/<id>"; missing fixtures answer 404.
Transport make_fixture_transport(const std::filesystem::path& dir);

struct CurateSummary {
  std::size_t records_in = 0;
  std::size_t records_out = 0;
  std::size_t skipped_existing = 0;
  std::size_t flagged = 0;
  std::vector<std::pair<std::string, std::string>> failures;
};

struct TrainSummary {
  std::size_t train_examples = 0;
  std::size_t heldout_examples = 0;
  std::size_t feedback_examples = 0;
  std::size_t skipped = 0;
  double final_loss = 0.0;
  double final_heldout_accuracy = 0.0;
};

struct StrategySummary {
  std::size_t questions = 0;
  std::size_t correct = 0;
  std::size_t failures = 0;
  double accuracy() const {
    return questions == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(questions);
  }
};

struct RerankSummary {
  std::map<Strategy, StrategySummary> strategies;
  std::size_t questions = 0;
  std::size_t covered = 0;
  double coverage() const {
    return questions == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(questions);
  }
};

struct MetaevalSummary {
  double outcome_accuracy = 0.0;
  std::optional<double> step_accuracy;
  std::optional<double> fp_recall;
  std::optional<double> fp_average_reward;
  std::optional<nlohmann::json> error_distribution;
  std::vector<std::string> notices;
};

/// Builds a prompt per solution, requests feedback, parses it, flags
/// inconsistencies and appends a Pending record to the journal. Failures are
/// logged per solution and never abort the run.
CurateSummary cmd_curate(const PipelineConfig& config);
/// Writes the checkpoint and <output>/convergence.csv.
TrainSummary cmd_train(const PipelineConfig& config);
/// Writes <output>/selections.jsonl and <output>/rerank_summary.json.
RerankSummary cmd_rerank(const PipelineConfig& config);
/// Writes <output>/metrics.json and, when false positives exist,
/// <output>/fp_report.json; <output>/error_distribution.json on request.
MetaevalSummary cmd_metaeval(const PipelineConfig& config);
/// Writes <output>/sft.jsonl from the journal; returns the line count.
std::size_t cmd_export(const PipelineConfig& config);
/// Blocks serving the review API.
int cmd_serve(const PipelineConfig& config);

nlohmann::json to_json(const CurateSummary& s);
nlohmann::json to_json(const TrainSummary& s);
nlohmann::json to_json(const RerankSummary& s);

}  // namespace minos
