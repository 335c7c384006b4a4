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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "minos/error.hpp"
#include "minos/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string questions, solutions, labels, feedback, candidates, checkpoint, out;
  std::string mock, static_dir, endpoint, model_name, mode, reward_mode, bind;
  std::string strategy, aggregate;
  std::optional<double> threshold, lr, l2, heldout, feedback_fraction;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs, batch_size, stage1_epochs, port, max_in_flight, dim;
  bool two_stage = false;
  bool error_analysis = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Pipeline config (JSON)");
  cmd->add_option("--questions", o.questions, "questions.jsonl");
  cmd->add_option("--solutions", o.solutions, "solutions.jsonl");
  cmd->add_option("--labels", o.labels, "labels.jsonl");
  cmd->add_option("--feedback", o.feedback, "Review journal (feedback.jsonl)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Random seed");
}

minos::PipelineConfig resolve(const Overrides& o) {
  minos::PipelineConfig c = o.config.empty() ? minos::PipelineConfig{}
                                             : minos::load_config(o.config);
  auto set_path = [](std::filesystem::path& dst, const std::string& v) {
    if (!v.empty()) dst = v;
  };
  set_path(c.questions, o.questions);
  set_path(c.solutions, o.solutions);
  set_path(c.labels, o.labels);
  set_path(c.feedback, o.feedback);
  set_path(c.candidates, o.candidates);
  set_path(c.checkpoint, o.checkpoint);
  set_path(c.output_dir, o.out);
  if (!o.mock.empty()) c.mock_dir = o.mock;
  if (!o.static_dir.empty()) c.static_dir = o.static_dir;
  if (!o.endpoint.empty()) c.client.endpoint_url = o.endpoint;
  if (!o.model_name.empty()) c.client.model_name = o.model_name;
  if (o.max_in_flight) c.client.max_in_flight = *o.max_in_flight;
  if (!o.mode.empty()) c.prompt_mode = minos::parse_prompt_mode(o.mode);
  if (!o.reward_mode.empty()) c.reward_mode = minos::parse_reward_mode(o.reward_mode);
  if (!o.strategy.empty()) {
    c.strategies.clear();
    std::string rest = o.strategy;
    for (std::size_t pos; (pos = rest.find(',')) != std::string::npos; rest.erase(0, pos + 1)) {
      c.strategies.push_back(minos::parse_strategy(rest.substr(0, pos)));
    }
    c.strategies.push_back(minos::parse_strategy(rest));
  }
  if (!o.aggregate.empty()) c.aggregation = minos::parse_aggregation(o.aggregate);
  if (o.threshold) c.threshold = *o.threshold;
  if (o.seed) c.seed = *o.seed;
  if (o.lr) c.train.learning_rate = *o.lr;
  if (o.l2) c.train.l2 = *o.l2;
  if (o.epochs) c.train.epochs = *o.epochs;
  if (o.batch_size) c.train.batch_size = *o.batch_size;
  if (o.stage1_epochs) c.stage1.epochs = *o.stage1_epochs;
  if (o.heldout) c.heldout_fraction = *o.heldout;
  if (o.feedback_fraction) c.feedback_fraction = *o.feedback_fraction;
  if (o.dim) c.feature_dim = *o.dim;
  if (o.two_stage) c.two_stage = true;
  if (o.error_analysis) c.error_analysis = true;
  if (!o.bind.empty()) {
    const auto colon = o.bind.rfind(':');
    if (colon == std::string::npos) {
      c.bind_address = o.bind;
    } else {
      c.bind_address = o.bind.substr(0, colon);
      c.port = std::stoi(o.bind.substr(colon + 1));
    }
  }
  if (o.port) c.port = *o.port;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minos: step-level verifier harness for math solutions"};
  app.require_subcommand(1);
  Overrides o;

  auto* curate = app.add_subcommand("curate", "Collect step-level feedback into the journal");
  add_common(curate, o);
  curate->add_option("--mock", o.mock, "Fixture directory answering instead of the endpoint");
  curate->add_option("--mode", o.mode, "label_aware or direct")
      ->check(CLI::IsMember({"label_aware", "direct"}));
  curate->add_option("--endpoint", o.endpoint, "Chat-completion base URL");
  curate->add_option("--model", o.model_name, "Model name sent to the endpoint");
  curate->add_option("--max-in-flight", o.max_in_flight, "Concurrent request bound");

  auto* train = app.add_subcommand("train", "Train the toy verifier");
  add_common(train, o);
  train->add_flag("--two-stage", o.two_stage, "Pretrain error-type heads on feedback first");
  train->add_option("--reward-mode", o.reward_mode, "ORM or PRM");
  train->add_option("--checkpoint", o.checkpoint, "Checkpoint output path");
  train->add_option("--epochs", o.epochs);
  train->add_option("--stage1-epochs", o.stage1_epochs);
  train->add_option("--batch-size", o.batch_size);
  train->add_option("--lr", o.lr);
  train->add_option("--l2", o.l2);
  train->add_option("--heldout", o.heldout, "Held-out fraction");
  train->add_option("--feedback-fraction", o.feedback_fraction,
                    "Fraction of feedback steps used by the first stage");
  train->add_option("--dim", o.dim, "Feature dimension");

  auto* rerank = app.add_subcommand("rerank", "Select answers over sampled candidates");
  add_common(rerank, o);
  rerank->add_option("--candidates", o.candidates, "candidates.jsonl");
  rerank->add_option("--checkpoint", o.checkpoint, "Score unscored candidates with this model");
  rerank->add_option("--strategy", o.strategy, "bon, sc, sc_rm or a comma-separated list");
  rerank->add_option("--aggregate", o.aggregate, "min, product, last or mean");

  auto* metaeval = app.add_subcommand("metaeval", "Meta-evaluate a verifier");
  add_common(metaeval, o);
  metaeval->add_option("--checkpoint", o.checkpoint);
  metaeval->add_option("--candidates", o.candidates, "Use rewards from candidates.jsonl");
  metaeval->add_option("--threshold", o.threshold);
  metaeval->add_option("--aggregate", o.aggregate, "min, product, last or mean");
  metaeval->add_flag("--error-analysis", o.error_analysis,
                     "Classify incorrect steps of journal records");
  metaeval->add_option("--mock", o.mock, "Fixture directory for error analysis");
  metaeval->add_option("--endpoint", o.endpoint);

  auto* serve = app.add_subcommand("serve", "Serve the review API");
  add_common(serve, o);
  serve->add_option("--bind", o.bind, "host[:port]");
  serve->add_option("--port", o.port);
  serve->add_option("--static", o.static_dir, "Directory of review UI assets");

  auto* exp = app.add_subcommand("export", "Export reviewed feedback as SFT JSONL");
  add_common(exp, o);

  CLI11_PARSE(app, argc, argv);

  try {
    const minos::PipelineConfig config = resolve(o);
    if (curate->parsed()) {
      const auto s = minos::cmd_curate(config);
      std::cout << minos::to_json(s).dump(2) << "\n";
      return 0;
    }
    if (train->parsed()) {
      std::cout << minos::to_json(minos::cmd_train(config)).dump(2) << "\n";
      return 0;
    }
    if (rerank->parsed()) {
      std::cout << minos::to_json(minos::cmd_rerank(config)).dump(2) << "\n";
      return 0;
    }
    if (metaeval->parsed()) {
      const auto s = minos::cmd_metaeval(config);
      for (const auto& notice : s.notices) std::cerr << notice << "\n";
      nlohmann::json out{{"outcome_accuracy", s.outcome_accuracy}};
      out["step_accuracy"] = s.step_accuracy ? nlohmann::json(*s.step_accuracy) : nullptr;
      if (s.fp_recall) {
        out["fp_recall"] = *s.fp_recall;
        out["fp_average_reward"] = *s.fp_average_reward;
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (serve->parsed()) return minos::cmd_serve(config);
    if (exp->parsed()) {
      std::cout << minos::cmd_export(config) << " records exported\n";
      return 0;
    }
  } catch (const minos::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
