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

#include "minos/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "minos/corpus.hpp"
#include "minos/error.hpp"
#include "minos/metaeval.hpp"
#include "minos/review_service.hpp"
#include "minos/review_store.hpp"
#include "strings.hpp"

namespace minos {
namespace fs = std::filesystem;

std::filesystem::path PipelineConfig::feedback_path() const {
  return feedback.empty() ? output("feedback.jsonl") : feedback;
}

std::filesystem::path PipelineConfig::checkpoint_path() const {
  return checkpoint.empty() ? output("model.json") : checkpoint;
}

std::filesystem::path PipelineConfig::output(const std::string& name) const {
  return output_dir / name;
}

namespace {

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_relative() && !base.empty() ? base / p : p;
}

void read_train_config(const nlohmann::json& j, TrainConfig& t) {
  for (const auto& [key, value] : j.items()) {
    if (key == "learning_rate") t.learning_rate = value.get<double>();
    else if (key == "epochs") t.epochs = value.get<int>();
    else if (key == "batch_size") t.batch_size = value.get<int>();
    else if (key == "seed") t.seed = value.get<std::uint64_t>();
    else if (key == "l2") t.l2 = value.get<double>();
    else throw Error(Errc::MalformedInput, "unknown training key '" + key + "'");
  }
}

nlohmann::json train_config_json(const TrainConfig& t) {
  return {{"learning_rate", t.learning_rate},
          {"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"seed", t.seed},
          {"l2", t.l2}};
}

void require_path(const fs::path& p, const std::string& what) {
  if (p.empty()) throw Error(Errc::MalformedInput, what + " path is not configured");
  if (!fs::exists(p)) throw Error(Errc::Io, what + " file " + p.string() + " does not exist");
}

Corpus load_configured_corpus(const PipelineConfig& config, bool need_labels) {
  require_path(config.questions, "questions");
  require_path(config.solutions, "solutions");
  std::optional<fs::path> labels;
  if (!config.labels.empty()) {
    require_path(config.labels, "labels");
    labels = config.labels;
  } else if (need_labels) {
    throw Error(Errc::MalformedInput, "labels path is not configured");
  }
  return load_corpus(config.questions, config.solutions, labels);
}

std::unique_ptr<ChatClient> make_client(const PipelineConfig& config) {
  Transport transport;
  if (config.mock_dir) transport = make_fixture_transport(*config.mock_dir);
  return std::make_unique<ChatClient>(config.client, transport, Sleeper{}, config.seed);
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  const std::size_t count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

std::string record_id_for(const std::string& solution_id, PromptMode mode) {
  return mode == PromptMode::LabelAware ? "fb-" + solution_id : "fbd-" + solution_id;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  return order;
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace

PipelineConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  PipelineConfig c;
  const int version = j.value("version", kConfigVersion);
  if (version != kConfigVersion) {
    throw Error(Errc::MalformedInput, "unsupported config version " + std::to_string(version));
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "version") continue;
    else if (key == "questions") c.questions = resolve(base_dir, value.get<std::string>());
    else if (key == "solutions") c.solutions = resolve(base_dir, value.get<std::string>());
    else if (key == "labels") c.labels = resolve(base_dir, value.get<std::string>());
    else if (key == "feedback") c.feedback = resolve(base_dir, value.get<std::string>());
    else if (key == "candidates") c.candidates = resolve(base_dir, value.get<std::string>());
    else if (key == "checkpoint") c.checkpoint = resolve(base_dir, value.get<std::string>());
    else if (key == "output_dir") c.output_dir = resolve(base_dir, value.get<std::string>());
    else if (key == "mock_dir") c.mock_dir = resolve(base_dir, value.get<std::string>());
    else if (key == "static_dir") c.static_dir = resolve(base_dir, value.get<std::string>());
    else if (key == "client") {
      for (const auto& [k, v] : value.items()) {
        if (k == "endpoint_url") c.client.endpoint_url = v.get<std::string>();
        else if (k == "model_name") c.client.model_name = v.get<std::string>();
        else if (k == "temperature") c.client.temperature = v.get<double>();
        else if (k == "max_in_flight") c.client.max_in_flight = v.get<int>();
        else if (k == "max_retries") c.client.max_retries = v.get<int>();
        else if (k == "timeout_seconds") c.client.timeout_seconds = v.get<int>();
        else if (k == "backoff_base_ms") c.client.backoff_base = std::chrono::milliseconds(v.get<long>());
        else if (k == "backoff_factor") c.client.backoff_factor = v.get<double>();
        else throw Error(Errc::MalformedInput, "unknown client key '" + k + "'");
      }
    } else if (key == "train") read_train_config(value, c.train);
    else if (key == "stage1") read_train_config(value, c.stage1);
    else if (key == "reward_mode") c.reward_mode = parse_reward_mode(value.get<std::string>());
    else if (key == "feature_dim") c.feature_dim = value.get<int>();
    else if (key == "two_stage") c.two_stage = value.get<bool>();
    else if (key == "heldout_fraction") c.heldout_fraction = value.get<double>();
    else if (key == "feedback_fraction") c.feedback_fraction = value.get<double>();
    else if (key == "prompt_mode") c.prompt_mode = parse_prompt_mode(value.get<std::string>());
    else if (key == "strategies") {
      c.strategies.clear();
      for (const auto& s : value) c.strategies.push_back(parse_strategy(s.get<std::string>()));
    } else if (key == "aggregation") c.aggregation = parse_aggregation(value.get<std::string>());
    else if (key == "threshold") c.threshold = value.get<double>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "error_analysis") c.error_analysis = value.get<bool>();
    else if (key == "bind_address") c.bind_address = value.get<std::string>();
    else if (key == "port") c.port = value.get<int>();
    else throw Error(Errc::MalformedInput, "unknown config key '" + key + "'");
  }
  return c;
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  nlohmann::json strategies = nlohmann::json::array();
  for (Strategy s : c.strategies) strategies.push_back(to_string(s));
  nlohmann::json j{
      {"version", kConfigVersion},
      {"questions", c.questions.string()},
      {"solutions", c.solutions.string()},
      {"labels", c.labels.string()},
      {"feedback", c.feedback.string()},
      {"candidates", c.candidates.string()},
      {"checkpoint", c.checkpoint.string()},
      {"output_dir", c.output_dir.string()},
      {"client",
       {{"endpoint_url", c.client.endpoint_url},
        {"model_name", c.client.model_name},
        {"temperature", c.client.temperature},
        {"max_in_flight", c.client.max_in_flight},
        {"max_retries", c.client.max_retries},
        {"timeout_seconds", c.client.timeout_seconds},
        {"backoff_base_ms", c.client.backoff_base.count()},
        {"backoff_factor", c.client.backoff_factor}}},
      {"train", train_config_json(c.train)},
      {"stage1", train_config_json(c.stage1)},
      {"reward_mode", to_string(c.reward_mode)},
      {"feature_dim", c.feature_dim},
      {"two_stage", c.two_stage},
      {"heldout_fraction", c.heldout_fraction},
      {"feedback_fraction", c.feedback_fraction},
      {"prompt_mode", to_string(c.prompt_mode)},
      {"strategies", strategies},
      {"aggregation", to_string(c.aggregation)},
      {"threshold", c.threshold},
      {"seed", c.seed},
      {"error_analysis", c.error_analysis},
      {"bind_address", c.bind_address},
      {"port", c.port}};
  if (c.mock_dir) j["mock_dir"] = c.mock_dir->string();
  if (c.static_dir) j["static_dir"] = c.static_dir->string();
  return j;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedInput, path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

Transport make_fixture_transport(const fs::path& dir) {
  return [dir](const HttpRequest& request) {
    auto it = request.headers.find("X-Request-Id");
    if (it == request.headers.end()) return HttpResponse{400, "missing X-Request-Id"};
    const std::string& id = it->second;
    const bool analysis = id.rfind("analysis/", 0) == 0;
    const std::string key = id.substr(id.rfind('/') + 1);
    const fs::path file = dir / (key + (analysis ? ".analysis.txt" : ".txt"));
    std::ifstream in(file, std::ios::binary);
    if (!in) return HttpResponse{404, "no fixture " + file.string()};
    std::stringstream content;
    content << in.rdbuf();
    return HttpResponse{200, chat_completion_body(content.str()).dump()};
  };
}

CurateSummary cmd_curate(const PipelineConfig& config) {
  const Corpus corpus = load_configured_corpus(config, config.prompt_mode == PromptMode::LabelAware);
  ReviewStore store(config.feedback_path());
  auto client = make_client(config);

  CurateSummary summary;
  summary.records_in = corpus.solutions.size() + corpus.rejected.size();
  for (const auto& [id, reason] : corpus.rejected) summary.failures.emplace_back(id, reason);

  struct Outcome {
    std::optional<FeedbackRecord> record;
    std::string error;
    bool skipped = false;
  };
  std::vector<Outcome> outcomes(corpus.solutions.size());
  parallel_for(corpus.solutions.size(), config.client.max_in_flight, [&](std::size_t i) {
    const Solution& s = corpus.solutions[i];
    Outcome& out = outcomes[i];
    const std::string record_id = record_id_for(s.id, config.prompt_mode);
    if (store.contains(record_id)) {
      out.skipped = true;
      return;
    }
    try {
      const Question& q = corpus.question(s.question_id);
      const SolutionLabels* gold = corpus.find_labels(s.id);
      FeedbackPrompt prompt;
      if (config.prompt_mode == PromptMode::LabelAware) {
        if (gold == nullptr) throw Error(Errc::LabelCountMismatch, "no gold labels");
        prompt = build_label_aware_prompt(q, s, *gold);
      } else {
        prompt = build_direct_prompt(q, s);
      }
      const FeedbackResponse response = client->request_feedback(prompt);
      FeedbackRecord record = parse_feedback(response.content,
                                             static_cast<int>(s.steps.size()), prompt.mode);
      record.id = record_id;
      record.question_id = q.id;
      record.solution_id = s.id;
      record.consistency_flags = gold != nullptr ? check_consistency(record, *gold)
                                                 : check_consistency(record);
      out.record = std::move(record);
    } catch (const Error& e) {
      out.error = e.what();
    }
  });

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    Outcome& out = outcomes[i];
    if (out.skipped) {
      ++summary.skipped_existing;
    } else if (out.record) {
      store.add(*out.record);
      ++summary.records_out;
      if (!out.record->consistency_flags.empty()) ++summary.flagged;
    } else {
      summary.failures.emplace_back(corpus.solutions[i].id, out.error);
    }
  }
  write_json_file(config.output("curation_summary.json"), to_json(summary));
  return summary;
}

TrainSummary cmd_train(const PipelineConfig& config) {
  const Corpus corpus = load_configured_corpus(config, true);
  ToyRewardModel model(config.reward_mode, config.feature_dim);
  TrainSummary summary;

  std::vector<LabeledExample> examples;
  for (const Solution& s : corpus.solutions) {
    const SolutionLabels* gold = corpus.find_labels(s.id);
    if (gold == nullptr) {
      ++summary.skipped;
      continue;
    }
    try {
      examples.push_back(make_example(model, corpus.question(s.question_id), s, *gold));
    } catch (const Error& e) {
      std::cerr << "skipping " << s.id << ": " << e.what() << "\n";
      ++summary.skipped;
    }
  }
  if (examples.empty()) throw Error(Errc::EmptyDataset, "no labeled solutions to train on");

  const auto order = seeded_permutation(examples.size(), config.seed);
  auto n_heldout = static_cast<std::size_t>(
      std::floor(config.heldout_fraction * static_cast<double>(examples.size())));
  n_heldout = std::min(n_heldout, examples.size() - 1);
  std::vector<LabeledExample> heldout;
  std::vector<LabeledExample> train;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_heldout ? heldout : train).push_back(std::move(examples[order[i]]));
  }
  summary.train_examples = train.size();
  summary.heldout_examples = heldout.size();

  TrainConfig stage2 = config.train;
  stage2.seed = config.seed;
  TrainResult result{model, {}};
  if (config.two_stage) {
    ReviewStore store(config.feedback_path());
    std::vector<AuxExample> aux;
    for (const FeedbackRecord& r : store.records()) {
      if (r.review_status == ReviewStatus::Rejected) continue;
      const Solution* s = corpus.find_solution(r.solution_id);
      if (s == nullptr || s->steps.size() != r.step_feedback.size()) continue;
      const Question& q = corpus.question(s->question_id);
      std::map<int, ErrorTypeSet> mined;
      for (const auto& [step, types] : mine_error_type_labels(r)) mined[step] = types;
      const int k = static_cast<int>(s->steps.size());
      for (const Step& step : s->steps) {
        AuxExample ex;
        ex.features = featurize(q, step, k, config.feature_dim);
        if (auto it = mined.find(step.index); it != mined.end()) {
          for (std::size_t t = 0; t < kErrorTypeCount; ++t) {
            ex.targets(static_cast<Eigen::Index>(t)) = it->second.test(t) ? 1.0 : 0.0;
          }
        }
        aux.push_back(std::move(ex));
      }
    }
    if (config.feedback_fraction < 1.0) {
      const auto keep = static_cast<std::size_t>(
          std::floor(std::max(0.0, config.feedback_fraction) * static_cast<double>(aux.size())));
      const auto perm = seeded_permutation(aux.size(), config.seed ^ 0x9e3779b97f4a7c15ull);
      std::vector<AuxExample> subset;
      for (std::size_t i = 0; i < keep; ++i) subset.push_back(aux[perm[i]]);
      aux = std::move(subset);
    }
    summary.feedback_examples = aux.size();
    TrainConfig stage1 = config.stage1;
    stage1.seed = config.seed;
    result = train_two_stage(model, aux, train, heldout, stage1, stage2);
  } else {
    result = train_stage2(model, train, heldout, stage2);
  }

  save_checkpoint(config.checkpoint_path(), result.model);
  write_text(config.output("convergence.csv"), convergence_csv(result.series));
  summary.final_loss = result.series.back().loss;
  summary.final_heldout_accuracy = result.series.back().heldout_accuracy;
  return summary;
}

RerankSummary cmd_rerank(const PipelineConfig& config) {
  require_path(config.questions, "questions");
  require_path(config.candidates, "candidates");
  const auto questions = load_questions(config.questions);
  auto sets = candidate_sets_from_jsonl(read_jsonl(config.candidates));

  if (!config.checkpoint.empty() && fs::exists(config.checkpoint) && !config.solutions.empty()) {
    const ToyRewardModel model = load_checkpoint(config.checkpoint);
    const Corpus corpus = load_corpus(config.questions, config.solutions);
    for (auto& set : sets) {
      for (auto& c : set.candidates) {
        const Solution* s = corpus.find_solution(c.solution_id);
        if (s == nullptr) continue;
        if (!c.answer && s->final_answer) c.answer = s->final_answer;
        if (c.outcome_reward || c.step_rewards || s->steps.empty()) continue;
        const ScoredSolution scored =
            score_solution(model, corpus.question(s->question_id), *s, config.aggregation);
        if (scored.step_rewards) {
          c.step_rewards = std::vector<double>(scored.step_rewards->data(),
                                               scored.step_rewards->data() +
                                                   scored.step_rewards->size());
        } else {
          c.outcome_reward = scored.outcome_reward;
        }
      }
    }
  }

  RerankSummary summary;
  std::vector<nlohmann::json> rows;
  for (auto& set : sets) {
    fill_outcome_rewards(set, config.aggregation);
    auto q = questions.find(set.question_id);
    if (q == questions.end()) throw Error(Errc::MissingQuestion, "'" + set.question_id + "'");
    ++summary.questions;
    const bool covered = std::any_of(set.candidates.begin(), set.candidates.end(), [&](const Candidate& c) {
      return c.answer && answers_equivalent(*c.answer, q->second.gold_answer);
    });
    summary.covered += covered ? 1 : 0;
    for (Strategy strategy : config.strategies) {
      StrategySummary& s = summary.strategies[strategy];
      ++s.questions;
      nlohmann::json row{{"question_id", set.question_id},
                         {"strategy", to_string(strategy)},
                         {"chosen_answer", nullptr},
                         {"correct", false}};
      try {
        const SelectionResult result = select_answer(set, strategy);
        const bool correct = answers_equivalent(result.chosen_answer, q->second.gold_answer);
        row["chosen_answer"] = result.chosen_answer;
        row["correct"] = correct;
        s.correct += correct ? 1 : 0;
      } catch (const Error& e) {
        if (e.code() != Errc::NoExtractableAnswer && e.code() != Errc::MissingReward) throw;
        ++s.failures;
      }
      rows.push_back(std::move(row));
    }
  }
  write_jsonl(config.output("selections.jsonl"), rows);
  write_json_file(config.output("rerank_summary.json"), to_json(summary));
  return summary;
}

namespace {

std::vector<ItemScores> scores_from_candidates(const MetaEvalSet& set, const fs::path& path,
                                               Aggregation aggregation) {
  std::map<std::string, Candidate> by_solution;
  for (auto& cs : candidate_sets_from_jsonl(read_jsonl(path))) {
    fill_outcome_rewards(cs, aggregation);
    for (auto& c : cs.candidates) by_solution[c.solution_id] = c;
  }
  std::vector<ItemScores> scores;
  for (const auto& item : set.items) {
    auto it = by_solution.find(item.solution_id);
    if (it == by_solution.end() || !it->second.outcome_reward) {
      throw Error(Errc::MissingReward, "no score for solution '" + item.solution_id + "'");
    }
    ItemScores s{*it->second.outcome_reward, std::nullopt};
    if (it->second.step_rewards) {
      const auto& r = *it->second.step_rewards;
      s.steps = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

}  // namespace

MetaevalSummary cmd_metaeval(const PipelineConfig& config) {
  const Corpus corpus = load_configured_corpus(config, false);
  const MetaEvalSet set = build_meta_eval_set(corpus);
  std::vector<ItemScores> scores;
  if (!config.candidates.empty()) {
    scores = scores_from_candidates(set, config.candidates, config.aggregation);
  } else {
    require_path(config.checkpoint_path(), "checkpoint");
    scores = score_items(load_checkpoint(config.checkpoint_path()), set, corpus,
                         config.aggregation);
  }

  MetaevalSummary summary;
  const VerifierMetrics metrics = eval_verifier(set, scores, config.threshold);
  summary.outcome_accuracy = metrics.outcome_accuracy;
  summary.step_accuracy = metrics.step_accuracy;
  write_json_file(config.output("metrics.json"), to_json(metrics));

  try {
    const FalsePositiveReport fp = false_positive_report(set, scores, config.threshold);
    summary.fp_recall = fp.recall;
    summary.fp_average_reward = fp.average_reward;
    write_json_file(config.output("fp_report.json"), to_json(fp));
  } catch (const Error& e) {
    if (e.code() != Errc::NoFalsePositives) throw;
    fs::remove(config.output("fp_report.json"));
    summary.notices.push_back("no false-positive samples; fp_report.json omitted");
  }

  if (config.error_analysis) {
    ReviewStore store(config.feedback_path());
    auto client = make_client(config);
    std::vector<std::pair<int, ErrorType>> all;
    std::size_t failures = 0;
    for (const FeedbackRecord& r : store.records()) {
      if (r.review_status == ReviewStatus::Rejected) continue;
      const Solution* s = corpus.find_solution(r.solution_id);
      if (s == nullptr) continue;
      std::size_t incorrect = 0;
      for (const auto& f : r.step_feedback) incorrect += f.verdict == Verdict::Incorrect ? 1 : 0;
      if (incorrect == 0) continue;
      try {
        const std::string prompt =
            build_error_analysis_prompt(corpus.question(s->question_id), *s, r);
        const auto response = client->complete(prompt, "analysis/" + r.id);
        auto parsed = parse_error_analysis(response.content, incorrect);
        all.insert(all.end(), parsed.begin(), parsed.end());
      } catch (const Error& e) {
        ++failures;
        summary.notices.push_back("error analysis failed for " + r.id + ": " + e.what());
      }
    }
    nlohmann::json dist = to_json(error_distribution(std::span<const std::pair<int, ErrorType>>(all)));
    dist["failures"] = failures;
    write_json_file(config.output("error_distribution.json"), dist);
    summary.error_distribution = dist;
  }
  return summary;
}

std::size_t cmd_export(const PipelineConfig& config) {
  const Corpus corpus = load_configured_corpus(config, false);
  require_path(config.feedback_path(), "feedback");
  ReviewStore store(config.feedback_path());
  const auto rows = export_sft_dataset(store.records(), corpus);
  write_jsonl(config.output("sft.jsonl"), rows);
  return rows.size();
}

int cmd_serve(const PipelineConfig& config) {
  const Corpus corpus = load_configured_corpus(config, false);
  ReviewStore store(config.feedback_path());
  ReviewService service(store, corpus, config.static_dir);
  std::cerr << "serving review API on http://" << config.bind_address << ":" << config.port
            << "\n";
  return service.listen(config.bind_address, config.port) ? 0 : 1;
}

nlohmann::json to_json(const CurateSummary& s) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& [id, reason] : s.failures) {
    failures.push_back({{"solution_id", id}, {"error", reason}});
  }
  return {{"records_in", s.records_in},
          {"records_out", s.records_out},
          {"skipped_existing", s.skipped_existing},
          {"flagged", s.flagged},
          {"failed", s.failures.size()},
          {"failures", failures}};
}

nlohmann::json to_json(const TrainSummary& s) {
  return {{"train_examples", s.train_examples},
          {"heldout_examples", s.heldout_examples},
          {"feedback_examples", s.feedback_examples},
          {"skipped", s.skipped},
          {"final_loss", s.final_loss},
          {"final_heldout_accuracy", s.final_heldout_accuracy}};
}

nlohmann::json to_json(const RerankSummary& s) {
  nlohmann::json strategies = nlohmann::json::object();
  for (const auto& [strategy, st] : s.strategies) {
    strategies[std::string(to_string(strategy))] = {{"questions", st.questions},
                                                    {"correct", st.correct},
                                                    {"failures", st.failures},
                                                    {"accuracy", st.accuracy()}};
  }
  return {{"questions", s.questions},
          {"covered", s.covered},
          {"coverage", s.coverage()},
          {"strategies", strategies}};
}

}  // namespace minos
