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

#include "minos/metaeval.hpp"

#include <regex>

#include "minos/error.hpp"
#include "strings.hpp"

namespace minos {

MetaEvalSet build_meta_eval_set(const Corpus& corpus) {
  MetaEvalSet set;
  for (const Solution& s : corpus.solutions) {
    const Question& q = corpus.question(s.question_id);
    MetaEvalItem item;
    item.question_id = q.id;
    item.solution_id = s.id;
    item.outcome_label = s.final_answer && answers_equivalent(*s.final_answer, q.gold_answer)
                             ? Verdict::Correct
                             : Verdict::Incorrect;
    if (const SolutionLabels* labels = corpus.find_labels(s.id);
        labels != nullptr && !labels->steps.empty()) {
      item.step_labels = labels->steps;
    }
    set.items.push_back(std::move(item));
  }
  return set;
}

VerifierMetrics eval_verifier(const MetaEvalSet& set, std::span<const ItemScores> scores,
                              double threshold) {
  if (set.items.size() != scores.size()) {
    throw Error(Errc::LengthMismatch, "one score per meta-evaluation item");
  }
  if (set.items.empty()) throw Error(Errc::EmptyDataset, "empty meta-evaluation set");
  VerifierMetrics m;
  m.threshold = threshold;
  m.n_items = set.items.size();
  std::size_t outcome_hits = 0;
  std::size_t step_hits = 0;
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    const MetaEvalItem& item = set.items[i];
    const bool predicted = scores[i].outcome >= threshold;
    outcome_hits += predicted == (item.outcome_label == Verdict::Correct) ? 1 : 0;
    if (!item.step_labels || !scores[i].steps) continue;
    const auto& labels = *item.step_labels;
    const Eigen::VectorXd& steps = *scores[i].steps;
    if (static_cast<std::size_t>(steps.size()) != labels.size()) {
      throw Error(Errc::LengthMismatch, "solution '" + item.solution_id +
                                            "': step scores and labels differ in length");
    }
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const bool step_predicted = steps(static_cast<Eigen::Index>(k)) >= threshold;
      step_hits += step_predicted == (labels[k].verdict == Verdict::Correct) ? 1 : 0;
      ++m.n_steps;
    }
  }
  m.outcome_accuracy = static_cast<double>(outcome_hits) / static_cast<double>(m.n_items);
  if (m.n_steps > 0) {
    m.step_accuracy = static_cast<double>(step_hits) / static_cast<double>(m.n_steps);
  }
  return m;
}

std::vector<ItemScores> score_items(const ToyRewardModel& model, const MetaEvalSet& set,
                                    const Corpus& corpus, Aggregation aggregation) {
  if (model.mode() == RewardMode::PRM) {
    bool any_steps = false;
    for (const auto& item : set.items) any_steps |= item.step_labels.has_value();
    if (!any_steps) {
      throw Error(Errc::ModeMismatch, "a PRM verifier needs step labels to evaluate against");
    }
  }
  std::vector<ItemScores> scores;
  scores.reserve(set.items.size());
  for (const auto& item : set.items) {
    const Solution* s = corpus.find_solution(item.solution_id);
    if (s == nullptr) throw Error(Errc::NotFound, "solution '" + item.solution_id + "'");
    const ScoredSolution scored =
        score_solution(model, corpus.question(item.question_id), *s, aggregation);
    scores.push_back({scored.outcome_reward, scored.step_rewards});
  }
  return scores;
}

VerifierMetrics eval_verifier(const ToyRewardModel& model, const MetaEvalSet& set,
                              const Corpus& corpus, double threshold,
                              Aggregation aggregation) {
  const auto scores = score_items(model, set, corpus, aggregation);
  return eval_verifier(set, scores, threshold);
}

bool is_false_positive(const MetaEvalItem& item) {
  if (item.outcome_label != Verdict::Correct || !item.step_labels) return false;
  for (const auto& s : *item.step_labels) {
    if (s.verdict == Verdict::Incorrect) return true;
  }
  return false;
}

FalsePositiveReport false_positive_report(const MetaEvalSet& set,
                                          std::span<const ItemScores> scores,
                                          double threshold) {
  if (set.items.size() != scores.size()) {
    throw Error(Errc::LengthMismatch, "one score per meta-evaluation item");
  }
  FalsePositiveReport report;
  report.threshold = threshold;
  std::size_t flagged = 0;
  double mean = 0.0;
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    if (!is_false_positive(set.items[i])) continue;
    ++report.n_samples;
    const double r = scores[i].outcome;
    flagged += r < threshold ? 1 : 0;
    // Running mean keeps a constant input exact.
    mean += (r - mean) / static_cast<double>(report.n_samples);
  }
  if (report.n_samples == 0) throw Error(Errc::NoFalsePositives, "no false-positive samples");
  report.recall = static_cast<double>(flagged) / static_cast<double>(report.n_samples);
  report.average_reward = mean;
  return report;
}

std::string build_error_analysis_prompt(const Question& question, const Solution& solution,
                                        const FeedbackRecord& feedback) {
  std::vector<const StepFeedback*> incorrect;
  for (const auto& s : feedback.step_feedback) {
    if (s.verdict == Verdict::Incorrect) incorrect.push_back(&s);
  }
  if (incorrect.empty()) {
    throw Error(Errc::NoIncorrectSteps, "record '" + feedback.id + "'");
  }
  std::string text =
      "You are given a math question, a step-by-step solution and a reviewer's "
      "feedback on every step. Using the feedback as a reference, classify the cause "
      "of each incorrect step into exactly one of these categories:\n"
      "Unrelated: the step is irrelevant and does not help reach the final answer.\n"
      "Accumulation: the step is wrong because of a mistake in an earlier step.\n"
      "Calculation: the step contains an arithmetic or computational mistake.\n"
      "Logic: the step's reasoning is flawed for the problem being solved.\n"
      "Other: the step is wrong for a reason not covered above.\n\n";
  text += "Question:\n" + std::string(detail::trim(question.text)) + "\n\nSolution:\n";
  for (const Step& step : solution.steps) {
    text += "Step " + std::to_string(step.index) + ": " + step.text + "\n";
  }
  text += "\nFeedback:\n" + render_feedback(feedback.step_feedback, feedback.outcome_verdict) +
          "\n\nClassify these " + std::to_string(incorrect.size()) + " incorrect step(s):";
  for (const StepFeedback* s : incorrect) text += " " + std::to_string(s->step_index);
  text +=
      "\n\nOutput format:\nWrite exactly one line per listed step, in the form\n"
      "Step <k>: <Unrelated|Accumulation|Calculation|Logic|Other>\n"
      "Do not write anything else.\n";
  return text;
}

std::vector<std::pair<int, ErrorType>> parse_error_analysis(std::string_view raw,
                                                            std::size_t expected) {
  static const std::regex line_re(R"(^\s*\**\s*step\s*(\d+)\s*\**\s*:\s*\**\s*([A-Za-z]+))",
                                  std::regex::icase);
  std::vector<std::pair<int, ErrorType>> out;
  for (std::string_view line : detail::split_lines(raw)) {
    const std::string l(line);
    std::smatch m;
    if (!std::regex_search(l, m, line_re)) continue;
    out.emplace_back(std::stoi(m[1].str()), parse_error_type(m[2].str()));
  }
  if (out.size() != expected) {
    throw Error(Errc::CountMismatch, "expected " + std::to_string(expected) +
                                         " category lines, found " + std::to_string(out.size()));
  }
  return out;
}

std::size_t ErrorDistribution::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

ErrorDistribution& ErrorDistribution::operator+=(const ErrorDistribution& other) {
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  return *this;
}

ErrorDistribution error_distribution(std::span<const ErrorType> classifications) {
  ErrorDistribution d;
  for (ErrorType t : classifications) ++d.counts[static_cast<std::size_t>(t)];
  return d;
}

ErrorDistribution error_distribution(
    std::span<const std::pair<int, ErrorType>> classifications) {
  ErrorDistribution d;
  for (const auto& [step, t] : classifications) ++d.counts[static_cast<std::size_t>(t)];
  return d;
}

nlohmann::json to_json(const VerifierMetrics& m) {
  nlohmann::json j{{"outcome_accuracy", m.outcome_accuracy},
                   {"step_accuracy", nullptr},
                   {"threshold", m.threshold},
                   {"n_items", m.n_items},
                   {"n_steps", m.n_steps}};
  if (m.step_accuracy) j["step_accuracy"] = *m.step_accuracy;
  return j;
}

nlohmann::json to_json(const FalsePositiveReport& r) {
  return {{"recall", r.recall},
          {"average_reward", r.average_reward},
          {"n_samples", r.n_samples},
          {"threshold", r.threshold}};
}

nlohmann::json to_json(const ErrorDistribution& d) {
  nlohmann::json counts = nlohmann::json::object();
  for (ErrorType t : kErrorTypes) counts[std::string(to_string(t))] = d[t];
  return {{"counts", counts}, {"total", d.total()}};
}

}  // namespace minos
