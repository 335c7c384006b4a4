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

#include "minos/reward.hpp"

#include <cctype>
#include <cstdint>

#include "strings.hpp"

namespace minos {
namespace {

std::uint64_t fnv1a(std::string_view token) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : token) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void add_bag_of_words(std::string_view text, Eigen::Ref<Eigen::VectorXd> buckets) {
  const auto n = static_cast<std::uint64_t>(buckets.size());
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    buckets(static_cast<Eigen::Index>(fnv1a(token) % n)) += 1.0;
    token.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
}

int whitespace_tokens(std::string_view text) {
  int count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = detail::is_space(c);
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

}  // namespace

std::string_view to_string(RewardMode mode) {
  return mode == RewardMode::ORM ? "ORM" : "PRM";
}

std::string_view to_string(Aggregation aggregation) {
  switch (aggregation) {
    case Aggregation::Min: return "min";
    case Aggregation::Product: return "product";
    case Aggregation::Last: return "last";
    case Aggregation::Mean: return "mean";
  }
  return "min";
}

RewardMode parse_reward_mode(std::string_view text) {
  std::string t = detail::lower(text);
  if (t == "orm") return RewardMode::ORM;
  if (t == "prm") return RewardMode::PRM;
  throw Error(Errc::MalformedInput, "unknown reward mode '" + std::string(text) + "'");
}

Aggregation parse_aggregation(std::string_view text) {
  std::string t = detail::lower(text);
  if (t == "min") return Aggregation::Min;
  if (t == "product") return Aggregation::Product;
  if (t == "last") return Aggregation::Last;
  if (t == "mean") return Aggregation::Mean;
  throw Error(Errc::MalformedInput, "unknown aggregation '" + std::string(text) + "'");
}

FeatureVector featurize(const Question& question, std::string_view text,
                        int step_index, int step_count, int dim) {
  if (dim < 4) throw Error(Errc::DomainError, "feature dimension must be >= 4");
  FeatureVector x = FeatureVector::Zero(dim);
  auto buckets = x.head(dim - 3);
  add_bag_of_words(question.text, buckets);
  add_bag_of_words(text, buckets);
  const double norm = buckets.norm();
  if (norm > 0.0) buckets /= norm;
  x(arithmetic_slot(dim)) = has_false_arithmetic(text) ? 1.0 : 0.0;
  x(position_slot(dim)) =
      step_count > 0 ? static_cast<double>(step_index) / step_count : 1.0;
  x(length_slot(dim)) = whitespace_tokens(text) / 100.0;
  return x;
}

FeatureVector featurize(const Question& question, const Step& step,
                        int step_count, int dim) {
  return featurize(question, step.text, step.index, step_count, dim);
}

FeatureVector featurize(const Question& question, const Solution& solution,
                        int dim) {
  return featurize(question, solution.raw_text, 1, 1, dim);
}

ToyRewardModel::ToyRewardModel(RewardMode mode, int dim)
    : mode_(mode),
      weights_(Eigen::VectorXd::Zero(dim)),
      aux_weights_(Eigen::MatrixXd::Zero(kErrorTypeCount, dim)) {
  if (dim < 4) throw Error(Errc::DomainError, "feature dimension must be >= 4");
}

bool ToyRewardModel::all_finite() const {
  return weights_.allFinite() && std::isfinite(bias_) && aux_weights_.allFinite();
}

double score_outcome(const ToyRewardModel& model, const Question& question,
                     const Solution& solution) {
  if (model.mode() != RewardMode::ORM) {
    throw Error(Errc::ModeMismatch, "score_outcome needs an ORM model");
  }
  return model.score(featurize(question, solution, model.dim()));
}

Eigen::VectorXd score_steps(const ToyRewardModel& model, const Question& question,
                            const Solution& solution) {
  if (model.mode() != RewardMode::PRM) {
    throw Error(Errc::ModeMismatch, "score_steps needs a PRM model");
  }
  const auto k = static_cast<int>(solution.steps.size());
  if (k == 0) throw Error(Errc::EmptySolution, "solution '" + solution.id + "' has no steps");
  Eigen::VectorXd out(k);
  for (int i = 0; i < k; ++i) {
    out(i) = model.score(featurize(question, solution.steps[i], k, model.dim()));
  }
  return out;
}

ScoredSolution score_solution(const ToyRewardModel& model, const Question& question,
                              const Solution& solution, Aggregation aggregation) {
  ScoredSolution scored;
  scored.solution_id = solution.id;
  if (model.mode() == RewardMode::ORM) {
    scored.outcome_reward = score_outcome(model, question, solution);
  } else {
    scored.step_rewards = score_steps(model, question, solution);
    scored.outcome_reward = aggregate_step_scores(*scored.step_rewards, aggregation);
  }
  return scored;
}

}  // namespace minos
