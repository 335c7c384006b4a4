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

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "minos/error.hpp"
#include "minos/solution.hpp"

namespace minos {

enum class RewardMode { ORM, PRM };
enum class Aggregation { Min, Product, Last, Mean };

std::string_view to_string(RewardMode mode);
std::string_view to_string(Aggregation aggregation);
RewardMode parse_reward_mode(std::string_view text);
Aggregation parse_aggregation(std::string_view text);

inline constexpr int kDefaultFeatureDim = 1024;

// Probabilities are clamped to [kProbabilityFloor, 1 - kProbabilityFloor]
// before any logarithm.
inline constexpr double kProbabilityFloor = 1e-12;

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

template <typename Scalar>
Scalar clamp_probability(Scalar p) {
  const Scalar lo = Scalar(kProbabilityFloor);
  return std::min(std::max(p, lo), Scalar(1) - lo);
}

namespace detail {

template <typename Scalar>
void require_binary(Scalar y) {
  if (y != Scalar(0) && y != Scalar(1)) {
    throw Error(Errc::DomainError, "label must be 0 or 1");
  }
}

template <typename Scalar>
void require_open_unit(Scalar p) {
  if (!(p > Scalar(0) && p < Scalar(1))) {
    throw Error(Errc::DomainError, "prediction must lie in (0, 1)");
  }
}

template <typename Scalar>
Scalar bce_term(Scalar y, Scalar p) {
  p = clamp_probability(p);
  return -(y * std::log(p) + (Scalar(1) - y) * std::log(Scalar(1) - p));
}

}  // namespace detail

/// Outcome-level binary cross-entropy, -[y log p + (1 - y) log(1 - p)].
template <typename Scalar>
Scalar bce_outcome_loss(Scalar y, Scalar y_hat) {
  detail::require_binary(y);
  detail::require_open_unit(y_hat);
  return detail::bce_term(y, y_hat);
}

/// Step-level binary cross-entropy summed over the K steps of one solution.
template <typename DerivedY, typename DerivedP>
typename DerivedP::Scalar bce_process_loss(
    const Eigen::MatrixBase<DerivedY>& labels,
    const Eigen::MatrixBase<DerivedP>& preds) {
  using Scalar = typename DerivedP::Scalar;
  if (labels.size() != preds.size()) {
    throw Error(Errc::LengthMismatch, "labels and predictions differ in length");
  }
  if (preds.size() == 0) {
    throw Error(Errc::EmptyArray, "a solution has at least one step");
  }
  Scalar total(0);
  for (Eigen::Index i = 0; i < preds.size(); ++i) {
    const Scalar y = static_cast<Scalar>(labels(i));
    detail::require_binary(y);
    detail::require_open_unit(preds(i));
    total += detail::bce_term(y, preds(i));
  }
  return total;
}

/// Negative log-likelihood of the masked target tokens.
template <typename DerivedL, typename DerivedM>
typename DerivedL::Scalar sft_nll(const Eigen::MatrixBase<DerivedL>& token_logprobs,
                                  const Eigen::MatrixBase<DerivedM>& mask) {
  using Scalar = typename DerivedL::Scalar;
  if (token_logprobs.size() != mask.size()) {
    throw Error(Errc::LengthMismatch, "log-probabilities and mask differ in length");
  }
  Scalar total(0);
  for (Eigen::Index t = 0; t < token_logprobs.size(); ++t) {
    if (token_logprobs(t) > Scalar(0)) {
      throw Error(Errc::DomainError, "log-probabilities must be <= 0");
    }
    const auto m = mask(t);
    if (m != 0 && m != 1) throw Error(Errc::DomainError, "mask must be 0/1");
    if (m == 1) total -= token_logprobs(t);
  }
  return total;
}

/// Reduces per-step rewards to one solution reward.
template <typename Derived>
typename Derived::Scalar aggregate_step_scores(const Eigen::MatrixBase<Derived>& rewards,
                                               Aggregation strategy = Aggregation::Min) {
  if (rewards.size() == 0) throw Error(Errc::EmptyArray, "no step rewards");
  for (Eigen::Index i = 0; i < rewards.size(); ++i) {
    detail::require_open_unit(rewards(i));
  }
  switch (strategy) {
    case Aggregation::Min: return rewards.minCoeff();
    case Aggregation::Product: return rewards.prod();
    case Aggregation::Last: return rewards(rewards.size() - 1);
    case Aggregation::Mean: return rewards.mean();
  }
  return rewards.minCoeff();
}

/// Dense feature vector. The last three slots are reserved:
/// dim-3 false-arithmetic flag, dim-2 step position (index / K),
/// dim-1 whitespace token count / 100. The rest is an L2-normalized hashed
/// bag of words over question and step text.
using FeatureVector = Eigen::VectorXd;

inline Eigen::Index arithmetic_slot(Eigen::Index dim) { return dim - 3; }
inline Eigen::Index position_slot(Eigen::Index dim) { return dim - 2; }
inline Eigen::Index length_slot(Eigen::Index dim) { return dim - 1; }

FeatureVector featurize(const Question& question, std::string_view text,
                        int step_index, int step_count,
                        int dim = kDefaultFeatureDim);
FeatureVector featurize(const Question& question, const Step& step,
                        int step_count, int dim = kDefaultFeatureDim);
FeatureVector featurize(const Question& question, const Solution& solution,
                        int dim = kDefaultFeatureDim);

inline constexpr int kErrorTypeCount = 5;

/// Linear scorer with a sigmoid head, plus one auxiliary linear head per
/// error type used by the first training stage.
class ToyRewardModel {
 public:
  explicit ToyRewardModel(RewardMode mode, int dim = kDefaultFeatureDim);

  RewardMode mode() const { return mode_; }
  int dim() const { return static_cast<int>(weights_.size()); }

  Eigen::VectorXd& weights() { return weights_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double& bias() { return bias_; }
  double bias() const { return bias_; }
  Eigen::MatrixXd& aux_weights() { return aux_weights_; }
  const Eigen::MatrixXd& aux_weights() const { return aux_weights_; }

  template <typename Derived>
  double logit(const Eigen::MatrixBase<Derived>& x) const {
    return weights_.dot(x) + bias_;
  }

  template <typename Derived>
  double score(const Eigen::MatrixBase<Derived>& x) const {
    return clamp_probability(sigmoid(logit(x)));
  }

  bool all_finite() const;

  friend bool operator==(const ToyRewardModel& a, const ToyRewardModel& b) {
    return a.mode_ == b.mode_ && a.bias_ == b.bias_ &&
           a.weights_ == b.weights_ && a.aux_weights_ == b.aux_weights_;
  }

 private:
  RewardMode mode_;
  Eigen::VectorXd weights_;
  double bias_ = 0.0;
  Eigen::MatrixXd aux_weights_;
};

double score_outcome(const ToyRewardModel& model, const Question& question,
                     const Solution& solution);
Eigen::VectorXd score_steps(const ToyRewardModel& model, const Question& question,
                            const Solution& solution);

struct ScoredSolution {
  std::string solution_id;
  double outcome_reward = 0.5;
  std::optional<Eigen::VectorXd> step_rewards;
};

/// ORM models score the solution; PRM models score every step and reduce
/// with `aggregation` for the outcome reward.
ScoredSolution score_solution(const ToyRewardModel& model, const Question& question,
                              const Solution& solution,
                              Aggregation aggregation = Aggregation::Min);

}  // namespace minos
