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

#include "minos/train.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "minos/corpus.hpp"
#include "strings.hpp"

namespace minos {
namespace {

void validate_examples(const ToyRewardModel& model,
                       std::span<const LabeledExample> examples) {
  for (const auto& ex : examples) {
    if (ex.features.cols() != model.dim()) {
      throw Error(Errc::LengthMismatch, "feature width differs from model dimension");
    }
    if (ex.features.rows() != ex.labels.size()) {
      throw Error(Errc::LengthMismatch, "one label per feature row is required");
    }
    if (model.mode() == RewardMode::ORM && ex.features.rows() != 1) {
      throw Error(Errc::ModeMismatch, "ORM examples carry exactly one row");
    }
    if (ex.features.rows() == 0) {
      throw Error(Errc::EmptySolution, "example without steps");
    }
  }
}

// Sigmoid applied to every row's logit.
Eigen::VectorXd row_scores(const ToyRewardModel& model, const Eigen::MatrixXd& x) {
  Eigen::VectorXd z = (x * model.weights()).array() + model.bias();
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  return order;
}

void validate_config(const TrainConfig& config) {
  if (!(config.learning_rate > 0.0) || config.epochs < 0 || config.batch_size < 1 ||
      config.l2 < 0.0) {
    throw Error(Errc::DomainError, "invalid training configuration");
  }
}

template <typename Example>
std::vector<Example> gather(std::span<const Example> data,
                            const std::vector<std::size_t>& order,
                            std::size_t begin, std::size_t end) {
  std::vector<Example> batch;
  batch.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) batch.push_back(data[order[i]]);
  return batch;
}

}  // namespace

LabeledExample make_example(const ToyRewardModel& model, const Question& question,
                            const Solution& solution, const SolutionLabels& labels) {
  LabeledExample ex;
  if (model.mode() == RewardMode::ORM) {
    ex.features = featurize(question, solution, model.dim()).transpose();
    ex.labels = Eigen::VectorXd::Constant(1, as_binary(labels.outcome.verdict));
    return ex;
  }
  const auto k = static_cast<int>(solution.steps.size());
  if (k == 0) throw Error(Errc::EmptySolution, "solution '" + solution.id + "'");
  if (static_cast<int>(labels.steps.size()) != k) {
    throw Error(Errc::LabelCountMismatch,
                "solution '" + solution.id + "' has " + std::to_string(k) +
                    " steps but " + std::to_string(labels.steps.size()) + " labels");
  }
  ex.features.resize(k, model.dim());
  ex.labels.resize(k);
  for (int i = 0; i < k; ++i) {
    const StepLabel& label = labels.steps[i];
    if (label.step_index != i + 1) {
      throw Error(Errc::LabelCountMismatch, "step labels must be ordered 1..K");
    }
    ex.features.row(i) = featurize(question, solution.steps[i], k, model.dim()).transpose();
    ex.labels(i) = as_binary(label.verdict);
  }
  return ex;
}

double stage2_objective(const ToyRewardModel& model,
                        std::span<const LabeledExample> batch, double l2) {
  if (batch.empty()) throw Error(Errc::EmptyDataset, "empty batch");
  double total = 0.0;
  for (const auto& ex : batch) {
    const Eigen::VectorXd p = row_scores(model, ex.features);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      total += detail::bce_term(ex.labels(i), p(i));
    }
  }
  return total / static_cast<double>(batch.size()) +
         0.5 * l2 * model.weights().squaredNorm();
}

Stage2Gradient stage2_gradient(const ToyRewardModel& model,
                               std::span<const LabeledExample> batch, double l2) {
  if (batch.empty()) throw Error(Errc::EmptyDataset, "empty batch");
  Stage2Gradient g{Eigen::VectorXd::Zero(model.dim()), 0.0};
  for (const auto& ex : batch) {
    const Eigen::VectorXd residual = row_scores(model, ex.features) - ex.labels;
    g.weights.noalias() += ex.features.transpose() * residual;
    g.bias += residual.sum();
  }
  const double n = static_cast<double>(batch.size());
  g.weights /= n;
  g.bias /= n;
  g.weights += l2 * model.weights();
  return g;
}

double stage1_objective(const ToyRewardModel& model,
                        std::span<const AuxExample> batch, double l2) {
  if (batch.empty()) throw Error(Errc::EmptyDataset, "empty batch");
  double total = 0.0;
  for (const auto& ex : batch) {
    const Eigen::VectorXd z = model.aux_weights() * ex.features;
    for (int t = 0; t < kErrorTypeCount; ++t) {
      total += detail::bce_term(ex.targets(t), sigmoid(z(t)));
    }
  }
  return total / static_cast<double>(batch.size()) +
         0.5 * l2 * model.aux_weights().squaredNorm();
}

Eigen::MatrixXd stage1_gradient(const ToyRewardModel& model,
                                std::span<const AuxExample> batch, double l2) {
  if (batch.empty()) throw Error(Errc::EmptyDataset, "empty batch");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(kErrorTypeCount, model.dim());
  for (const auto& ex : batch) {
    Eigen::VectorXd residual = model.aux_weights() * ex.features;
    residual = residual.unaryExpr([](double v) { return sigmoid(v); }) - ex.targets;
    g.noalias() += residual * ex.features.transpose();
  }
  g /= static_cast<double>(batch.size());
  g += l2 * model.aux_weights();
  return g;
}

double heldout_accuracy(const ToyRewardModel& model,
                        std::span<const LabeledExample> examples, double threshold) {
  std::size_t hits = 0;
  std::size_t total = 0;
  for (const auto& ex : examples) {
    const Eigen::VectorXd p = row_scores(model, ex.features);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const bool predicted_correct = p(i) >= threshold;
      hits += predicted_correct == (ex.labels(i) == 1.0) ? 1 : 0;
      ++total;
    }
  }
  return total == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : static_cast<double>(hits) / static_cast<double>(total);
}

TrainResult train_stage2(ToyRewardModel model, std::span<const LabeledExample> train,
                         std::span<const LabeledExample> heldout,
                         const TrainConfig& config) {
  if (train.empty()) throw Error(Errc::EmptyDataset, "no stage-2 training examples");
  validate_config(config);
  validate_examples(model, train);
  validate_examples(model, heldout);

  TrainResult result{std::move(model), {}};
  ToyRewardModel& m = result.model;
  std::mt19937_64 rng(config.seed);
  long step = 0;
  auto record = [&] {
    result.series.push_back({step, stage2_objective(m, train, config.l2),
                             heldout_accuracy(m, heldout)});
  };
  record();
  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = shuffled_indices(train.size(), rng);
    for (std::size_t begin = 0; begin < train.size(); begin += batch_size) {
      const std::size_t end = std::min(train.size(), begin + batch_size);
      const auto batch = gather(train, order, begin, end);
      const Stage2Gradient g = stage2_gradient(m, batch, config.l2);
      m.weights() -= config.learning_rate * g.weights;
      m.bias() -= config.learning_rate * g.bias;
      ++step;
    }
    record();
  }
  return result;
}

ToyRewardModel train_stage1_analog(ToyRewardModel model,
                                   std::span<const AuxExample> dataset,
                                   const TrainConfig& config) {
  if (dataset.empty()) throw Error(Errc::EmptyDataset, "no feedback-derived examples");
  validate_config(config);
  for (const auto& ex : dataset) {
    if (ex.features.size() != model.dim()) {
      throw Error(Errc::LengthMismatch, "feature width differs from model dimension");
    }
  }
  std::mt19937_64 rng(config.seed);
  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = shuffled_indices(dataset.size(), rng);
    for (std::size_t begin = 0; begin < dataset.size(); begin += batch_size) {
      const std::size_t end = std::min(dataset.size(), begin + batch_size);
      const auto batch = gather(dataset, order, begin, end);
      model.aux_weights() -= config.learning_rate * stage1_gradient(model, batch, config.l2);
    }
  }
  return model;
}

void init_from_auxiliary(ToyRewardModel& model) {
  Eigen::VectorXd w = -model.aux_weights().colwise().sum().transpose();
  const double norm = w.norm();
  if (norm == 0.0) return;
  model.weights() = w / norm;
}

TrainResult train_two_stage(ToyRewardModel model, std::span<const AuxExample> feedback,
                            std::span<const LabeledExample> train,
                            std::span<const LabeledExample> heldout,
                            const TrainConfig& stage1, const TrainConfig& stage2) {
  model = train_stage1_analog(std::move(model), feedback, stage1);
  init_from_auxiliary(model);
  return train_stage2(std::move(model), train, heldout, stage2);
}

namespace {

template <typename A, typename B>
long double logit_ld(const A& w, double bias, const B& x) {
  long double z = bias;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    z += static_cast<long double>(w(j)) * static_cast<long double>(x(j));
  }
  return z;
}

template <typename A>
long double squared_norm_ld(const A& w) {
  long double s = 0;
  for (Eigen::Index j = 0; j < w.size(); ++j) s += static_cast<long double>(w(j)) * w(j);
  return s;
}

double relative_error(double analytic, double numeric) {
  const double scale = std::max(std::fabs(analytic), std::fabs(numeric));
  return scale == 0.0 ? 0.0 : std::fabs(analytic - numeric) / scale;
}

}  // namespace

double grad_check(const ToyRewardModel& model, const LabeledExample& sample,
                  double l2, double h) {
  const std::span<const LabeledExample> batch(&sample, 1);
  validate_examples(model, batch);
  const Stage2Gradient analytic = stage2_gradient(model, batch, l2);
  const Eigen::Index rows = sample.features.rows();
  std::vector<long double> z(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) {
    z[r] = logit_ld(model.weights(), model.bias(), sample.features.row(r));
  }
  const long double base_norm = squared_norm_ld(model.weights());
  // Objective with logit r shifted by delta * column(r), in extended precision.
  auto objective = [&](const Eigen::VectorXd& column, long double delta, long double norm) {
    long double total = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      total += detail::bce_term<long double>(sample.labels(r), sigmoid(z[r] + delta * column(r)));
    }
    return total + 0.5L * l2 * norm;
  };
  double worst = 0.0;
  for (Eigen::Index i = 0; i < model.weights().size(); ++i) {
    const long double w = model.weights()(i);
    const long double up = objective(sample.features.col(i), h,
                                     base_norm - w * w + (w + h) * (w + h));
    const long double down = objective(sample.features.col(i), -static_cast<long double>(h),
                                       base_norm - w * w + (w - h) * (w - h));
    worst = std::max(worst, relative_error(analytic.weights(i),
                                           static_cast<double>((up - down) / (2.0L * h))));
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(rows);
  const long double up = objective(ones, h, base_norm);
  const long double down = objective(ones, -static_cast<long double>(h), base_norm);
  worst = std::max(worst, relative_error(analytic.bias,
                                         static_cast<double>((up - down) / (2.0L * h))));
  return worst;
}

double grad_check_stage1(const ToyRewardModel& model, const AuxExample& sample,
                         double l2, double h) {
  const std::span<const AuxExample> batch(&sample, 1);
  const Eigen::MatrixXd analytic = stage1_gradient(model, batch, l2);
  const Eigen::MatrixXd& a = model.aux_weights();
  std::vector<long double> z(kErrorTypeCount);
  long double base_norm = 0;
  for (int t = 0; t < kErrorTypeCount; ++t) {
    z[t] = logit_ld(a.row(t).transpose(), 0.0, sample.features.transpose());
    base_norm += squared_norm_ld(a.row(t).transpose());
  }
  auto objective = [&](int head, long double delta, long double norm) {
    long double total = 0;
    for (int t = 0; t < kErrorTypeCount; ++t) {
      total += detail::bce_term<long double>(sample.targets(t),
                                             sigmoid(z[t] + (t == head ? delta : 0.0L)));
    }
    return total + 0.5L * l2 * norm;
  };
  double worst = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const long double x = sample.features(c);
    for (int r = 0; r < kErrorTypeCount; ++r) {
      const long double w = a(r, c);
      const long double up = objective(r, h * x, base_norm - w * w + (w + h) * (w + h));
      const long double down = objective(r, -h * x, base_norm - w * w + (w - h) * (w - h));
      worst = std::max(worst, relative_error(analytic(r, c),
                                             static_cast<double>((up - down) / (2.0L * h))));
    }
  }
  return worst;
}

nlohmann::json checkpoint_to_json(const ToyRewardModel& model) {
  nlohmann::json aux = nlohmann::json::array();
  for (Eigen::Index r = 0; r < model.aux_weights().rows(); ++r) {
    const Eigen::VectorXd row = model.aux_weights().row(r).transpose();
    aux.push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  const Eigen::VectorXd& w = model.weights();
  return {{"mode", to_string(model.mode())},
          {"d", model.dim()},
          {"weights", std::vector<double>(w.data(), w.data() + w.size())},
          {"bias", model.bias()},
          {"aux_weights", aux}};
}

ToyRewardModel checkpoint_from_json(const nlohmann::json& j) {
  ToyRewardModel model(parse_reward_mode(j.at("mode").get<std::string>()),
                       j.at("d").get<int>());
  const auto w = j.at("weights").get<std::vector<double>>();
  if (static_cast<int>(w.size()) != model.dim()) {
    throw Error(Errc::LengthMismatch, "checkpoint weights do not match d");
  }
  model.weights() = Eigen::Map<const Eigen::VectorXd>(w.data(), model.dim());
  model.bias() = j.at("bias").get<double>();
  const auto& aux = j.at("aux_weights");
  if (aux.size() != static_cast<std::size_t>(kErrorTypeCount)) {
    throw Error(Errc::LengthMismatch, "checkpoint needs five auxiliary rows");
  }
  for (int r = 0; r < kErrorTypeCount; ++r) {
    const auto row = aux[r].get<std::vector<double>>();
    if (static_cast<int>(row.size()) != model.dim()) {
      throw Error(Errc::LengthMismatch, "auxiliary row does not match d");
    }
    model.aux_weights().row(r) =
        Eigen::Map<const Eigen::RowVectorXd>(row.data(), model.dim());
  }
  if (!model.all_finite()) throw Error(Errc::DomainError, "non-finite parameters");
  return model;
}

void save_checkpoint(const std::filesystem::path& path, const ToyRewardModel& model) {
  write_text(path, checkpoint_to_json(model).dump() + "\n");
}

ToyRewardModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return checkpoint_from_json(nlohmann::json::parse(in));
}

std::string convergence_csv(const ConvergenceSeries& series) {
  std::string out = "step,loss,heldout_accuracy\n";
  char line[96];
  for (const auto& p : series) {
    std::snprintf(line, sizeof line, "%ld,%.17g,%.17g\n", p.step, p.loss,
                  p.heldout_accuracy);
    out += line;
  }
  return out;
}

ConvergenceSeries parse_convergence_csv(std::string_view csv) {
  ConvergenceSeries series;
  bool header = true;
  for (std::string_view line : detail::split_lines(csv)) {
    if (detail::trim(line).empty()) continue;
    if (header) {
      header = false;
      if (detail::trim(line) != "step,loss,heldout_accuracy") {
        throw Error(Errc::MalformedInput, "unexpected convergence header");
      }
      continue;
    }
    ConvergencePoint p;
    std::string row(line);
    std::replace(row.begin(), row.end(), ',', ' ');
    std::istringstream fields(row);
    std::string acc;
    if (!(fields >> p.step >> p.loss >> acc)) {
      throw Error(Errc::MalformedInput, "bad convergence row '" + std::string(line) + "'");
    }
    p.heldout_accuracy = std::strtod(acc.c_str(), nullptr);
    series.push_back(p);
  }
  return series;
}

}  // namespace minos
