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
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace minos::testing {

enum class SampleKind { Correct, CalculationError, FalsePositive, NoAnswer };

struct SyntheticOptions {
  int questions = 20;
  int samples = 4;
  std::uint64_t seed = 1;
  // Every n-th fixture omits its outcome line (0 disables).
  int malformed_every = 0;
};

struct SyntheticFiles {
  std::filesystem::path questions;
  std::filesystem::path solutions;
  std::filesystem::path labels;
  std::filesystem::path candidates;
  std::filesystem::path mock_dir;
  std::size_t n_solutions = 0;
  std::size_t n_false_positive = 0;
  std::size_t n_malformed = 0;
  std::size_t n_correct_outcome = 0;
};

namespace detail {

inline void write_lines(const std::filesystem::path& path,
                        const std::vector<nlohmann::json>& rows) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& r : rows) out << r.dump() << "\n";
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace detail

/// Arithmetic word problems "a*b + c" with planted sample kinds, gold labels,
/// scored candidates and label-aware mock responses.
inline SyntheticFiles write_synthetic_corpus(const std::filesystem::path& dir,
                                             const SyntheticOptions& opt) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "mock");
  SyntheticFiles files{dir / "questions.jsonl", dir / "solutions.jsonl", dir / "labels.jsonl",
                       dir / "candidates.jsonl", dir / "mock"};
  std::mt19937_64 rng(opt.seed);
  std::vector<nlohmann::json> questions, solutions, labels, candidates;
  const std::string dash = " \xE2\x80\x94 ";

  for (int qi = 0; qi < opt.questions; ++qi) {
    const long a = 2 + static_cast<long>(rng() % 19);
    const long b = 2 + static_cast<long>(rng() % 11);
    const long c = 1 + static_cast<long>(rng() % 50);
    const long p = a * b;
    const long gold = p + c;
    const std::string qid = "q" + std::to_string(qi);
    questions.push_back({{"id", qid},
                         {"dataset", "gsm8k"},
                         {"text", "A crate holds " + std::to_string(a) + " rows of " +
                                      std::to_string(b) + " apples plus " + std::to_string(c) +
                                      " loose apples. How many apples are there?"},
                         {"gold_answer", std::to_string(gold)}});

    for (int si = 0; si < opt.samples; ++si) {
      const std::string sid = qid + "-s" + std::to_string(si);
      const auto kind = static_cast<SampleKind>(rng() % 4);
      const long wrong = p + 1 + static_cast<long>(rng() % 5);
      const std::string ps = std::to_string(p), gs = std::to_string(gold);
      const std::string ab = std::to_string(a) + "*" + std::to_string(b);
      std::string raw;
      std::vector<std::string> verdicts;
      std::vector<std::string> explanations;
      std::string outcome = "correct";
      std::optional<std::string> answer;
      switch (kind) {
        case SampleKind::Correct:
          raw = "Step 1: " + ab + "=" + ps + " apples in rows.\nStep 2: " + ps + "+" +
                std::to_string(c) + "=" + gs + " apples.\n#### " + gs;
          verdicts = {"correct", "correct"};
          explanations = {ab + "=" + ps + " is right.", "Adding the loose apples is right."};
          answer = gs;
          break;
        case SampleKind::CalculationError: {
          const std::string ws = std::to_string(wrong), wg = std::to_string(wrong + c);
          raw = "Step 1: " + ab + "=" + ws + " apples in rows.\nStep 2: " + ws + "+" +
                std::to_string(c) + "=" + wg + " apples.\n#### " + wg;
          verdicts = {"incorrect", "incorrect"};
          explanations = {ab + " is " + ps + ", not " + ws + "; a miscalculation.",
                          "It uses the wrong value from step 1."};
          outcome = "incorrect";
          answer = wg;
          break;
        }
        case SampleKind::FalsePositive:
          raw = "Step 1: " + ab + "=" + ps + " apples in rows.\nStep 2: Also the crate "
                "weighs 2+2=5 kilograms.\nStep 3: " + ps + "+" + std::to_string(c) + "=" + gs +
                " apples.\n#### " + gs;
          verdicts = {"correct", "incorrect", "correct"};
          explanations = {ab + "=" + ps + " is right.",
                          "This step is irrelevant to the question.",
                          "The total is right."};
          answer = gs;
          ++files.n_false_positive;
          break;
        case SampleKind::NoAnswer:
          raw = "Step 1: " + ab + "=" + ps + " apples in rows.\nStep 2: Then add the loose ones.";
          verdicts = {"correct", "incorrect"};
          explanations = {ab + "=" + ps + " is right.", "It never states a final total."};
          outcome = "incorrect";
          break;
      }
      if (outcome == "correct") ++files.n_correct_outcome;
      solutions.push_back({{"id", sid}, {"question_id", qid}, {"raw_text", raw}});
      nlohmann::json steps = nlohmann::json::array();
      for (std::size_t k = 0; k < verdicts.size(); ++k) {
        steps.push_back({{"index", k + 1}, {"verdict", verdicts[k]}});
      }
      labels.push_back({{"solution_id", sid}, {"outcome", outcome}, {"steps", steps}});

      std::string fixture;
      std::string analysis;
      for (std::size_t k = 0; k < verdicts.size(); ++k) {
        const bool bad = verdicts[k] == "incorrect";
        fixture += "Step " + std::to_string(k + 1) + ": [" + (bad ? "Incorrect" : "Correct") +
                   "]" + dash + explanations[k] + "\n";
        if (bad) {
          const char* category = kind == SampleKind::CalculationError
                                     ? (k == 0 ? "Calculation" : "Accumulation")
                                 : kind == SampleKind::FalsePositive ? "Unrelated"
                                                                     : "Logic";
          analysis += "Step " + std::to_string(k + 1) + ": " + category + "\n";
        }
      }
      ++files.n_solutions;
      const bool malformed =
          opt.malformed_every > 0 && files.n_solutions % opt.malformed_every == 0;
      if (malformed) {
        ++files.n_malformed;
      } else {
        fixture += std::string("Outcome: [") + (outcome == "correct" ? "Correct" : "Incorrect") +
                   "]\n";
      }
      detail::write_file(files.mock_dir / (sid + ".txt"), fixture);
      if (!analysis.empty()) {
        detail::write_file(files.mock_dir / ("fb-" + sid + ".analysis.txt"), analysis);
      }

      const double base = outcome == "correct" ? 0.55 : 0.1;
      const double reward = base + 0.4 * static_cast<double>(rng() % 1000) / 1000.0;
      nlohmann::json cand{{"question_id", qid}, {"solution_id", sid}, {"outcome_reward", reward}};
      cand["answer"] = answer ? nlohmann::json(*answer) : nlohmann::json(nullptr);
      cand["step_rewards"] = nullptr;
      candidates.push_back(cand);
    }
  }
  detail::write_lines(files.questions, questions);
  detail::write_lines(files.solutions, solutions);
  detail::write_lines(files.labels, labels);
  detail::write_lines(files.candidates, candidates);
  return files;
}

}  // namespace minos::testing
