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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "minos/solution.hpp"

namespace minos {

using nlohmann::json;

std::vector<json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows);
std::string to_jsonl(const std::vector<json>& rows);
void write_text(const std::filesystem::path& path, const std::string& text);

void to_json(json& j, const Question& q);
void from_json(const json& j, Question& q);
void to_json(json& j, const SolutionLabels& labels);
void from_json(const json& j, SolutionLabels& labels);

/// Questions, parsed solutions and optional gold labels, keyed by id.
/// Solutions that fail to segment are kept out of `solutions` and listed in
/// `rejected` with the reason.
struct Corpus {
  std::map<std::string, Question> questions;
  std::vector<Solution> solutions;
  std::map<std::string, SolutionLabels> labels;
  std::vector<std::pair<std::string, std::string>> rejected;

  const Question& question(const std::string& id) const;
  const Solution* find_solution(const std::string& id) const;
  const SolutionLabels* find_labels(const std::string& solution_id) const;
};

std::map<std::string, Question> load_questions(const std::filesystem::path& path);
std::map<std::string, SolutionLabels> load_labels(const std::filesystem::path& path);

/// Throws Error{MissingQuestion} when a solution references an unknown
/// question.
Corpus load_corpus(const std::filesystem::path& questions,
                   const std::filesystem::path& solutions,
                   const std::optional<std::filesystem::path>& labels = std::nullopt);

}  // namespace minos
