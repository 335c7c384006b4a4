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

#include "minos/corpus.hpp"

#include <fstream>
#include <sstream>

#include "minos/error.hpp"
#include "strings.hpp"

namespace minos {

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw Error(Errc::MalformedInput, path.string() + ":" +
                                            std::to_string(line_no) + ": " +
                                            e.what());
    }
  }
  return rows;
}

std::string to_jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << text;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows) {
  write_text(path, to_jsonl(rows));
}

void to_json(json& j, const Question& q) {
  j = json{{"id", q.id},
           {"dataset", to_string(q.dataset)},
           {"text", q.text},
           {"gold_answer", q.gold_answer}};
}

void from_json(const json& j, Question& q) {
  q.id = j.at("id").get<std::string>();
  q.dataset = parse_dataset(j.at("dataset").get<std::string>());
  q.text = j.at("text").get<std::string>();
  q.gold_answer = j.at("gold_answer").get<std::string>();
  if (q.id.empty() || detail::trim(q.text).empty() ||
      detail::trim(q.gold_answer).empty()) {
    throw Error(Errc::MalformedInput, "question '" + q.id + "' has empty fields");
  }
}

void to_json(json& j, const SolutionLabels& labels) {
  json steps = json::array();
  for (const auto& s : labels.steps) {
    steps.push_back({{"index", s.step_index},
                     {"verdict", detail::lower(to_string(s.verdict))}});
  }
  j = json{{"solution_id", labels.solution_id},
           {"outcome", detail::lower(to_string(labels.outcome.verdict))},
           {"steps", steps}};
}

void from_json(const json& j, SolutionLabels& labels) {
  labels.solution_id = j.at("solution_id").get<std::string>();
  labels.outcome.verdict = parse_verdict(j.at("outcome").get<std::string>());
  labels.steps.clear();
  if (j.contains("steps")) {
    for (const auto& s : j.at("steps")) {
      labels.steps.push_back({s.at("index").get<int>(),
                              parse_verdict(s.at("verdict").get<std::string>())});
    }
  }
}

const Question& Corpus::question(const std::string& id) const {
  auto it = questions.find(id);
  if (it == questions.end()) throw Error(Errc::MissingQuestion, "'" + id + "'");
  return it->second;
}

const Solution* Corpus::find_solution(const std::string& id) const {
  for (const auto& s : solutions) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const SolutionLabels* Corpus::find_labels(const std::string& solution_id) const {
  auto it = labels.find(solution_id);
  return it == labels.end() ? nullptr : &it->second;
}

std::map<std::string, Question> load_questions(const std::filesystem::path& path) {
  std::map<std::string, Question> out;
  for (const auto& row : read_jsonl(path)) {
    auto q = row.get<Question>();
    if (!out.emplace(q.id, q).second) {
      throw Error(Errc::MalformedInput, "duplicate question id '" + q.id + "'");
    }
  }
  return out;
}

std::map<std::string, SolutionLabels> load_labels(const std::filesystem::path& path) {
  std::map<std::string, SolutionLabels> out;
  for (const auto& row : read_jsonl(path)) {
    auto l = row.get<SolutionLabels>();
    out[l.solution_id] = std::move(l);
  }
  return out;
}

Corpus load_corpus(const std::filesystem::path& questions,
                   const std::filesystem::path& solutions,
                   const std::optional<std::filesystem::path>& labels) {
  Corpus corpus;
  corpus.questions = load_questions(questions);
  for (const auto& row : read_jsonl(solutions)) {
    std::string id = row.at("id").get<std::string>();
    std::string qid = row.at("question_id").get<std::string>();
    const Question& q = corpus.question(qid);
    try {
      corpus.solutions.push_back(parse_solution(
          id, qid, row.at("raw_text").get<std::string>(), q.dataset));
    } catch (const Error& e) {
      corpus.rejected.emplace_back(id, e.what());
    }
  }
  if (labels) corpus.labels = load_labels(*labels);
  return corpus;
}

}  // namespace minos
