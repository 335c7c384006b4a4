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

#include "minos/curation.hpp"

#include <cctype>
#include <regex>

#include "minos/error.hpp"
#include "strings.hpp"

namespace minos {
namespace {

constexpr std::string_view kEmDash = "\xE2\x80\x94";
constexpr std::string_view kEnDash = "\xE2\x80\x93";

std::string bracketed(Verdict v) { return "[" + std::string(to_string(v)) + "]"; }

std::string question_block(const Question& q) {
  return "Question:\n" + std::string(detail::trim(q.text)) + "\n\n";
}

std::string answer_text(const Solution& s) {
  return s.final_answer ? *s.final_answer : std::string("(no final answer)");
}

std::string_view strip_separator(std::string_view s) {
  s = detail::trim(s);
  for (std::string_view sep : {kEmDash, kEnDash, std::string_view("-"),
                               std::string_view(":")}) {
    if (s.substr(0, sep.size()) == sep) return detail::trim(s.substr(sep.size()));
  }
  return s;
}

// Splits "[Verdict] rest" into the verdict word and the rest.
std::pair<std::string, std::string_view> split_verdict(std::string_view s) {
  s = detail::trim(s);
  while (!s.empty() && s.front() == '*') s = detail::trim(s.substr(1));
  bool bracket = !s.empty() && s.front() == '[';
  if (bracket) s = detail::trim(s.substr(1));
  std::size_t n = 0;
  while (n < s.size() && std::isalpha(static_cast<unsigned char>(s[n]))) ++n;
  std::string word(s.substr(0, n));
  s = detail::trim(s.substr(n));
  if (bracket) {
    if (s.empty() || s.front() != ']') return {word + "?", s};
    s = s.substr(1);
  }
  return {word, strip_separator(s)};
}

bool contains_any(const std::string& text, std::initializer_list<std::string_view> keys) {
  for (auto k : keys) {
    if (text.find(k) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(PromptMode mode) {
  return mode == PromptMode::LabelAware ? "label_aware" : "direct";
}

PromptMode parse_prompt_mode(std::string_view text) {
  const std::string t = detail::lower(detail::trim(text));
  if (t == "label_aware" || t == "label-aware" || t == "labelaware") {
    return PromptMode::LabelAware;
  }
  if (t == "direct") return PromptMode::Direct;
  throw Error(Errc::MalformedInput, "unknown prompt mode '" + std::string(text) + "'");
}

std::string_view to_string(FlagKind kind) {
  switch (kind) {
    case FlagKind::StepOutcomeContradiction: return "StepOutcomeContradiction";
    case FlagKind::LabelContradiction: return "LabelContradiction";
    case FlagKind::FalsePositiveSample: return "FalsePositiveSample";
  }
  return "StepOutcomeContradiction";
}

namespace {

FlagKind parse_flag_kind(std::string_view text) {
  for (FlagKind k : {FlagKind::StepOutcomeContradiction, FlagKind::LabelContradiction,
                     FlagKind::FalsePositiveSample}) {
    if (to_string(k) == text) return k;
  }
  throw Error(Errc::MalformedInput, "unknown flag '" + std::string(text) + "'");
}

}  // namespace

std::string_view to_string(ReviewStatus status) {
  switch (status) {
    case ReviewStatus::Pending: return "pending";
    case ReviewStatus::Accepted: return "accepted";
    case ReviewStatus::Rejected: return "rejected";
    case ReviewStatus::Edited: return "edited";
  }
  return "pending";
}

ReviewStatus parse_review_status(std::string_view text) {
  const std::string t = detail::lower(detail::trim(text));
  if (t == "pending") return ReviewStatus::Pending;
  if (t == "accepted") return ReviewStatus::Accepted;
  if (t == "rejected") return ReviewStatus::Rejected;
  if (t == "edited") return ReviewStatus::Edited;
  throw Error(Errc::MalformedInput, "unknown review status '" + std::string(text) + "'");
}

bool is_legal_transition(ReviewStatus from, ReviewStatus to) {
  return from == ReviewStatus::Pending && to != ReviewStatus::Pending;
}

void to_json(nlohmann::json& j, const FeedbackRecord& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.step_feedback) {
    steps.push_back({{"index", s.step_index},
                     {"verdict", detail::lower(to_string(s.verdict))},
                     {"explanation", s.explanation}});
  }
  nlohmann::json flags = nlohmann::json::array();
  for (const auto& f : r.consistency_flags) {
    nlohmann::json flag{{"kind", to_string(f.kind)}};
    if (f.step_index) flag["step"] = *f.step_index;
    flags.push_back(flag);
  }
  j = nlohmann::json{{"id", r.id},
                     {"question_id", r.question_id},
                     {"solution_id", r.solution_id},
                     {"mode", to_string(r.mode)},
                     {"step_feedback", steps},
                     {"outcome_verdict", detail::lower(to_string(r.outcome_verdict))},
                     {"consistency_flags", flags},
                     {"review_status", to_string(r.review_status)},
                     {"edited_text", nullptr},
                     {"raw_response", r.raw_response},
                     {"reviewer", nullptr}};
  if (r.edited_text) j["edited_text"] = *r.edited_text;
  if (r.reviewer) j["reviewer"] = *r.reviewer;
}

void from_json(const nlohmann::json& j, FeedbackRecord& r) {
  r.id = j.at("id").get<std::string>();
  r.question_id = j.at("question_id").get<std::string>();
  r.solution_id = j.at("solution_id").get<std::string>();
  r.mode = parse_prompt_mode(j.at("mode").get<std::string>());
  r.step_feedback.clear();
  for (const auto& s : j.at("step_feedback")) {
    r.step_feedback.push_back({s.at("index").get<int>(),
                               parse_verdict(s.at("verdict").get<std::string>()),
                               s.at("explanation").get<std::string>()});
  }
  r.outcome_verdict = parse_verdict(j.at("outcome_verdict").get<std::string>());
  r.consistency_flags.clear();
  for (const auto& f : j.value("consistency_flags", nlohmann::json::array())) {
    ConsistencyFlag flag{parse_flag_kind(f.at("kind").get<std::string>()), std::nullopt};
    if (f.contains("step")) flag.step_index = f.at("step").get<int>();
    r.consistency_flags.push_back(flag);
  }
  r.review_status = parse_review_status(j.at("review_status").get<std::string>());
  r.edited_text.reset();
  if (j.contains("edited_text") && !j["edited_text"].is_null()) {
    r.edited_text = j["edited_text"].get<std::string>();
  }
  r.raw_response = j.value("raw_response", std::string());
  r.reviewer.reset();
  if (j.contains("reviewer") && !j["reviewer"].is_null()) {
    r.reviewer = j["reviewer"].get<std::string>();
  }
}

std::string_view to_string(ErrorType type) {
  switch (type) {
    case ErrorType::Unrelated: return "Unrelated";
    case ErrorType::Accumulation: return "Accumulation";
    case ErrorType::Calculation: return "Calculation";
    case ErrorType::Logic: return "Logic";
    case ErrorType::Other: return "Other";
  }
  return "Other";
}

ErrorType parse_error_type(std::string_view text) {
  std::string t = detail::lower(detail::trim(text));
  if (t.size() > 6 && t.ends_with(" error")) t.resize(t.size() - 6);
  for (ErrorType type : kErrorTypes) {
    if (detail::lower(to_string(type)) == t) return type;
  }
  throw Error(Errc::UnknownCategory, "'" + std::string(text) + "'");
}

std::string output_format_instruction() {
  return "Output format:\n"
         "Write exactly one line per step, in order, in the form\n"
         "Step <k>: [Correct|Incorrect] " + std::string(kEmDash) + " <explanation>\n"
         "followed by one final line in the form\n"
         "Outcome: [Correct|Incorrect]\n"
         "Do not write anything else.\n";
}

FeedbackPrompt build_label_aware_prompt(const Question& question, const Solution& solution,
                                        const SolutionLabels& labels) {
  if (labels.steps.size() != solution.steps.size()) {
    throw Error(Errc::LabelCountMismatch,
                "solution '" + solution.id + "' has " +
                    std::to_string(solution.steps.size()) + " steps but " +
                    std::to_string(labels.steps.size()) + " labels");
  }
  std::string text =
      "You are given a math question and a step-by-step solution. The correctness "
      "of every step and of the final answer has already been determined and is "
      "shown in brackets. Do not change these verdicts. For each step, explain in "
      "one or two sentences why its verdict holds; for an incorrect step, point out "
      "the exact mistake.\n\n";
  text += question_block(question);
  text += "Solution:\n";
  for (std::size_t i = 0; i < solution.steps.size(); ++i) {
    const Step& step = solution.steps[i];
    if (labels.steps[i].step_index != step.index) {
      throw Error(Errc::LabelCountMismatch, "step labels must be ordered 1..K");
    }
    text += "Step " + std::to_string(step.index) + " " + bracketed(labels.steps[i].verdict) +
            ": " + step.text + "\n";
  }
  text += "Final answer: " + answer_text(solution) + " " +
          bracketed(labels.outcome.verdict) + "\n\n";
  text += output_format_instruction();
  return {PromptMode::LabelAware, std::move(text), question.id, solution.id};
}

FeedbackPrompt build_direct_prompt(const Question& question, const Solution& solution) {
  std::string text =
      "You are given a math question and a step-by-step solution. Decide whether "
      "each step is correct and whether the final answer is correct. For each step, "
      "explain your judgement in one or two sentences; for an incorrect step, point "
      "out the exact mistake.\n\n";
  text += question_block(question);
  text += "Solution:\n";
  for (const Step& step : solution.steps) {
    text += "Step " + std::to_string(step.index) + ": " + step.text + "\n";
  }
  text += "Final answer: " + answer_text(solution) + "\n\n";
  text += output_format_instruction();
  return {PromptMode::Direct, std::move(text), question.id, solution.id};
}

FeedbackRecord parse_feedback(std::string_view raw, int expected_steps, PromptMode mode) {
  if (detail::trim(raw).empty()) throw Error(Errc::EmptyInput, "empty feedback response");
  FeedbackRecord record;
  record.mode = mode;
  record.raw_response = std::string(raw);
  std::optional<Verdict> outcome;

  for (std::string_view line : detail::split_lines(raw)) {
    std::string_view t = detail::trim(line);
    if (t.empty()) continue;
    // Tolerate markdown emphasis around the line label.
    while (!t.empty() && (t.front() == '*' || t.front() == '#')) t = detail::trim(t.substr(1));

    if (detail::starts_with_icase(t, "outcome")) {
      std::string_view rest = detail::trim(t.substr(7));
      while (!rest.empty() && rest.front() == '*') rest = detail::trim(rest.substr(1));
      if (rest.empty() || rest.front() != ':') continue;
      auto [word, tail] = split_verdict(rest.substr(1));
      if (!outcome) outcome = parse_verdict(word);
      break;
    }
    if (detail::starts_with_icase(t, "step")) {
      std::size_t pos = 4;
      while (pos < t.size() && detail::is_space(t[pos])) ++pos;
      std::size_t digits = pos;
      while (digits < t.size() && std::isdigit(static_cast<unsigned char>(t[digits]))) ++digits;
      std::string_view after = detail::trim(t.substr(digits));
      while (!after.empty() && after.front() == '*') after = detail::trim(after.substr(1));
      if (digits > pos && !after.empty() && after.front() == ':') {
        const int index = std::stoi(std::string(t.substr(pos, digits - pos)));
        const int expected = static_cast<int>(record.step_feedback.size()) + 1;
        if (index != expected) {
          throw Error(Errc::StepCountMismatch,
                      "found step " + std::to_string(index) + " where step " +
                          std::to_string(expected) + " was expected");
        }
        auto [word, explanation] = split_verdict(after.substr(1));
        record.step_feedback.push_back(
            {index, parse_verdict(word), std::string(explanation)});
        continue;
      }
    }
    if (!record.step_feedback.empty()) {
      std::string& e = record.step_feedback.back().explanation;
      if (!e.empty()) e += ' ';
      e += std::string(t);
    }
  }

  if (static_cast<int>(record.step_feedback.size()) != expected_steps) {
    throw Error(Errc::StepCountMismatch,
                "expected " + std::to_string(expected_steps) + " step lines, found " +
                    std::to_string(record.step_feedback.size()));
  }
  if (!outcome) throw Error(Errc::MissingOutcomeLine, "no 'Outcome:' line");
  for (const auto& s : record.step_feedback) {
    if (detail::trim(s.explanation).empty()) {
      throw Error(Errc::MalformedResponse,
                  "step " + std::to_string(s.step_index) + " has no explanation");
    }
  }
  record.outcome_verdict = *outcome;
  return record;
}

std::string render_feedback(const std::vector<StepFeedback>& steps, Verdict outcome) {
  std::string out;
  for (const auto& s : steps) {
    out += "Step " + std::to_string(s.step_index) + ": " + bracketed(s.verdict) + " " +
           std::string(kEmDash) + " " + s.explanation + "\n";
  }
  out += "Outcome: " + bracketed(outcome);
  return out;
}

std::vector<ConsistencyFlag> check_consistency(const FeedbackRecord& record) {
  std::vector<ConsistencyFlag> flags;
  bool any_incorrect = false;
  for (const auto& s : record.step_feedback) any_incorrect |= s.verdict == Verdict::Incorrect;
  const bool outcome_correct = record.outcome_verdict == Verdict::Correct;
  if ((any_incorrect && outcome_correct) || (!any_incorrect && !outcome_correct)) {
    flags.push_back({FlagKind::StepOutcomeContradiction, std::nullopt});
  }
  return flags;
}

std::vector<ConsistencyFlag> check_consistency(const FeedbackRecord& record,
                                               const SolutionLabels& gold) {
  auto flags = check_consistency(record);
  for (const auto& s : record.step_feedback) {
    for (const auto& g : gold.steps) {
      if (g.step_index == s.step_index && g.verdict != s.verdict) {
        flags.push_back({FlagKind::LabelContradiction, s.step_index});
      }
    }
  }
  bool gold_step_error = false;
  for (const auto& g : gold.steps) gold_step_error |= g.verdict == Verdict::Incorrect;
  if (gold.outcome.verdict == Verdict::Correct && gold_step_error) {
    flags.push_back({FlagKind::FalsePositiveSample, std::nullopt});
  }
  return flags;
}

std::vector<std::pair<int, ErrorTypeSet>> mine_error_type_labels(const FeedbackRecord& record) {
  static const std::regex prior_step(
      R"((previous|prior|earlier|preceding|last) step|step \d+ (was|is) (already )?(wrong|incorrect)|(from|in|of) step \d+|carried (over|forward)|propagat|based on (the|an) (wrong|incorrect|erroneous)|(wrong|incorrect|erroneous) (value|result)s? from)");
  std::vector<std::pair<int, ErrorTypeSet>> out;
  for (const auto& s : record.step_feedback) {
    if (s.verdict != Verdict::Incorrect) continue;
    const std::string e = detail::lower(s.explanation);
    ErrorTypeSet types;
    auto set = [&](ErrorType t) { types.set(static_cast<std::size_t>(t)); };
    if (contains_any(e, {"calculat", "arithmetic", "computation", "computed incorrectly",
                         "multiplied incorrectly", "added incorrectly", "sum is wrong",
                         "product is wrong"}) ||
        has_false_arithmetic(s.explanation)) {
      set(ErrorType::Calculation);
    }
    if (std::regex_search(e, prior_step)) set(ErrorType::Accumulation);
    if (contains_any(e, {"irrelevant", "unrelated", "not relevant", "does not contribute",
                         "doesn't contribute", "unnecessary", "redundant", "off-topic",
                         "not needed"})) {
      set(ErrorType::Unrelated);
    }
    if (contains_any(e, {"logic", "reasoning", "misinterpret", "misunderstand", "misread",
                         "wrong formula", "incorrect formula", "wrong approach",
                         "incorrect approach", "assum", "does not follow", "invalid"})) {
      set(ErrorType::Logic);
    }
    if (types.none()) set(ErrorType::Other);
    out.emplace_back(s.step_index, types);
  }
  return out;
}

std::string sft_label(const FeedbackRecord& record) {
  if (record.review_status == ReviewStatus::Edited && record.edited_text) {
    return *record.edited_text;
  }
  return render_feedback(record.step_feedback, record.outcome_verdict);
}

std::vector<nlohmann::json> export_sft_dataset(const std::vector<FeedbackRecord>& records,
                                               const Corpus& corpus) {
  std::vector<nlohmann::json> rows;
  for (const auto& r : records) {
    if (r.review_status != ReviewStatus::Accepted && r.review_status != ReviewStatus::Edited) {
      continue;
    }
    const Solution* s = corpus.find_solution(r.solution_id);
    if (s == nullptr) throw Error(Errc::NotFound, "solution '" + r.solution_id + "'");
    const Question& q = corpus.question(r.question_id);
    rows.push_back({{"prompt", build_direct_prompt(q, *s).text}, {"label", sft_label(r)}});
  }
  return rows;
}

}  // namespace minos
