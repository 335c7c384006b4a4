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

#include <bitset>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "minos/corpus.hpp"
#include "minos/solution.hpp"

namespace minos {

enum class PromptMode { LabelAware, Direct };

std::string_view to_string(PromptMode mode);
PromptMode parse_prompt_mode(std::string_view text);

struct FeedbackPrompt {
  PromptMode mode = PromptMode::LabelAware;
  std::string text;
  std::string question_id;
  std::string solution_id;
};

struct StepFeedback {
  int step_index = 1;
  Verdict verdict = Verdict::Correct;
  std::string explanation;
};

enum class FlagKind { StepOutcomeContradiction, LabelContradiction, FalsePositiveSample };

std::string_view to_string(FlagKind kind);

struct ConsistencyFlag {
  FlagKind kind = FlagKind::StepOutcomeContradiction;
  std::optional<int> step_index;  // LabelContradiction only

  friend bool operator==(const ConsistencyFlag&, const ConsistencyFlag&) = default;
};

enum class ReviewStatus { Pending, Accepted, Rejected, Edited };

std::string_view to_string(ReviewStatus status);
ReviewStatus parse_review_status(std::string_view text);
/// Only Pending -> {Accepted, Rejected, Edited} is legal.
bool is_legal_transition(ReviewStatus from, ReviewStatus to);

struct FeedbackRecord {
  std::string id;
  std::string question_id;
  std::string solution_id;
  PromptMode mode = PromptMode::LabelAware;
  std::vector<StepFeedback> step_feedback;
  Verdict outcome_verdict = Verdict::Correct;
  std::vector<ConsistencyFlag> consistency_flags;
  ReviewStatus review_status = ReviewStatus::Pending;
  std::optional<std::string> edited_text;
  std::string raw_response;
  std::optional<std::string> reviewer;
};

void to_json(nlohmann::json& j, const FeedbackRecord& r);
void from_json(const nlohmann::json& j, FeedbackRecord& r);

enum class ErrorType { Unrelated, Accumulation, Calculation, Logic, Other };
using ErrorTypeSet = std::bitset<5>;

inline constexpr ErrorType kErrorTypes[] = {ErrorType::Unrelated, ErrorType::Accumulation,
                                            ErrorType::Calculation, ErrorType::Logic,
                                            ErrorType::Other};

std::string_view to_string(ErrorType type);
/// Throws Error{UnknownCategory}.
ErrorType parse_error_type(std::string_view text);

/// Throws Error{LabelCountMismatch} unless there is one label per step.
FeedbackPrompt build_label_aware_prompt(const Question& question, const Solution& solution,
                                        const SolutionLabels& labels);
FeedbackPrompt build_direct_prompt(const Question& question, const Solution& solution);

/// The response grammar both prompt modes ask for.
std::string output_format_instruction();

/// Reads "Step <k>: [Correct|Incorrect] - <explanation>" lines for k = 1..K
/// and one "Outcome: [Correct|Incorrect]" line. Lines that are neither
/// continue the previous step's explanation; text before the first step
/// line is ignored. The result is Pending with empty ids.
FeedbackRecord parse_feedback(std::string_view raw, int expected_steps, PromptMode mode);

/// Inverse of parse_feedback over the verdict structure.
std::string render_feedback(const std::vector<StepFeedback>& steps, Verdict outcome);

std::vector<ConsistencyFlag> check_consistency(const FeedbackRecord& record);
std::vector<ConsistencyFlag> check_consistency(const FeedbackRecord& record,
                                               const SolutionLabels& gold);

/// Keyword rules over the explanations of Incorrect steps.
std::vector<std::pair<int, ErrorTypeSet>> mine_error_type_labels(const FeedbackRecord& record);

/// The SFT label text for a reviewed record: edited text when edited,
/// otherwise the rendered feedback.
std::string sft_label(const FeedbackRecord& record);

/// One {prompt, label} row per Accepted or Edited record, in input order;
/// the prompt is the direct-mode prompt for the record's solution.
std::vector<nlohmann::json> export_sft_dataset(const std::vector<FeedbackRecord>& records,
                                               const Corpus& corpus);

}  // namespace minos
