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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace minos {

enum class Dataset { GSM8K, MATH };
enum class Verdict { Correct, Incorrect };

struct Question {
  std::string id;
  Dataset dataset = Dataset::GSM8K;
  std::string text;
  std::string gold_answer;
};

/// One reasoning step; `index` is 1-based.
struct Step {
  int index = 1;
  std::string text;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Solution {
  std::string id;
  std::string question_id;
  std::string raw_text;
  std::vector<Step> steps;
  std::optional<std::string> final_answer;
};

struct StepLabel {
  int step_index = 1;
  Verdict verdict = Verdict::Correct;
};

struct OutcomeLabel {
  Verdict verdict = Verdict::Correct;
};

/// Gold labels attached to one solution.
struct SolutionLabels {
  std::string solution_id;
  OutcomeLabel outcome;
  std::vector<StepLabel> steps;
};

std::string_view to_string(Dataset dataset);
std::string_view to_string(Verdict verdict);
Dataset parse_dataset(std::string_view text);
/// Accepts "correct"/"incorrect" in any case, optionally bracketed.
Verdict parse_verdict(std::string_view text);

inline double as_binary(Verdict verdict) {
  return verdict == Verdict::Correct ? 1.0 : 0.0;
}

/// Splits a solution into steps.
///
/// Explicit "Step <k>:" markers (case-insensitive) take precedence and must
/// number 1..K in order. Without markers every non-empty line is a step.
/// Answer lines ("####", "The answer is") never become steps. Text before
/// the first marker is ignored.
///
/// Throws Error{EmptyInput} for whitespace-only input,
/// Error{NonMonotonicSteps} for out-of-order markers and Error{EmptyStep}
/// for a marker with no text after it.
std::vector<Step> segment_steps(std::string_view raw_text);

/// GSM8K: text after the last "####". MATH: contents of the last
/// "\boxed{...}" group with nested braces balanced.
std::string extract_final_answer(std::string_view raw_text, Dataset dataset);

/// Like extract_final_answer but returns nullopt instead of throwing.
std::optional<std::string> try_extract_final_answer(std::string_view raw_text,
                                                    Dataset dataset);

/// Equivalence of two final answers: exact rationals first, then decimals at
/// 1e-6 relative tolerance, then whitespace-collapsed string equality.
bool answers_equivalent(std::string_view a, std::string_view b);

/// Segments `raw_text` and extracts its final answer (absent when no answer
/// marker can be read).
Solution parse_solution(std::string id, std::string question_id,
                        std::string raw_text, Dataset dataset);

/// True if `text` contains an equality "a op b = c" (op one of + - * / and
/// their unicode forms) that does not hold numerically.
bool has_false_arithmetic(std::string_view text);

}  // namespace minos
