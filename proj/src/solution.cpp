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

#include "minos/solution.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <regex>

#include "minos/error.hpp"
#include "strings.hpp"

namespace minos {
namespace {

constexpr std::string_view kGsmMarker = "####";
constexpr std::string_view kAnswerLine = "the answer is";
constexpr std::string_view kBoxed = "\\boxed{";

// Cuts `text` at the first answer marker: "####" anywhere or a line that
// starts with "The answer is".
std::string_view strip_answer_tail(std::string_view text) {
  std::size_t cut = text.find(kGsmMarker);
  std::size_t line_start = 0;
  while (line_start < text.size() && line_start < cut) {
    std::string_view rest = text.substr(line_start);
    std::size_t offset = 0;
    while (offset < rest.size() && detail::is_space(rest[offset]) &&
           rest[offset] != '\n') {
      ++offset;
    }
    if (detail::starts_with_icase(rest.substr(offset), kAnswerLine)) {
      cut = std::min(cut, line_start + offset);
      break;
    }
    std::size_t nl = text.find('\n', line_start);
    if (nl == std::string_view::npos) break;
    line_start = nl + 1;
  }
  return cut == std::string_view::npos ? text : text.substr(0, cut);
}

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

bool rational_equal(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den ==
         static_cast<__int128>(b.num) * a.den;
}

// Parses at most 18 decimal digits; longer strings are left to the decimal
// fallback.
std::optional<std::int64_t> parse_digits(std::string_view digits) {
  if (digits.empty() || digits.size() > 18) return std::nullopt;
  std::int64_t value = 0;
  for (char c : digits) value = value * 10 + (c - '0');
  return value;
}

std::optional<Rational> parse_rational(const std::string& s) {
  static const std::regex decimal(R"(^([-+]?)(\d*)(?:\.(\d*))?$)");
  static const std::regex fraction(R"(^([-+]?)(\d+)\s*/\s*(\d+)$)");
  static const std::regex latex_frac(
      R"(^([-+]?)\\[dt]?frac\{\s*([-+]?)(\d+)\s*\}\{\s*([-+]?)(\d+)\s*\}$)");
  std::smatch m;
  if (std::regex_match(s, m, decimal)) {
    std::string whole = m[2].str();
    std::string frac = m[3].matched ? m[3].str() : std::string();
    if (whole.empty() && frac.empty()) return std::nullopt;
    auto num = parse_digits(whole + frac);
    if (!num) return std::nullopt;
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return make_rational(m[1].str() == "-" ? -*num : *num, den);
  }
  if (std::regex_match(s, m, fraction)) {
    auto num = parse_digits(m[2].str());
    auto den = parse_digits(m[3].str());
    if (!num || !den || *den == 0) return std::nullopt;
    return make_rational(m[1].str() == "-" ? -*num : *num, *den);
  }
  if (std::regex_match(s, m, latex_frac)) {
    auto num = parse_digits(m[3].str());
    auto den = parse_digits(m[5].str());
    if (!num || !den || *den == 0) return std::nullopt;
    int sign = (m[1].str() == "-" ? -1 : 1) * (m[2].str() == "-" ? -1 : 1) *
               (m[4].str() == "-" ? -1 : 1);
    return make_rational(sign * *num, *den);
  }
  return std::nullopt;
}

std::optional<double> parse_decimal(const std::string& s) {
  static const std::regex number(
      R"(^[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$)");
  if (!std::regex_match(s, number)) return std::nullopt;
  double value = std::strtod(s.c_str(), nullptr);
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::string normalize_answer(std::string_view raw) {
  std::string s(detail::trim(raw));
  detail::replace_all(s, "\\$", "");
  detail::replace_all(s, "$", "");
  detail::replace_all(s, "\\%", "");
  detail::replace_all(s, "%", "");
  s = std::string(detail::trim(s));
  static const std::regex thousands(R"(^[-+]?\d{1,3}(,\d{3})+(\.\d*)?$)");
  if (std::regex_match(s, thousands)) detail::replace_all(s, ",", "");
  return s;
}

struct NumericValue {
  std::optional<Rational> exact;
  std::optional<double> approx;
};

NumericValue numeric_value(const std::string& normalized) {
  NumericValue v;
  v.exact = parse_rational(normalized);
  if (v.exact) {
    v.approx = static_cast<double>(v.exact->num) /
               static_cast<double>(v.exact->den);
  } else {
    v.approx = parse_decimal(normalized);
  }
  return v;
}

std::string normalize_operators(std::string_view text) {
  std::string s(text);
  detail::replace_all(s, "\xC3\x97", "*");      // multiplication sign
  detail::replace_all(s, "\xC3\xB7", "/");      // division sign
  detail::replace_all(s, "\xE2\x88\x92", "-");  // minus sign
  detail::replace_all(s, "\xE2\x80\x93", "-");  // en dash
  detail::replace_all(s, "\\times", "*");
  detail::replace_all(s, "\\cdot", "*");
  detail::replace_all(s, "\\div", "/");
  return s;
}

// Recursive-descent evaluation of + - * / and parentheses over decimals.
// Returns nullopt unless the whole input parses and contains an operator.
class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  std::optional<double> parse() {
    auto value = sum();
    skip_space();
    if (!value || pos_ != text_.size() || operators_ == 0) return std::nullopt;
    return value;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::optional<double> sum() {
    auto lhs = product();
    while (lhs && (peek() == '+' || peek() == '-')) {
      char op = text_[pos_++];
      ++operators_;
      auto rhs = product();
      if (!rhs) return std::nullopt;
      lhs = op == '+' ? *lhs + *rhs : *lhs - *rhs;
    }
    return lhs;
  }

  std::optional<double> product() {
    auto lhs = atom();
    while (lhs) {
      char op = peek();
      if (op != '*' && op != '/' && op != 'x' && op != 'X') break;
      ++pos_;
      ++operators_;
      auto rhs = atom();
      if (!rhs) return std::nullopt;
      lhs = op == '/' ? *lhs / *rhs : *lhs * *rhs;
    }
    return lhs;
  }

  std::optional<double> atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      auto inner = sum();
      if (!inner || peek() != ')') return std::nullopt;
      ++pos_;
      return inner;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) return std::nullopt;
    std::string digits(text_.substr(start, pos_ - start));
    if (digits.front() == '.' || digits.back() == '.') return std::nullopt;
    return std::stod(digits);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int operators_ = 0;
};

std::optional<double> evaluate_expression(std::string_view text) {
  return ExpressionParser(text).parse();
}

}  // namespace

std::string_view to_string(Dataset dataset) {
  return dataset == Dataset::GSM8K ? "GSM8K" : "MATH";
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::Correct ? "Correct" : "Incorrect";
}

Dataset parse_dataset(std::string_view text) {
  std::string t = detail::lower(detail::trim(text));
  if (t == "gsm8k") return Dataset::GSM8K;
  if (t == "math" || t == "math500") return Dataset::MATH;
  throw Error(Errc::MalformedInput, "unknown dataset '" + std::string(text) + "'");
}

Verdict parse_verdict(std::string_view text) {
  std::string_view t = detail::trim(text);
  if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
    t = detail::trim(t.substr(1, t.size() - 2));
  }
  std::string l = detail::lower(t);
  if (l == "correct") return Verdict::Correct;
  if (l == "incorrect") return Verdict::Incorrect;
  throw Error(Errc::UnparseableVerdict, "'" + std::string(text) + "'");
}

std::vector<Step> segment_steps(std::string_view raw_text) {
  if (detail::trim(raw_text).empty()) {
    throw Error(Errc::EmptyInput, "solution text is blank");
  }
  static const std::regex marker(R"(\bstep\s*(\d+)\s*:)", std::regex::icase);
  const std::string text(raw_text);

  struct Marker {
    int index;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Marker> markers;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), marker);
       it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    markers.push_back({std::stoi(m[1].str()),
                       static_cast<std::size_t>(m.position(0)),
                       static_cast<std::size_t>(m.position(0) + m.length(0))});
  }

  std::vector<Step> steps;
  if (!markers.empty()) {
    // Markers after the answer line belong to the answer, not to the steps.
    const std::size_t body_end = strip_answer_tail(text).size();
    for (std::size_t i = 0; i < markers.size(); ++i) {
      const Marker& mk = markers[i];
      if (mk.begin >= body_end) break;
      const int expected = static_cast<int>(steps.size()) + 1;
      if (mk.index != expected) {
        throw Error(Errc::NonMonotonicSteps,
                    "found 'Step " + std::to_string(mk.index) +
                        ":' where step " + std::to_string(expected) +
                        " was expected");
      }
      std::size_t end = i + 1 < markers.size() ? markers[i + 1].begin : text.size();
      end = std::min(end, body_end);
      std::string_view body = detail::trim(
          std::string_view(text).substr(mk.end, end - mk.end));
      if (body.empty()) {
        throw Error(Errc::EmptyStep, "step " + std::to_string(mk.index));
      }
      steps.push_back({mk.index, std::string(body)});
    }
    return steps;
  }

  for (std::string_view line : detail::split_lines(text)) {
    std::string_view body = detail::trim(strip_answer_tail(detail::trim(line)));
    if (body.empty()) continue;
    steps.push_back({static_cast<int>(steps.size()) + 1, std::string(body)});
  }
  return steps;
}

std::string extract_final_answer(std::string_view raw_text, Dataset dataset) {
  if (dataset == Dataset::GSM8K) {
    std::size_t pos = raw_text.rfind(kGsmMarker);
    if (pos == std::string_view::npos) {
      throw Error(Errc::AnswerMarkerMissing, "no '####' marker");
    }
    std::string_view answer =
        detail::trim(raw_text.substr(pos + kGsmMarker.size()));
    if (answer.empty()) {
      throw Error(Errc::AnswerMarkerMissing, "'####' is followed by nothing");
    }
    return std::string(answer);
  }

  std::size_t pos = raw_text.rfind(kBoxed);
  if (pos == std::string_view::npos) {
    throw Error(Errc::AnswerMarkerMissing, "no '\\boxed{' group");
  }
  const std::size_t start = pos + kBoxed.size();
  int depth = 1;
  for (std::size_t i = start; i < raw_text.size(); ++i) {
    char c = raw_text[i];
    if (c == '\\' && i + 1 < raw_text.size() &&
        (raw_text[i + 1] == '{' || raw_text[i + 1] == '}')) {
      ++i;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}' && --depth == 0) {
      return std::string(detail::trim(raw_text.substr(start, i - start)));
    }
  }
  throw Error(Errc::UnbalancedBraces, "unterminated '\\boxed{' group");
}

std::optional<std::string> try_extract_final_answer(std::string_view raw_text,
                                                    Dataset dataset) {
  try {
    return extract_final_answer(raw_text, dataset);
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool answers_equivalent(std::string_view a, std::string_view b) {
  const std::string na = normalize_answer(a);
  const std::string nb = normalize_answer(b);
  const NumericValue va = numeric_value(na);
  const NumericValue vb = numeric_value(nb);
  if (va.exact && vb.exact) return rational_equal(*va.exact, *vb.exact);
  if (va.approx && vb.approx) {
    const double x = *va.approx;
    const double y = *vb.approx;
    if (x == y) return true;
    return std::fabs(x - y) <= 1e-6 * std::max(std::fabs(x), std::fabs(y));
  }
  return detail::collapse_whitespace(na) == detail::collapse_whitespace(nb);
}

Solution parse_solution(std::string id, std::string question_id,
                        std::string raw_text, Dataset dataset) {
  Solution s;
  s.id = std::move(id);
  s.question_id = std::move(question_id);
  s.steps = segment_steps(raw_text);
  s.final_answer = try_extract_final_answer(raw_text, dataset);
  s.raw_text = std::move(raw_text);
  return s;
}

bool has_false_arithmetic(std::string_view text) {
  std::string s = normalize_operators(text);
  static const std::regex thousands(R"((\d),(\d{3})(?!\d))");
  s = std::regex_replace(s, thousands, "$1$2");
  detail::replace_all(s, "$", "");

  auto in_expression = [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) ||
           std::string_view(".+-*/xX() ").find(c) != std::string_view::npos;
  };
  static const std::regex rhs_number(R"(^\s*(-?\d+(?:\.\d+)?))");

  for (std::size_t eq = s.find('='); eq != std::string::npos;
       eq = s.find('=', eq + 1)) {
    std::smatch m;
    const std::string rest = s.substr(eq + 1);
    if (!std::regex_search(rest, m, rhs_number)) continue;
    const double claimed = std::stod(m[1].str());

    std::size_t begin = eq;
    while (begin > 0 && in_expression(s[begin - 1])) --begin;
    // Longest suffix of the run that forms a complete expression.
    for (std::size_t start = begin; start < eq; ++start) {
      if (start > begin && in_expression(s[start - 1]) && s[start - 1] != ' ' &&
          s[start - 1] != '(') {
        continue;
      }
      auto value = evaluate_expression(std::string_view(s).substr(start, eq - start));
      if (!value) continue;
      const double scale = std::max({1.0, std::fabs(*value), std::fabs(claimed)});
      if (!std::isfinite(*value) || std::fabs(*value - claimed) > 1e-6 * scale) {
        return true;
      }
      break;
    }
  }
  return false;
}

}  // namespace minos
