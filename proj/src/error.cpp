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

#include "minos/error.hpp"

namespace minos {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NonMonotonicSteps: return "NonMonotonicSteps";
    case Errc::EmptyStep: return "EmptyStep";
    case Errc::AnswerMarkerMissing: return "AnswerMarkerMissing";
    case Errc::UnbalancedBraces: return "UnbalancedBraces";
    case Errc::DomainError: return "DomainError";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ModeMismatch: return "ModeMismatch";
    case Errc::EmptySolution: return "EmptySolution";
    case Errc::EmptyArray: return "EmptyArray";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::NoExtractableAnswer: return "NoExtractableAnswer";
    case Errc::MissingReward: return "MissingReward";
    case Errc::LabelCountMismatch: return "LabelCountMismatch";
    case Errc::TransportError: return "TransportError";
    case Errc::RateLimited: return "RateLimited";
    case Errc::MalformedResponse: return "MalformedResponse";
    case Errc::StepCountMismatch: return "StepCountMismatch";
    case Errc::MissingOutcomeLine: return "MissingOutcomeLine";
    case Errc::UnparseableVerdict: return "UnparseableVerdict";
    case Errc::MissingQuestion: return "MissingQuestion";
    case Errc::NoFalsePositives: return "NoFalsePositives";
    case Errc::NoIncorrectSteps: return "NoIncorrectSteps";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::UnknownCategory: return "UnknownCategory";
    case Errc::NotFound: return "NotFound";
    case Errc::IllegalTransition: return "IllegalTransition";
    case Errc::MalformedInput: return "MalformedInput";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace minos
