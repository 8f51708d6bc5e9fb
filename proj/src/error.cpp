// Copyright 2026 The hprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hprobe/error.hpp"

namespace hprobe {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::FoundationCoverage: return "FoundationCoverage";
    case ErrorCode::IllegalFoundation: return "IllegalFoundation";
    case ErrorCode::PermutationMismatch: return "PermutationMismatch";
    case ErrorCode::WrongCount: return "WrongCount";
    case ErrorCode::Unparseable: return "Unparseable";
    case ErrorCode::TransportExhausted: return "TransportExhausted";
    case ErrorCode::AuthMissing: return "AuthMissing";
    case ErrorCode::MalformedReply: return "MalformedReply";
    case ErrorCode::InvalidConversation: return "InvalidConversation";
    case ErrorCode::CassetteMiss: return "CassetteMiss";
    case ErrorCode::TooFewItems: return "TooFewItems";
    case ErrorCode::TooFewRuns: return "TooFewRuns";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::SingleLevel: return "SingleLevel";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoValidRuns: return "NoValidRuns";
    case ErrorCode::BankVersionMismatch: return "BankVersionMismatch";
    case ErrorCode::MissingBundle: return "MissingBundle";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::OutputLocked: return "OutputLocked";
  }
  return "Unknown";
}

}  // namespace hprobe
