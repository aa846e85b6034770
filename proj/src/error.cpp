// Copyright 2026 The qbound Authors
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

#include "qbound/error.hpp"

namespace qbound {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotPSD: return "NotPSD";
    case ErrorCode::kNotCPTP: return "NotCPTP";
    case ErrorCode::kKrausCountMismatch: return "KrausCountMismatch";
    case ErrorCode::kOutOfDomain: return "OutOfDomain";
    case ErrorCode::kUnknownChannel: return "UnknownChannel";
    case ErrorCode::kInvalidParam: return "InvalidParam";
    case ErrorCode::kShapeError: return "ShapeError";
    case ErrorCode::kSingularState: return "SingularState";
    case ErrorCode::kNoFiniteN: return "NoFiniteN";
    case ErrorCode::kNoAdmissiblePair: return "NoAdmissiblePair";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kSolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace qbound
