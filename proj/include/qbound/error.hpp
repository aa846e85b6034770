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

#ifndef QBOUND_ERROR_HPP_
#define QBOUND_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbound {

enum class ErrorCode {
  kInvalidInput,
  kNotHermitian,
  kNotPSD,
  kNotCPTP,
  kKrausCountMismatch,
  kOutOfDomain,
  kUnknownChannel,
  kInvalidParam,
  kShapeError,
  kSingularState,
  kNoFiniteN,
  kNoAdmissiblePair,
  kTooLarge,
  kSolverFailure,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qbound

#endif  // QBOUND_ERROR_HPP_
