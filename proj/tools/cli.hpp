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

#ifndef QBOUND_TOOLS_CLI_HPP_
#define QBOUND_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace qbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitSolverFailure = 3;

// Report row. CSV column order: instance, n, bound, method, status, witness_norm, theorem_tag.
struct Row {
  std::string instance;
  std::string n;
  double bound = 0.0;
  std::string bound_text;  // overrides `bound` for query counts ("Infinite", "Trivial(1)")
  std::string method;
  std::string status = "ok";
  double witness_norm = 0.0;
  std::string theorem_tag;
};

void WriteTable(const std::vector<Row>& rows, std::ostream& out);
void WriteCsv(const std::vector<Row>& rows, std::ostream& out);
void WriteJson(const std::string& command, const std::vector<Row>& rows, std::ostream& out);

// args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbound::cli

#endif  // QBOUND_TOOLS_CLI_HPP_
