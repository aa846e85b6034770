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

#ifndef QBOUND_DISCRIMINATION_HPP_
#define QBOUND_DISCRIMINATION_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qbound/channel_metrics.hpp"

namespace qbound {

enum class AccessMode { kParallel, kAdaptive };
std::string_view AccessModeName(AccessMode mode);
AccessMode ParseAccessMode(std::string_view name);

struct DiscriminationInstance {
  ChannelPair pair;
  double p = 0.5;
  double eps = 0.0;

  double q() const { return 1.0 - p; }
  void Validate() const;
  // 1 - eps (1 - eps) / (p q): the right-hand side every query bound must reach.
  double Threshold() const;
};

// Lower bound on a query count. Trivial is the one-query case of the trivial-case check.
class QueryCount {
 public:
  enum class Kind { kFinite, kInfinite, kTrivial };

  static QueryCount Finite(std::size_t n);
  static QueryCount Infinite() { return QueryCount(Kind::kInfinite, 0); }
  static QueryCount Trivial() { return QueryCount(Kind::kTrivial, 1); }

  Kind kind() const { return kind_; }
  bool is_infinite() const { return kind_ == Kind::kInfinite; }
  // Numeric value; 1 for Trivial, +inf for Infinite.
  double AsDouble() const;
  std::size_t count() const;
  std::string ToString() const;

  friend bool operator==(const QueryCount&, const QueryCount&) = default;
  // Order by strength as a lower bound; Trivial ranks as 1.
  friend bool operator<(const QueryCount& a, const QueryCount& b) { return a.AsDouble() < b.AsDouble(); }

 private:
  QueryCount(Kind kind, std::size_t n) : kind_(kind), n_(n) {}
  Kind kind_;
  std::size_t n_;
};

enum class QueryMethod { kClosedFormHeis, kClosedFormSql, kBinarySearch };
std::string_view QueryMethodName(QueryMethod m);

struct QueryDiagnostics {
  std::optional<std::size_t> n_max;  // empty when n_max is infinite
  bool n_max_capped = false;
  double root_fidelity = 0.0;
  double threshold = 0.0;
  std::vector<std::pair<std::size_t, double>> probes;  // (n, bound value at n)
  int sdp_solves = 0;
  std::string note;
};

struct QueryBoundResult {
  QueryCount lower_bound = QueryCount::Trivial();
  AccessMode mode = AccessMode::kParallel;
  QueryMethod method = QueryMethod::kBinarySearch;
  QueryDiagnostics diagnostics;
  std::string theorem_tag;
};

// Nudge applied to solver-derived quantities before ceilings and threshold tests.
inline constexpr double kCeilingNudge = 1e-9;
// Root fidelity at or below this counts as zero (disjoint supports).
inline constexpr double kZeroFidelity = 1e-9;
// Root fidelity at or above 1 - this counts as one (n_max infinite).
inline constexpr double kUnitFidelityGap = 1e-9;
// n_max used when eps = 0 and the root fidelity is positive.
inline constexpr std::size_t kEpsZeroNMaxCap = std::size_t{1} << 16;

std::optional<QueryCount> TrivialCaseCheck(const DiscriminationInstance& inst,
                                           const BoundOptions& opts = {});
// Same test given a precomputed root fidelity.
bool IsTrivialCase(double p, double eps, double root_fidelity);

// Smallest p_e with p_e (1 - p_e) >= p q (1 - bound); 0 when bound >= 1.
double ErrorProbFloorFromBound(double bound, double p);
double ErrorProbFloor(const ChannelPair& pair, std::size_t n, double p, AccessMode mode,
                      const BoundOptions& opts = {});

// Minimal integer n >= 1 with n (a + (n-1) b) >= c, b replaced by sqrt(a b) in adaptive mode.
// Exact in floating point: the returned n satisfies the predicate and n - 1 does not.
std::size_t QuadraticMinN(double a, double b, double c, AccessMode mode);
bool QuadraticPredicate(double a, double b, double c, std::size_t n, AccessMode mode);

QueryBoundResult QueryLowerClosedForm(const DiscriminationInstance& inst, AccessMode mode,
                                      const BoundOptions& opts = {});

struct NMaxResult {
  std::optional<std::size_t> n_max;  // empty means infinite
  bool capped = false;
  double root_fidelity = 0.0;
};
NMaxResult NMaxFromFidelity(double root_fidelity, double p, double eps);
NMaxResult NMaxUpper(const DiscriminationInstance& inst, const BoundOptions& opts = {});

struct SearchOutcome {
  std::size_t n = 1;
  int probes = 0;
};
// First n in [lo, hi] with pred(n), assuming pred is monotone; hi when none is found
// (hi itself is never probed).
SearchOutcome FirstSatisfying(std::size_t lo, std::size_t hi,
                              const std::function<bool(std::size_t)>& pred);
// Reference linear scan with the same convention.
SearchOutcome LinearScanFirst(std::size_t lo, std::size_t hi,
                              const std::function<bool(std::size_t)>& pred);

QueryBoundResult BinarySearchParallel(const DiscriminationInstance& inst, const BoundOptions& opts = {});
QueryBoundResult BinarySearchAdaptive(const DiscriminationInstance& inst, const BoundOptions& opts = {});

// Trivial check, then the binary search for the requested mode.
QueryBoundResult QueryLowerBound(const DiscriminationInstance& inst, AccessMode mode,
                                 const BoundOptions& opts = {});

}  // namespace qbound

#endif  // QBOUND_DISCRIMINATION_HPP_
