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

#include "qbound/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbound/error.hpp"

namespace qbound {

namespace {

constexpr double kMaxCount = 1e15;

std::size_t CeilCount(double x) {
  if (!std::isfinite(x) || x > kMaxCount) {
    throw Error(ErrorCode::kTooLarge, "query count exceeds representable range");
  }
  return x <= 1.0 ? 1 : static_cast<std::size_t>(std::ceil(x));
}

QueryBoundResult MakeResult(AccessMode mode, QueryMethod method, std::string tag) {
  QueryBoundResult r;
  r.mode = mode;
  r.method = method;
  r.theorem_tag = std::move(tag);
  return r;
}

std::string SearchTag(AccessMode mode) {
  return mode == AccessMode::kParallel ? "binary_search_parallel" : "binary_search_adaptive";
}

// Shared driver for both binary searches. `bound(n)` returns the n-query Bures bound.
QueryBoundResult RunBinarySearch(const DiscriminationInstance& inst, AccessMode mode,
                                 const BoundOptions& opts,
                                 const std::function<BoundReport(std::size_t)>& bound) {
  inst.Validate();
  QueryBoundResult r = MakeResult(mode, QueryMethod::kBinarySearch, SearchTag(mode));
  const double threshold = inst.Threshold();
  r.diagnostics.threshold = threshold;
  if (inst.eps >= std::min(inst.p, inst.q())) {
    r.lower_bound = QueryCount::Trivial();
    r.diagnostics.note = "eps >= min(p, q)";
    return r;
  }
  const BoundReport rf = RootFidelityChannels(inst.pair, opts);
  r.diagnostics.sdp_solves += rf.sdp_solves;
  r.diagnostics.root_fidelity = rf.value;
  if (rf.value <= kZeroFidelity) {
    r.lower_bound = QueryCount::Trivial();
    r.diagnostics.note = "zero channel fidelity";
    return r;
  }
  const NMaxResult nm = NMaxFromFidelity(rf.value, inst.p, inst.eps);
  r.diagnostics.n_max = nm.n_max;
  r.diagnostics.n_max_capped = nm.capped;
  if (nm.capped) r.diagnostics.note = "eps = 0: search range capped at 2^16";
  if (!nm.n_max) {
    const BoundReport sql = BuresSqlDenominator(inst.pair, opts);
    r.diagnostics.sdp_solves += sql.sdp_solves;
    if (sql.solver_status == sdp::SolveStatus::kOptimal && sql.value <= kCeilingNudge) {
      r.lower_bound = QueryCount::Infinite();
      r.diagnostics.note = "M_W = I feasible with a_W = 0: channels indistinguishable";
      return r;
    }
    QueryBoundResult cf = QueryLowerClosedForm(inst, mode, opts);
    cf.diagnostics.note = "n_max infinite; fell back to closed form";
    cf.diagnostics.sdp_solves += r.diagnostics.sdp_solves;
    return cf;
  }
  auto pred = [&](std::size_t n) {
    const BoundReport b = bound(n);
    r.diagnostics.sdp_solves += b.sdp_solves;
    r.diagnostics.probes.emplace_back(n, b.value);
    return b.value + kCeilingNudge >= threshold;
  };
  const SearchOutcome out = FirstSatisfying(1, *nm.n_max, pred);
  r.lower_bound = QueryCount::Finite(out.n);
  return r;
}

}  // namespace

std::string_view AccessModeName(AccessMode mode) {
  return mode == AccessMode::kParallel ? "parallel" : "adaptive";
}

AccessMode ParseAccessMode(std::string_view name) {
  if (name == "parallel") return AccessMode::kParallel;
  if (name == "adaptive") return AccessMode::kAdaptive;
  throw Error(ErrorCode::kInvalidInput, "mode must be parallel or adaptive, got '" + std::string(name) + "'");
}

std::string_view QueryMethodName(QueryMethod m) {
  switch (m) {
    case QueryMethod::kClosedFormHeis: return "closed_form_heis";
    case QueryMethod::kClosedFormSql: return "closed_form_sql";
    case QueryMethod::kBinarySearch: return "binary_search";
  }
  return "unknown";
}

void DiscriminationInstance::Validate() const {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::kInvalidInput, "prior p must lie in (0, 1)");
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error(ErrorCode::kInvalidInput, "eps must lie in [0, 1]");
}

double DiscriminationInstance::Threshold() const { return 1.0 - eps * (1.0 - eps) / (p * q()); }

QueryCount QueryCount::Finite(std::size_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "query counts start at 1");
  return QueryCount(Kind::kFinite, n);
}

double QueryCount::AsDouble() const {
  return kind_ == Kind::kInfinite ? std::numeric_limits<double>::infinity() : static_cast<double>(n_);
}

std::size_t QueryCount::count() const {
  if (kind_ == Kind::kInfinite) throw Error(ErrorCode::kInvalidInput, "query count is infinite");
  return n_;
}

std::string QueryCount::ToString() const {
  switch (kind_) {
    case Kind::kFinite: return std::to_string(n_);
    case Kind::kInfinite: return "Infinite";
    case Kind::kTrivial: return "Trivial(1)";
  }
  return "?";
}

bool IsTrivialCase(double p, double eps, double root_fidelity) {
  return eps >= std::min(p, 1.0 - p) || root_fidelity <= kZeroFidelity;
}

std::optional<QueryCount> TrivialCaseCheck(const DiscriminationInstance& inst, const BoundOptions& opts) {
  inst.Validate();
  if (inst.eps >= std::min(inst.p, inst.q())) return QueryCount::Trivial();
  if (RootFidelityChannels(inst.pair, opts).value <= kZeroFidelity) return QueryCount::Trivial();
  return std::nullopt;
}

double ErrorProbFloorFromBound(double bound, double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::kInvalidInput, "prior p must lie in (0, 1)");
  if (bound >= 1.0) return 0.0;
  const double disc = 1.0 - 4.0 * p * (1.0 - p) * (1.0 - std::max(bound, 0.0));
  return 0.5 * (1.0 - std::sqrt(std::max(disc, 0.0)));
}

double ErrorProbFloor(const ChannelPair& pair, std::size_t n, double p, AccessMode mode,
                      const BoundOptions& opts) {
  const BoundReport b = mode == AccessMode::kParallel ? ParallelBuresBound(pair, n, opts)
                                                      : AdaptiveBuresBound(pair, n, opts);
  return ErrorProbFloorFromBound(b.value, p);
}

bool QuadraticPredicate(double a, double b, double c, std::size_t n, AccessMode mode) {
  const double slope = mode == AccessMode::kParallel ? b : std::sqrt(a * b);
  const double nd = static_cast<double>(n);
  return nd * (a + (nd - 1.0) * slope) >= c;
}

std::size_t QuadraticMinN(double a, double b, double c, AccessMode mode) {
  for (double v : {a, b, c}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kInvalidInput, "quadratic coefficients must be finite and nonnegative");
    }
  }
  if (b > a * (1.0 + 1e-12)) throw Error(ErrorCode::kInvalidInput, "quadratic lemma needs b <= a");
  if (c == 0.0) return 1;
  if (a == 0.0) throw Error(ErrorCode::kNoFiniteN, "a = 0 with c > 0: no finite query count");
  const double slope = mode == AccessMode::kParallel ? b : std::sqrt(a * b);
  double x;
  if (slope == 0.0) {
    x = c / a;
  } else {
    const double d = slope - a;
    x = (d + std::sqrt(d * d + 4.0 * slope * c)) / (2.0 * slope);
  }
  std::size_t n = CeilCount(x);
  // Fix-up against the exact predicate to absorb rounding in the closed form.
  while (n > 1 && QuadraticPredicate(a, b, c, n - 1, mode)) --n;
  while (!QuadraticPredicate(a, b, c, n, mode)) ++n;
  return n;
}

QueryBoundResult QueryLowerClosedForm(const DiscriminationInstance& inst, AccessMode mode,
                                      const BoundOptions& opts) {
  inst.Validate();
  QueryBoundResult r = MakeResult(mode, QueryMethod::kClosedFormHeis,
                                  mode == AccessMode::kParallel ? "closed_form_parallel" : "closed_form_adaptive");
  const double c = inst.Threshold();
  r.diagnostics.threshold = c;
  if (c <= 0.0) {
    r.lower_bound = QueryCount::Finite(1);
    r.diagnostics.note = "vacuous threshold";
    return r;
  }
  const double cn = std::max(c - kCeilingNudge, 0.0);
  QueryCount best = QueryCount::Finite(1);
  auto heis = [&](const BoundReport& rep) {
    const ContractionTerms t = EvaluateContraction(inst.pair, rep.witness.at("W"));
    const double a = t.a;
    const double b = std::min(t.b, a);
    const QueryCount qc =
        a <= 0.0 ? QueryCount::Infinite() : QueryCount::Finite(QuadraticMinN(a, b, cn, mode));
    r.diagnostics.sdp_solves += rep.sdp_solves;
    if (best < qc) best = qc;
  };
  heis(BuresSqChannels(inst.pair, opts));
  heis(mode == AccessMode::kParallel ? ParallelBuresBound(inst.pair, 2, opts)
                                     : AdaptiveBuresBound(inst.pair, 2, opts));
  const BoundReport sql = BuresSqlDenominator(inst.pair, opts);
  r.diagnostics.sdp_solves += sql.sdp_solves;
  if (sql.solver_status == sdp::SolveStatus::kOptimal) {
    const QueryCount qc = sql.value <= kCeilingNudge ? QueryCount::Infinite()
                                                    : QueryCount::Finite(QuadraticMinN(sql.value, 0.0, cn, mode));
    if (best < qc) {
      best = qc;
      r.method = QueryMethod::kClosedFormSql;
    }
  } else {
    r.diagnostics.note = "M_W = I infeasible; SQL form omitted";
  }
  r.lower_bound = best;
  return r;
}

NMaxResult NMaxFromFidelity(double root_fidelity, double p, double eps) {
  NMaxResult r;
  r.root_fidelity = root_fidelity;
  if (root_fidelity >= 1.0 - kUnitFidelityGap) return r;
  if (root_fidelity <= 0.0) {
    r.n_max = 1;
    return r;
  }
  if (eps <= 0.0) {
    r.n_max = kEpsZeroNMaxCap;
    r.capped = true;
    return r;
  }
  const double num = std::log(std::sqrt(p * (1.0 - p)) / eps);
  if (num <= 0.0) {
    r.n_max = 1;
    return r;
  }
  const double x = num / -std::log(root_fidelity);
  if (x > kMaxCount) {
    r.n_max = static_cast<std::size_t>(kMaxCount);
    r.capped = true;
    return r;
  }
  r.n_max = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(x - kCeilingNudge)));
  return r;
}

NMaxResult NMaxUpper(const DiscriminationInstance& inst, const BoundOptions& opts) {
  inst.Validate();
  return NMaxFromFidelity(RootFidelityChannels(inst.pair, opts).value, inst.p, inst.eps);
}

SearchOutcome FirstSatisfying(std::size_t lo, std::size_t hi, const std::function<bool(std::size_t)>& pred) {
  if (lo > hi) throw Error(ErrorCode::kInvalidInput, "empty search range");
  SearchOutcome out;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++out.probes;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  out.n = lo;
  return out;
}

SearchOutcome LinearScanFirst(std::size_t lo, std::size_t hi, const std::function<bool(std::size_t)>& pred) {
  if (lo > hi) throw Error(ErrorCode::kInvalidInput, "empty search range");
  SearchOutcome out;
  for (std::size_t n = lo; n < hi; ++n) {
    ++out.probes;
    if (pred(n)) {
      out.n = n;
      return out;
    }
  }
  out.n = hi;
  return out;
}

QueryBoundResult BinarySearchParallel(const DiscriminationInstance& inst, const BoundOptions& opts) {
  return RunBinarySearch(inst, AccessMode::kParallel, opts,
                         [&](std::size_t n) { return ParallelBuresBound(inst.pair, n, opts); });
}

QueryBoundResult BinarySearchAdaptive(const DiscriminationInstance& inst, const BoundOptions& opts) {
  std::optional<BoundReport> sql;
  return RunBinarySearch(inst, AccessMode::kAdaptive, opts, [&](std::size_t n) {
    int extra = 0;
    if (n > 1 && !sql) {
      sql = BuresSqlDenominator(inst.pair, opts);
      extra = sql->sdp_solves;
    }
    BoundReport b = AdaptiveBuresBound(inst.pair, n, opts, sql);
    b.sdp_solves += extra;
    return b;
  });
}

QueryBoundResult QueryLowerBound(const DiscriminationInstance& inst, AccessMode mode, const BoundOptions& opts) {
  return mode == AccessMode::kParallel ? BinarySearchParallel(inst, opts) : BinarySearchAdaptive(inst, opts);
}

}  // namespace qbound
