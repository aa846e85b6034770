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

#include "qbound/estimation.hpp"

#include <cmath>
#include <limits>

#include "qbound/error.hpp"

namespace qbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* ReductionFormula(AccessMode mode) {
  return mode == AccessMode::kParallel
             ? "p_e >= (1 - sqrt(1 - (1 - n inf{a_W + (n-1) b_W})))/2 over pairs |theta-theta'| > 2 delta"
             : "p_e >= (1 - sqrt(1 - (1 - n inf{a_W + (n-1) sqrt(a_W b_W)})))/2 over pairs |theta-theta'| > 2 delta";
}

void RequirePairs(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.empty()) {
    throw Error(ErrorCode::kNoAdmissiblePair, "no grid pair is separated by more than 2 delta inside the domain");
  }
}

}  // namespace

std::vector<double> UniformGrid(const ChannelFamily& fam, std::size_t points) {
  if (points == 0) throw Error(ErrorCode::kInvalidInput, "grid needs at least one point");
  std::vector<double> g(points);
  const double lo = fam.theta_lo(), hi = fam.theta_hi();
  for (std::size_t k = 0; k < points; ++k) {
    g[k] = lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(points + 1);
  }
  return g;
}

void EstimationInstance::Validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::kInvalidInput, "delta must be positive");
  if (!(eps > 0.0 && eps <= 0.5)) throw Error(ErrorCode::kInvalidInput, "eps must lie in (0, 1/2]");
  if (grid.empty()) throw Error(ErrorCode::kInvalidInput, "theta grid is empty");
  for (double t : grid) {
    if (!fam.Contains(t)) throw Error(ErrorCode::kOutOfDomain, "grid point outside the family domain");
  }
}

std::string_view PairingName(Pairing p) {
  return p == Pairing::kEconomical ? "economical" : "all_grid_pairs";
}

std::vector<std::pair<double, double>> AdmissiblePairs(const EstimationInstance& inst, Pairing pairing) {
  std::vector<std::pair<double, double>> out;
  const double sep = inst.PairSeparation();
  if (pairing == Pairing::kEconomical) {
    for (double t : inst.grid) {
      if (inst.fam.Contains(t + sep)) out.emplace_back(t, t + sep);
    }
  } else {
    for (std::size_t i = 0; i < inst.grid.size(); ++i) {
      for (std::size_t j = 0; j < inst.grid.size(); ++j) {
        const double a = inst.grid[i], b = inst.grid[j];
        if (b - a > 2.0 * inst.delta) out.emplace_back(a, b);
      }
    }
  }
  return out;
}

ChannelPair FamilyPair(const ChannelFamily& fam, double theta, double theta_prime) {
  return ChannelPair::FromChannels(fam.KrausAt(theta), fam.KrausAt(theta_prime));
}

EstimationFloor MinimaxErrorFloor(const EstimationInstance& inst, std::size_t n, AccessMode mode,
                                  Pairing pairing, const BoundOptions& opts) {
  inst.Validate();
  const auto pairs = AdmissiblePairs(inst, pairing);
  RequirePairs(pairs);
  EstimationFloor best;
  best.value = -1.0;
  best.label = "reduction";
  best.formula = ReductionFormula(mode);
  for (const auto& [t, tp] : pairs) {
    const double v = ErrorProbFloor(FamilyPair(inst.fam, t, tp), n, 0.5, mode, opts);
    ++best.pairs_evaluated;
    if (v > best.value) {
      best.value = v;
      best.theta = t;
      best.theta_prime = tp;
    }
  }
  return best;
}

EstimationQueryResult EstQueryLower(const EstimationInstance& inst, AccessMode mode, Pairing pairing,
                                    const BoundOptions& opts) {
  inst.Validate();
  const auto pairs = AdmissiblePairs(inst, pairing);
  RequirePairs(pairs);
  EstimationQueryResult best;
  best.formula = "max over admissible pairs of the p = q = 1/2 discrimination query lower bound";
  bool first = true;
  for (const auto& [t, tp] : pairs) {
    const DiscriminationInstance di{FamilyPair(inst.fam, t, tp), 0.5, inst.eps};
    const QueryBoundResult r = QueryLowerBound(di, mode, opts);
    ++best.pairs_evaluated;
    if (first || best.result.lower_bound < r.lower_bound) {
      best.result = r;
      best.theta = t;
      best.theta_prime = tp;
      first = false;
    }
    // Nothing can beat Infinite.
    if (r.lower_bound.is_infinite()) break;
  }
  best.result.theorem_tag = mode == AccessMode::kParallel ? "est_query_lower_parallel" : "est_query_lower_adaptive";
  return best;
}

std::string_view ScalingKindName(ScalingKind k) {
  switch (k) {
    case ScalingKind::kSqlCapped: return "SQL_capped";
    case ScalingKind::kHeisenbergPossible: return "Heisenberg_possible";
    case ScalingKind::kIndeterminate: return "Indeterminate";
  }
  return "unknown";
}

ScalingClassification ClassifyScaling(const ChannelFamily& fam, const std::vector<double>& grid,
                                      const BoundOptions& opts) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidInput, "theta grid is empty");
  ScalingClassification c;
  c.sql_denominator = kInf;
  c.heis_coefficient = kInf;
  c.heis_coefficient_adaptive = kInf;
  bool all_feasible = true;
  std::size_t used = 0;
  for (double theta : grid) {
    ScalingPoint pt;
    pt.theta = theta;
    try {
      const BoundReport sql = FisherSqlDenominator(fam, theta, opts);
      pt.sql_feasible = sql.solver_status == sdp::SolveStatus::kOptimal;
      pt.sql_value = sql.value;
      // A small a weight keeps the b-minimizing witness bounded.
      const BoundReport heavy = WeightedFisherTerms(fam, theta, 1e-6, 1.0, opts);
      pt.b_min = heavy.Scalar("b");
      pt.sqrt_ab = std::sqrt(heavy.Scalar("a") * pt.b_min);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSolverFailure) throw;
      pt.skipped = true;
      pt.warning = e.what();
    }
    if (!pt.skipped) {
      ++used;
      all_feasible = all_feasible && pt.sql_feasible;
      if (pt.sql_feasible) c.sql_denominator = std::min(c.sql_denominator, pt.sql_value);
      c.heis_coefficient = std::min(c.heis_coefficient, pt.b_min);
      c.heis_coefficient_adaptive = std::min(c.heis_coefficient_adaptive, pt.sqrt_ab);
    }
    c.points.push_back(std::move(pt));
  }
  if (used == 0) {
    c.kind = ScalingKind::kIndeterminate;
    return c;
  }
  if (all_feasible) {
    c.kind = ScalingKind::kSqlCapped;
    c.degenerate = c.sql_denominator <= 1e-9;
  } else {
    c.kind = ScalingKind::kHeisenbergPossible;
    c.sql_denominator = kInf;
  }
  return c;
}

EstimationFloor FisherMinimaxFloor(const EstimationInstance& inst, std::size_t n, AccessMode mode,
                                   const BoundOptions& opts) {
  inst.Validate();
  const double sep = inst.PairSeparation();
  EstimationFloor best;
  best.value = -1.0;
  best.label = "asymptotic";
  best.formula = mode == AccessMode::kParallel
                     ? "p_e >= floor((Delta^2/4) * 4n inf_H{a + (n-1) b}), Delta = 2 delta (1 + 1e-6), o(delta^2) dropped"
                     : "p_e >= floor((Delta^2/4) * 4n inf_H{a + (n-1) sqrt(a b)}), Delta = 2 delta (1 + 1e-6), o(delta^2) dropped";
  for (double t : inst.grid) {
    if (!inst.fam.Contains(t + sep)) continue;
    const BoundReport f = mode == AccessMode::kParallel ? ParallelFisherBound(inst.fam, t, n, opts)
                                                        : AdaptiveFisherBound(inst.fam, t, n, opts);
    const double v = ErrorProbFloorFromBound(0.25 * sep * sep * f.value, 0.5);
    ++best.pairs_evaluated;
    if (v > best.value) {
      best.value = v;
      best.theta = t;
      best.theta_prime = t + sep;
    }
  }
  if (best.pairs_evaluated == 0) {
    throw Error(ErrorCode::kNoAdmissiblePair, "no grid point leaves room for theta + 2 delta inside the domain");
  }
  return best;
}

}  // namespace qbound
