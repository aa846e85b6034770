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

#ifndef QBOUND_ESTIMATION_HPP_
#define QBOUND_ESTIMATION_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qbound/channel.hpp"
#include "qbound/channel_metrics.hpp"
#include "qbound/discrimination.hpp"

namespace qbound {

inline constexpr std::size_t kDefaultGridPoints = 33;
// Multiplicative margin making |theta - theta'| > 2 delta strict.
inline constexpr double kPairMargin = 1e-6;

// `points` uniformly spaced values strictly inside the family domain:
// lo + (hi - lo) (k + 1) / (points + 1), k = 0 .. points - 1.
std::vector<double> UniformGrid(const ChannelFamily& fam, std::size_t points = kDefaultGridPoints);

struct EstimationInstance {
  ChannelFamily fam;
  double delta = 0.0;
  double eps = 0.0;
  std::vector<double> grid;

  void Validate() const;
  // 2 delta (1 + margin).
  double PairSeparation() const { return 2.0 * delta * (1.0 + kPairMargin); }
};

enum class Pairing {
  kEconomical,    // theta' = theta + 2 delta (1 + margin), theta from the grid
  kAllGridPairs,  // every grid pair with |theta - theta'| > 2 delta
};
std::string_view PairingName(Pairing p);

std::vector<std::pair<double, double>> AdmissiblePairs(const EstimationInstance& inst,
                                                       Pairing pairing = Pairing::kEconomical);
ChannelPair FamilyPair(const ChannelFamily& fam, double theta, double theta_prime);

struct EstimationFloor {
  double value = 0.0;
  double theta = 0.0;
  double theta_prime = 0.0;
  std::size_t pairs_evaluated = 0;
  std::string formula;
  std::string label;  // "reduction" or "asymptotic"
};

// Largest p = q = 1/2 discrimination floor over admissible pairs.
EstimationFloor MinimaxErrorFloor(const EstimationInstance& inst, std::size_t n, AccessMode mode,
                                  Pairing pairing = Pairing::kEconomical, const BoundOptions& opts = {});

struct EstimationQueryResult {
  QueryBoundResult result;
  double theta = 0.0;
  double theta_prime = 0.0;
  std::size_t pairs_evaluated = 0;
  std::string formula;
};

// Largest discrimination query lower bound over admissible pairs at p = q = 1/2.
EstimationQueryResult EstQueryLower(const EstimationInstance& inst, AccessMode mode,
                                    Pairing pairing = Pairing::kEconomical, const BoundOptions& opts = {});

enum class ScalingKind { kSqlCapped, kHeisenbergPossible, kIndeterminate };
std::string_view ScalingKindName(ScalingKind k);

struct ScalingPoint {
  double theta = 0.0;
  bool skipped = false;
  bool sql_feasible = false;
  double sql_value = 0.0;      // inf_H a_theta subject to V^dag M_H = 0, +inf if infeasible
  double b_min = 0.0;          // inf_H b_theta
  double sqrt_ab = 0.0;        // sqrt(a b) at the b-minimizing witness
  std::string warning;
};

struct ScalingClassification {
  ScalingKind kind = ScalingKind::kIndeterminate;
  double sql_denominator = 0.0;  // grid minimum; +inf when infeasible somewhere
  bool grid_approximate = true;
  bool degenerate = false;       // denominator zero: bounds vacuous
  double heis_coefficient = 0.0;
  double heis_coefficient_adaptive = 0.0;
  std::vector<ScalingPoint> points;
};

ScalingClassification ClassifyScaling(const ChannelFamily& fam, const std::vector<double>& grid,
                                      const BoundOptions& opts = {});

// Leading-order floor from (Delta^2 / 4) * FisherBound(n), Delta = PairSeparation().
EstimationFloor FisherMinimaxFloor(const EstimationInstance& inst, std::size_t n, AccessMode mode,
                                   const BoundOptions& opts = {});

}  // namespace qbound

#endif  // QBOUND_ESTIMATION_HPP_
