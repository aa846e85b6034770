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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qbound/error.hpp"
#include "qbound/estimation.hpp"

namespace qbound {
namespace {

constexpr double kPi = std::numbers::pi;

EstimationInstance Make(const char* fam, double delta, double eps, std::size_t points) {
  const ChannelFamily f = BuiltinFamily(fam);
  return {f, delta, eps, UniformGrid(f, points)};
}

TEST(Grid, InteriorUniform) {
  const std::vector<double> g = UniformGrid(BuiltinFamily("dephasing"), 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g[0], 0.25);
  EXPECT_DOUBLE_EQ(g[1], 0.5);
  EXPECT_DOUBLE_EQ(g[2], 0.75);
  EXPECT_EQ(UniformGrid(BuiltinFamily("rz")).size(), kDefaultGridPoints);
}

TEST(Pairs, EconomicalAndAll) {
  const EstimationInstance inst = Make("dephasing", 0.1, 0.1, 5);
  for (const auto& [t, tp] : AdmissiblePairs(inst)) {
    EXPECT_NEAR(tp - t, inst.PairSeparation(), 1e-15);
    EXPECT_LT(tp, 1.0);
  }
  for (const auto& [t, tp] : AdmissiblePairs(inst, Pairing::kAllGridPairs)) {
    EXPECT_GT(std::abs(tp - t), 2 * inst.delta);
  }
  const EstimationInstance wide = Make("dephasing", 0.6, 0.1, 5);
  EXPECT_THROW(MinimaxErrorFloor(wide, 1, AccessMode::kParallel), Error);
  EXPECT_THROW(Make("dephasing", 0.0, 0.1, 5).Validate(), Error);
  EXPECT_THROW(Make("dephasing", 0.1, 0.0, 5).Validate(), Error);
}

TEST(MinimaxErrorFloor, ConstantAndRz) {
  const EstimationInstance c = Make("constant", 0.05, 0.1, 5);
  EXPECT_NEAR(MinimaxErrorFloor(c, 3, AccessMode::kParallel).value, 0.5, 1e-6);

  const EstimationInstance rz = Make("rz", kPi / 8, 0.1, 5);
  const EstimationFloor f1 = MinimaxErrorFloor(rz, 1, AccessMode::kParallel);
  // Every Rz pair is unitarily equivalent to I versus Rz(separation).
  const double sep = rz.PairSeparation();
  const ChannelPair ref = ChannelPair::FromChannels(BuiltinChannel("identity"),
                                                    BuiltinChannel("rz", std::vector<double>{sep}));
  EXPECT_NEAR(f1.value, ErrorProbFloor(ref, 1, 0.5, AccessMode::kParallel), 1e-6);
  EXPECT_EQ(f1.label, "reduction");
  double prev = f1.value;
  for (std::size_t n : {2, 3, 4}) {
    const double v = MinimaxErrorFloor(rz, n, AccessMode::kParallel).value;
    EXPECT_LE(v, prev + 1e-9);
    prev = v;
  }
}

TEST(EstQueryLower, Examples) {
  EXPECT_TRUE(EstQueryLower(Make("constant", 0.05, 0.1, 5), AccessMode::kParallel).result.lower_bound.is_infinite());
  EXPECT_EQ(EstQueryLower(Make("rz", kPi / 16, 0.5, 5), AccessMode::kParallel).result.lower_bound.AsDouble(), 1.0);

  const EstimationInstance rz = Make("rz", kPi / 16, 0.05, 5);
  const EstimationQueryResult r = EstQueryLower(rz, AccessMode::kParallel);
  double best = 0;
  for (const auto& [t, tp] : AdmissiblePairs(rz)) {
    const DiscriminationInstance d{FamilyPair(rz.fam, t, tp), 0.5, rz.eps};
    best = std::max(best, QueryLowerBound(d, AccessMode::kParallel).lower_bound.AsDouble());
  }
  EXPECT_EQ(r.result.lower_bound.AsDouble(), best);
  EXPECT_TRUE(std::isfinite(best));
}

TEST(ClassifyScaling, Examples) {
  const std::vector<double> g{0.3, 0.6};
  const ScalingClassification rz = ClassifyScaling(BuiltinFamily("rz"), g);
  EXPECT_EQ(rz.kind, ScalingKind::kHeisenbergPossible);
  EXPECT_TRUE(std::isinf(rz.sql_denominator));
  EXPECT_GT(rz.heis_coefficient, 0.0);

  const ScalingClassification dep = ClassifyScaling(BuiltinFamily("dephasing"), g);
  EXPECT_EQ(dep.kind, ScalingKind::kSqlCapped);
  EXPECT_TRUE(std::isfinite(dep.sql_denominator));
  for (const auto& pt : dep.points) {
    EXPECT_GE(pt.sql_value, SldFisherChannel(BuiltinFamily("dephasing"), pt.theta).value / 4 - 1e-6);
  }

  const ScalingClassification con = ClassifyScaling(BuiltinFamily("constant"), g);
  EXPECT_EQ(con.kind, ScalingKind::kSqlCapped);
  EXPECT_TRUE(con.degenerate);
  EXPECT_NEAR(con.sql_denominator, 0.0, 1e-9);
}

TEST(FisherMinimaxFloor, ConsistencyWithReduction) {
  EXPECT_NEAR(FisherMinimaxFloor(Make("constant", 0.01, 0.1, 3), 1, AccessMode::kParallel).value, 0.5, 1e-6);
  const EstimationInstance rz = Make("rz", 1e-2, 0.1, 3);
  const EstimationFloor fisher = FisherMinimaxFloor(rz, 1, AccessMode::kParallel);
  const EstimationFloor red = MinimaxErrorFloor(rz, 1, AccessMode::kParallel);
  EXPECT_EQ(fisher.label, "asymptotic");
  EXPECT_NEAR(fisher.value, red.value, 0.05 * red.value);

  // Dephasing: the Fisher bound grows linearly, so the floor decreases with n.
  const EstimationInstance dep = Make("dephasing", 1e-2, 0.1, 3);
  EXPECT_GT(FisherMinimaxFloor(dep, 1, AccessMode::kParallel).value,
            FisherMinimaxFloor(dep, 8, AccessMode::kParallel).value);
}

}  // namespace
}  // namespace qbound
