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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qbound/channel_metrics.hpp"
#include "qbound/error.hpp"
#include "qbound/random.hpp"

namespace qbound {
namespace {

KrausChannel Ch(const char* name, double p) { return BuiltinChannel(name, std::vector<double>{p}); }

ChannelPair IdentityVs(const KrausChannel& ch) {
  return ChannelPair::FromChannels(BuiltinChannel("identity"), ch);
}

// min over reduced input states sigma of sum_k |Tr(sigma K_k)|^2, by a dense grid on the Bloch ball.
double IdentityOverlapByGrid(const KrausChannel& ch) {
  double best = 1e300;
  const int steps = 60;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double th = std::numbers::pi * i / steps, ph = 2 * std::numbers::pi * j / steps;
      const ComplexMatrix s = (Identity(2) + std::sin(th) * std::cos(ph) * pauli::X() +
                               std::sin(th) * std::sin(ph) * pauli::Y() + std::cos(th) * pauli::Z()) /
                              2.0;
      double total = 0;
      for (const auto& k : ch.kraus()) total += std::norm((s * k).trace());
      best = std::min(best, total);
    }
  }
  return std::sqrt(best);
}

TEST(ChannelPair, Validation) {
  EXPECT_THROW(ChannelPair::FromChannels(BuiltinChannel("identity"),
                                         BuiltinChannel("identity", std::vector<double>{3})),
               Error);
  const ChannelPair p = IdentityVs(Ch("dephasing", 0.3));
  EXPECT_EQ(p.d_env(), 4u);
  EXPECT_EQ(p.d_in(), 2u);
}

TEST(RootFidelity, UnitaryAndNoisyExamples) {
  for (double th : {0.3, std::numbers::pi / 2, 2.5}) {
    const BoundReport r = RootFidelityChannels(IdentityVs(Ch("rz", th)));
    EXPECT_NEAR(r.value, std::cos(th / 2), 1e-7) << th;
    EXPECT_EQ(r.theorem_tag, "root_fidelity_sdp");
  }
  EXPECT_NEAR(RootFidelityChannels(IdentityVs(Ch("rz", std::numbers::pi))).value, 0.0, 1e-6);
  for (double q : {0.1, 0.3}) {
    EXPECT_NEAR(RootFidelityChannels(IdentityVs(Ch("dephasing", q))).value, std::sqrt(1 - q), 1e-7);
  }
  const KrausChannel ad = Ch("amplitude_damping", 0.2);
  const double grid = IdentityOverlapByGrid(ad);
  EXPECT_NEAR(RootFidelityChannels(IdentityVs(ad)).value, grid, 1e-6);
  EXPECT_NEAR(RootFidelityChannels(IdentityVs(BuiltinChannel("identity"))).value, 1.0, 1e-9);
}

TEST(Bures, RelationsAndOrdering) {
  random::Rng rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    const KrausChannel a = random::RandomChannel(2, 2, 2, rng), b = random::RandomChannel(2, 2, 2, rng);
    const ChannelPair pair = ChannelPair::FromChannels(a, b);
    const double f = RootFidelityChannels(pair).value;
    const BoundReport b1 = BuresSqChannels(pair);
    EXPECT_NEAR(b1.value, 2 * (1 - f), 1e-6);
    EXPECT_NEAR(ParallelBuresBound(pair, 1).value, b1.value, 1e-6);
    double prev = b1.value;
    for (std::size_t n : {2, 3, 5}) {
      const double par = ParallelBuresBound(pair, n).value;
      const double ada = AdaptiveBuresBound(pair, n).value;
      EXPECT_GE(par, prev - 1e-7);
      EXPECT_LE(par, ada + 1e-7);
      prev = par;
    }
  }
}

TEST(Bures, ParallelBoundDominatesExactUnitaryValue) {
  // n parallel uses of Rz(t) against identity have Bures^2 = 2(1 - cos(n t / 2)) while n t <= pi.
  const double t = 0.2;
  const ChannelPair pair = IdentityVs(Ch("rz", t));
  for (std::size_t n : {1, 2, 4, 8}) {
    const double exact = 2 * (1 - std::cos(n * t / 2));
    const BoundReport r = ParallelBuresBound(pair, n);
    EXPECT_GE(r.value, exact - 1e-7) << n;
    EXPECT_LE(r.value, 1.1 * exact + 1e-7) << n;
    EXPECT_EQ(r.witness.count("W"), 1u);
    EXPECT_LE(r.WitnessNorm(), 1 + 1e-9);
  }
}

TEST(Bures, SqlDenominator) {
  EXPECT_TRUE(std::isinf(BuresSqlDenominator(IdentityVs(Ch("dephasing", 0.3))).value));
  const BoundReport same = BuresSqlDenominator(IdentityVs(BuiltinChannel("identity")));
  EXPECT_NEAR(same.value, 0.0, 1e-7);
}

TEST(Contraction, Evaluation) {
  const ChannelPair same = IdentityVs(BuiltinChannel("identity"));
  const ContractionTerms t = EvaluateContraction(same, Identity(4));
  EXPECT_NEAR(t.a, 0.0, 1e-12);
  EXPECT_NEAR(t.b, 0.0, 1e-12);
  EXPECT_NEAR(t.min_re_eig, 1.0, 1e-12);
  ComplexMatrix big = 3.0 * Identity(4);
  EXPECT_NEAR(SpectralNorm(ProjectToContraction(big)), 1.0, 1e-12);
  random::Rng rng(32);
  const ComplexMatrix u = random::HaarUnitary(4, rng);
  EXPECT_LE((ProjectToContraction(u) - u).norm(), 1e-12);
}

TEST(Fisher, UnitaryAndDephasing) {
  const ChannelFamily rz = BuiltinFamily("rz");
  EXPECT_NEAR(SldFisherChannel(rz, 0.4).value, 1.0, 1e-6);
  for (std::size_t n : {2, 4}) {
    EXPECT_NEAR(ParallelFisherBound(rz, 0.4, n).value, double(n * n), 1e-5 * n * n);
    EXPECT_NEAR(AdaptiveFisherBound(rz, 0.4, n).value, double(n * n), 1e-4 * n * n);
  }
  EXPECT_TRUE(std::isinf(FisherSqlDenominator(rz, 0.4).value));

  const ChannelFamily dep = BuiltinFamily("dephasing");
  const double q = 0.25, single = 1 / (q * (1 - q));
  EXPECT_NEAR(SldFisherChannel(dep, q).value, single, 1e-5 * single);
  const BoundReport sql = FisherSqlDenominator(dep, q);
  EXPECT_NEAR(4 * sql.value, single, 1e-5 * single);
  for (std::size_t n : {2, 10}) {
    const double par = ParallelFisherBound(dep, q, n).value;
    const double ada = AdaptiveFisherBound(dep, q, n).value;
    EXPECT_NEAR(par, n * single, 1e-4 * n * single);
    EXPECT_LE(par, ada + 1e-6 * n * single);
    EXPECT_LE(ada, 4.0 * n * sql.value * (1 + 1e-6));
  }
}

TEST(Fisher, WitnessEvaluation) {
  const ChannelFamily rz = BuiltinFamily("rz");
  const FamilyIsometry fi = FamilyIsometryAndDerivative(rz, 0.1);
  // With H = 0 both terms reduce to ||dK||^2 = ||Z/2||^2.
  const FisherTerms none = EvaluateFisher(fi, ComplexMatrix::Zero(4, 4));
  EXPECT_NEAR(none.a, 0.25, 1e-12);
  EXPECT_NEAR(none.b, 0.25, 1e-12);
  const BoundReport r = SldFisherChannel(rz, 0.1);
  EXPECT_EQ(r.witness.count("H"), 1u);
  const FisherTerms at = EvaluateFisher(fi, r.witness.at("H"));
  EXPECT_NEAR(4 * at.a, r.value, 1e-9);
  EXPECT_THROW(EvaluateFisher(fi, ComplexMatrix::Zero(2, 2)), Error);
}

TEST(Fisher, OutOfDomain) {
  EXPECT_THROW(SldFisherChannel(BuiltinFamily("dephasing"), 1.5), Error);
}

}  // namespace
}  // namespace qbound
