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

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "qbound/channel.hpp"
#include "qbound/error.hpp"
#include "qbound/random.hpp"

namespace qbound {
namespace {

std::vector<double> P(std::initializer_list<double> v) { return v; }

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidInput;
}

// Reference Choi built directly from its definition sum_ij |i><j| (x) N(|i><j|).
ComplexMatrix ChoiByDefinition(const KrausChannel& ch) {
  const auto din = static_cast<Eigen::Index>(ch.d_in()), dout = static_cast<Eigen::Index>(ch.d_out());
  ComplexMatrix j = ComplexMatrix::Zero(din * dout, din * dout);
  for (Eigen::Index a = 0; a < din; ++a) {
    for (Eigen::Index b = 0; b < din; ++b) {
      ComplexMatrix eab = ComplexMatrix::Zero(din, din);
      eab(a, b) = 1.0;
      j.block(a * dout, b * dout, dout, dout) = ch.Apply(eab);
    }
  }
  return j;
}

Eigen::VectorXd SortedEigenvalues(const ComplexMatrix& h) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues().real();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

TEST(KrausChannel, ValidatesCptp) {
  EXPECT_EQ(CodeOf([] { KrausChannel(2, 2, {2.0 * Identity(2)}); }), ErrorCode::kNotCPTP);
  EXPECT_EQ(CodeOf([] { KrausChannel(2, 2, {Identity(3)}); }), ErrorCode::kShapeError);
}

TEST(BuiltinChannel, Conventions) {
  const KrausChannel dep0 = BuiltinChannel("depolarizing", P({0.0}));
  EXPECT_LE((ChoiOfChannel(dep0).matrix - ChoiOfChannel(BuiltinChannel("identity")).matrix).norm(), 1e-12);
  const KrausChannel z = BuiltinChannel("dephasing", P({1.0}));
  random::Rng rng(1);
  const ComplexMatrix rho = random::RandomDensity(2, rng);
  EXPECT_LE((z.Apply(rho) - pauli::Z() * rho * pauli::Z()).norm(), 1e-12);
  const KrausChannel ad = BuiltinChannel("amplitude_damping", P({0.1}));
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  for (const auto& k : ad.kraus()) s += k.adjoint() * k;
  EXPECT_LE((s - Identity(2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(CodeOf([] { BuiltinChannel("nope"); }), ErrorCode::kUnknownChannel);
  EXPECT_EQ(CodeOf([] { BuiltinChannel("dephasing", P({1.5})); }), ErrorCode::kInvalidParam);
  EXPECT_EQ(CodeOf([] { BuiltinChannel("unitary_given", P({1, 0, 1, 0, 0, 0, 1, 0})); }), ErrorCode::kInvalidParam);
  const KrausChannel ug = BuiltinChannel("unitary_given", P({0, 0, 1, 0, 1, 0, 0, 0}));
  EXPECT_LE((ug.kraus()[0] - pauli::X()).norm(), 1e-15);
}

TEST(Choi, Examples) {
  const ChoiOperator id = ChoiOfChannel(BuiltinChannel("identity"));
  const ComplexVector g = MaxEntangledVector(2);
  EXPECT_LE((id.matrix - g * g.adjoint()).norm(), 1e-12);
  EXPECT_NEAR(id.matrix.trace().real(), 2.0, 1e-12);
  const ChoiOperator full = ChoiOfChannel(BuiltinChannel("depolarizing", P({1.0})));
  EXPECT_LE((full.matrix - Identity(4) / 2.0).norm(), 1e-12);
  const Eigen::VectorXd ev = SortedEigenvalues(ChoiOfChannel(BuiltinChannel("dephasing", P({0.3}))).matrix);
  EXPECT_NEAR(ev(3), 1.4, 1e-10);
  EXPECT_NEAR(ev(2), 0.6, 1e-10);
  EXPECT_NEAR(ev(1), 0.0, 1e-10);
}

TEST(Choi, MatchesDefinitionOnRandomChannels) {
  random::Rng rng(2);
  for (std::size_t d : {2, 3}) {
    const KrausChannel ch = random::RandomChannel(d, d, 3, rng);
    EXPECT_LE((ChoiOfChannel(ch).matrix - ChoiByDefinition(ch)).norm(), 1e-10);
  }
}

TEST(CanonicalKraus, ExamplesAndRoundTrip) {
  const KrausChannel c = CanonicalKraus(ChoiOfChannel(BuiltinChannel("identity")));
  ASSERT_EQ(c.size(), 4u);
  int nonzero = 0;
  for (const auto& k : c.kraus()) {
    if (k.norm() > 1e-9) {
      ++nonzero;
      // Proportional to I up to phase.
      EXPECT_LE((k - k(0, 0) * Identity(2)).norm(), 1e-10);
    }
  }
  EXPECT_EQ(nonzero, 1);

  const KrausChannel dep = CanonicalKraus(ChoiOfChannel(BuiltinChannel("dephasing", P({0.3}))));
  std::vector<double> hs;
  for (const auto& k : dep.kraus()) hs.push_back(k.squaredNorm());
  std::sort(hs.rbegin(), hs.rend());
  EXPECT_NEAR(hs[0], 2 * 0.7, 1e-10);
  EXPECT_NEAR(hs[1], 2 * 0.3, 1e-10);
  EXPECT_NEAR(hs[2], 0.0, 1e-12);

  random::Rng rng(3);
  for (std::size_t d : {2, 3}) {
    const KrausChannel ch = random::RandomChannel(d, d, d, rng);
    const ChoiOperator j = ChoiOfChannel(ch);
    const KrausChannel canon = CanonicalKraus(j);
    EXPECT_EQ(canon.size(), d * d);
    EXPECT_LE((ChoiOfChannel(canon).matrix - j.matrix).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(IsometricExtension, PropertiesAndErrors) {
  EXPECT_EQ(CodeOf([] { MakeIsometricExtension(BuiltinChannel("identity")); }), ErrorCode::kKrausCountMismatch);
  const IsometricExtension v = MakeIsometricExtension(BuiltinChannel("identity").Padded(4));
  EXPECT_LE((v.v.adjoint() * v.v - Identity(2)).norm(), 1e-12);
  EXPECT_EQ(v.d_env, 4u);

  random::Rng rng(4);
  const KrausChannel ch = CanonicalKraus(ChoiOfChannel(random::RandomChannel(2, 3, 2, rng)));
  const IsometricExtension iso = MakeIsometricExtension(ch);
  EXPECT_LE((iso.v.adjoint() * iso.v - Identity(2)).norm(), 1e-10);
  const ComplexMatrix rho = random::RandomDensity(2, rng);
  const ComplexMatrix out = PartialTraceFirst(iso.v * rho * iso.v.adjoint(), iso.d_env, 3);
  EXPECT_LE((out - ch.Apply(rho)).norm(), 1e-10);
}

TEST(FamilyIsometry, AnalyticDerivatives) {
  const ChannelFamily rz = BuiltinFamily("rz");
  const FamilyIsometry fr = FamilyIsometryAndDerivative(rz, 0.4);
  EXPECT_LE((fr.dv - Kron(ComplexMatrix::Identity(4, 4), Complex(0, -0.5) * pauli::Z()) * fr.iso.v).norm(), 1e-12);

  const auto dk = BuiltinFamily("dephasing").DKrausAt(0.25);
  EXPECT_LE((dk[0] + (1.0 / (2 * std::sqrt(0.75))) * Identity(2)).norm(), 1e-12);
  EXPECT_LE((dk[1] - (1.0 / (2 * std::sqrt(0.25))) * pauli::Z()).norm(), 1e-12);

  // Central difference of V for each builtin family.
  for (const auto& [name, th] : std::vector<std::pair<std::string, double>>{
           {"rz", 0.4}, {"dephasing", 0.25}, {"amplitude_damping", 0.1}, {"depolarizing", 0.3}}) {
    const ChannelFamily fam = BuiltinFamily(name);
    const double h = 1e-5;
    const FamilyIsometry f0 = FamilyIsometryAndDerivative(fam, th);
    const ComplexMatrix fd = (FamilyIsometryAndDerivative(fam, th + h).iso.v -
                              FamilyIsometryAndDerivative(fam, th - h).iso.v) /
                             (2 * h);
    EXPECT_LE((f0.dv - fd).norm(), 1e-6 * f0.dv.norm()) << name;
  }
  EXPECT_EQ(CodeOf([&] { FamilyIsometryAndDerivative(rz, 4.0); }), ErrorCode::kOutOfDomain);
}

TEST(ChannelFamily, ConstantAndCompose) {
  const ChannelFamily c = BuiltinFamily("constant", P({0.3}));
  for (const auto& d : c.DKrausAt(0.5)) EXPECT_EQ(d.norm(), 0.0);
  random::Rng rng(5);
  const KrausChannel pre = random::RandomChannel(2, 2, 2, rng);
  const ChannelFamily comp = ComposeFamily(BuiltinFamily("rz"), pre, BuiltinChannel("identity"));
  EXPECT_EQ(comp.kraus_count(), 2u);
  const ComplexMatrix rho = random::RandomDensity(2, rng);
  const ComplexMatrix u = RzMatrix(0.7);
  EXPECT_LE((comp.KrausAt(0.7).Apply(rho) - u * pre.Apply(rho) * u.adjoint()).norm(), 1e-12);
}

TEST(KrausChannel, TensorAndReference) {
  random::Rng rng(6);
  const KrausChannel a = random::RandomChannel(2, 2, 2, rng), b = random::RandomChannel(2, 2, 2, rng);
  const ComplexMatrix r = random::RandomDensity(2, rng), s = random::RandomDensity(2, rng);
  EXPECT_LE((a.Tensor(b).Apply(Kron(r, s)) - Kron(a.Apply(r), b.Apply(s))).norm(), 1e-12);
  EXPECT_LE((a.ApplyWithReference(Kron(r, s), 2) - Kron(r, a.Apply(s))).norm(), 1e-12);
}

}  // namespace
}  // namespace qbound
