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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qbound/channel_metrics.hpp"
#include "qbound/discrimination.hpp"
#include "qbound/error.hpp"
#include "qbound/estimation.hpp"
#include "qbound/oracle.hpp"
#include "qbound/random.hpp"

namespace qbound {
namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail: " << what << "] ";
    }
  }
};

KrausChannel Rz(double t) { return BuiltinChannel("rz", std::vector<double>{t}); }
KrausChannel Id() { return BuiltinChannel("identity"); }

ComplexMatrix SmallUnitary(double scale, random::Rng& rng) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(random::RandomHermitian(2, rng));
  const RealVector phases = es.eigenvalues() * scale;
  ComplexVector d(2);
  for (Eigen::Index k = 0; k < 2; ++k) d(k) = std::polar(1.0, phases(k));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

// A random channel and the same channel followed by a small random unitary.
std::pair<KrausChannel, KrausChannel> NearbyPair(double scale, random::Rng& rng) {
  const KrausChannel a = random::RandomChannel(2, 2, 2, rng);
  return {a, a.Then(KrausChannel(2, 2, {SmallUnitary(scale, rng)}))};
}

ChannelFamily RandomFisherFamily(int k, random::Rng& rng) {
  static const char* kNames[] = {"rz", "dephasing", "amplitude_damping"};
  const ChannelFamily base = BuiltinFamily(kNames[k % 3]);
  const std::size_t pre_kraus = base.kraus_count() == 1 ? 4 : 2;
  return ComposeFamily(base, random::RandomChannel(2, 2, pre_kraus, rng),
                       KrausChannel(2, 2, {random::HaarUnitary(2, rng)}));
}

double FamilyTheta(const ChannelFamily& fam, random::Rng& rng) {
  std::uniform_real_distribution<double> u(0.15, 0.85);
  return fam.theta_lo() + u(rng) * (fam.theta_hi() - fam.theta_lo());
}

// 1. Root fidelity against cos(t/2) and the random-probe oracle.
void Criterion1(Outcome& o) {
  oracle::ProbeOptions probe;
  probe.samples = 10000;
  double worst = 0;
  for (double t : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
    const double sdp = RootFidelityChannels(ChannelPair::FromChannels(Id(), Rz(t))).value;
    const double pr = oracle::ProbeRootFidelityMin(Id(), Rz(t), probe).value;
    worst = std::max({worst, std::abs(sdp - pr), std::abs(sdp - std::cos(t / 2))});
  }
  const double at_pi = RootFidelityChannels(ChannelPair::FromChannels(Id(), Rz(kPi))).value;
  o.Require(worst <= 1e-4, "deviation above 1e-4");
  o.Require(at_pi <= 1e-6, "root fidelity at pi above 1e-6");
  o.detail << "max |sdp - probe|, |sdp - cos| = " << worst << "; at pi = " << at_pi;
}

// 2. Bures from fidelity and parallel n = 1.
void Criterion2(Outcome& o, random::Rng& rng) {
  double worst_rel = 0, worst_par = 0;
  for (int k = 0; k < 20; ++k) {
    const ChannelPair pair =
        ChannelPair::FromChannels(random::RandomChannel(2, 2, 2, rng), random::RandomChannel(2, 2, 2, rng));
    const double f = RootFidelityChannels(pair).value;
    const double b = BuresSqChannels(pair).value;
    const double par = ParallelBuresBound(pair, 1).value;
    worst_rel = std::max(worst_rel, std::abs(b - 2 * (1 - f)));
    worst_par = std::max(worst_par, std::abs(par - b));
  }
  o.Require(worst_rel <= 1e-6, "d_B^2 vs 2(1 - sqrt F)");
  o.Require(worst_par <= 1e-6, "parallel n=1 vs d_B^2");
  o.detail << "20 pairs; max |d_B^2 - 2(1-sqrtF)| = " << worst_rel << ", max |par(1) - d_B^2| = " << worst_par;
}

// 3. Parallel <= adaptive for Bures and Fisher bounds.
void Criterion3(Outcome& o, random::Rng& rng) {
  double min_bures = 1e300, min_fisher = 1e300;
  for (int k = 0; k < 10; ++k) {
    const ChannelPair pair =
        ChannelPair::FromChannels(random::RandomChannel(2, 2, 2, rng), random::RandomChannel(2, 2, 2, rng));
    const BoundReport sql = BuresSqlDenominator(pair);
    const ChannelFamily fam = RandomFisherFamily(k, rng);
    const double theta = FamilyTheta(fam, rng);
    const BoundReport fsql = FisherSqlDenominator(fam, theta);
    for (std::size_t n = 1; n <= 10; ++n) {
      const double pb = ParallelBuresBound(pair, n).value, ab = AdaptiveBuresBound(pair, n, {}, sql).value;
      const double pf = ParallelFisherBound(fam, theta, n).value;
      const double af = AdaptiveFisherBound(fam, theta, n, {}, fsql).value;
      min_bures = std::min(min_bures, ab - pb);
      min_fisher = std::min(min_fisher, (af - pf) / std::max(1.0, pf));
    }
  }
  o.Require(min_bures >= -1e-6, "Bures ordering");
  o.Require(min_fisher >= -1e-6, "Fisher ordering");
  o.detail << "10 pairs x n=1..10; min(adaptive - parallel): Bures " << min_bures << ", Fisher (relative) "
           << min_fisher;
}

// 4. Error floor below the exact parallel error from the diamond norm.
void Criterion4(Outcome& o, random::Rng& rng) {
  double margin = 1e300;
  int nonvacuous = 0;
  for (int k = 0; k < 10; ++k) {
    std::pair<KrausChannel, KrausChannel> chs =
        k % 2 == 0 ? NearbyPair(0.4, rng)
                   : std::pair<KrausChannel, KrausChannel>{random::RandomChannel(2, 2, 2, rng),
                                                           random::RandomChannel(2, 2, 2, rng)};
    const ChannelPair pair = ChannelPair::FromChannels(chs.first, chs.second);
    for (std::size_t n : {1, 2}) {
      const double floor = ErrorProbFloor(pair, n, 0.5, AccessMode::kParallel);
      const double exact = oracle::DiamondNormExact(0.5, chs.first, 0.5, chs.second, n).p_error;
      margin = std::min(margin, exact - floor);
      if (floor > 1e-6) ++nonvacuous;
    }
  }
  o.Require(margin >= -1e-6, "floor above exact error");
  o.detail << "20 (pair, n) cases, " << nonvacuous << " with a positive floor; min(exact - floor) = " << margin;
}

// 5. Channel Fisher SDP against analytic values and the probe oracle.
void Criterion5(Outcome& o) {
  oracle::ProbeOptions probe;
  const double dep = SldFisherChannel(BuiltinFamily("dephasing"), 0.25).value;
  const double dep_probe = oracle::ProbeFisherMax(BuiltinFamily("dephasing"), 0.25, probe).value;
  const double rz = SldFisherChannel(BuiltinFamily("rz"), 0.4).value;
  const double ad = SldFisherChannel(BuiltinFamily("amplitude_damping"), 0.1).value;
  const double ad_probe = oracle::ProbeFisherMax(BuiltinFamily("amplitude_damping"), 0.1, probe).value;
  o.Require(std::abs(dep - 16.0 / 3.0) <= 1e-3 * 16.0 / 3.0, "dephasing vs 16/3");
  o.Require(dep >= dep_probe - 1e-6, "dephasing below probe");
  o.Require(std::abs(rz - 1.0) <= 1e-3, "Rz vs 1");
  o.Require(std::abs(ad - ad_probe) <= 1e-3 * ad_probe, "amplitude damping vs probe");
  o.detail << "dephasing " << dep << " (probe " << dep_probe << "), Rz " << rz << ", amplitude damping " << ad
           << " (probe " << ad_probe << ")";
}

// 6. Bures-Fisher expansion error shrinks with delta.
void Criterion6(Outcome& o) {
  const ChannelFamily fam = BuiltinFamily("dephasing");
  const double fisher = SldFisherChannel(fam, 0.25).value;
  const oracle::OracleReport fd = oracle::FiniteDiffBuresFisher(fam, 0.25, {1e-2, 1e-3});
  const double e2 = std::abs(fd.sequence[0] - fisher), e3 = std::abs(fd.sequence[1] - fisher);
  o.Require(e3 <= 0.2 * e2, "error ratio above 0.2");
  o.detail << "error at 1e-2 = " << e2 << ", at 1e-3 = " << e3 << ", ratio " << e3 / e2;
}

// 7. Quadratic lemma against an exhaustive scan.
void Criterion7(Outcome& o, random::Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0;
  for (int k = 0; k < 1000; ++k) {
    const double a = std::pow(10.0, -2 + 3 * u(rng));
    const double b = u(rng) < 0.15 ? 0.0 : a * u(rng);
    const double c = std::pow(10.0, -1 + 3 * u(rng));
    for (AccessMode mode : {AccessMode::kParallel, AccessMode::kAdaptive}) {
      const double bb = mode == AccessMode::kAdaptive ? std::sqrt(a * b) : b;
      std::size_t scan = 1;
      while (scan * (a + (scan - 1.0) * bb) < c) ++scan;
      if (QuadraticMinN(a, b, c, mode) != scan) ++mismatches;
    }
  }
  o.Require(mismatches == 0, "mismatch");
  o.detail << "2000 (a, b, c, mode) cases, mismatches = " << mismatches;
}

// 8. Binary search against a linear scan of the same predicate.
void Criterion8(Outcome& o, random::Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0, mismatches = 0, probe_violations = 0;
  std::ostringstream values;
  for (int k = 0; k < 10; ++k) {
    const auto [a, b] = NearbyPair(0.3 + 0.5 * u(rng), rng);
    const DiscriminationInstance inst{ChannelPair::FromChannels(a, b), 0.3 + 0.4 * u(rng), 0.02 + 0.1 * u(rng)};
    const double thr = inst.Threshold();
    const std::optional<BoundReport> sql = BuresSqlDenominator(inst.pair);
    for (AccessMode mode : {AccessMode::kParallel, AccessMode::kAdaptive}) {
      const QueryBoundResult r = mode == AccessMode::kParallel ? BinarySearchParallel(inst) : BinarySearchAdaptive(inst);
      if (r.method != QueryMethod::kBinarySearch || !r.diagnostics.n_max) {
        o.Require(false, "instance did not reach the search");
        continue;
      }
      const std::size_t n_max = *r.diagnostics.n_max;
      const auto pred = [&](std::size_t n) {
        const double v = mode == AccessMode::kParallel ? ParallelBuresBound(inst.pair, n).value
                                                        : AdaptiveBuresBound(inst.pair, n, {}, sql).value;
        return v + kCeilingNudge >= thr;
      };
      const std::size_t scan = LinearScanFirst(1, n_max, pred).n;
      const auto allowed = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n_max)))) + 1;
      ++checked;
      if (r.lower_bound.count() != scan) ++mismatches;
      if (r.diagnostics.probes.size() > allowed) ++probe_violations;
      values << r.lower_bound.count() << "/" << n_max << " ";
    }
  }
  o.Require(mismatches == 0, "binary search differs from scan");
  o.Require(probe_violations == 0, "too many probes");
  o.detail << checked << " searches, mismatches = " << mismatches << ", probe-count violations = "
           << probe_violations << "; n*/n_max: " << values.str();
}

// 9. Perfect two-query discrimination of I and Rz(pi/2).
void Criterion9(Outcome& o) {
  const double norm = oracle::DiamondNormExact(0.5, Id(), 0.5, Rz(kPi / 2), 2).norm;
  const DiscriminationInstance inst{ChannelPair::FromChannels(Id(), Rz(kPi / 2)), 0.5, 0.0};
  const double par = QueryLowerBound(inst, AccessMode::kParallel).lower_bound.AsDouble();
  const double ada = QueryLowerBound(inst, AccessMode::kAdaptive).lower_bound.AsDouble();
  o.Require(std::abs(norm - 1.0) <= 1e-6, "diamond norm at n=2");
  o.Require(par >= 1 && par <= 2 && ada >= 1 && ada <= 2, "query bounds outside [1, 2]");
  o.detail << "diamond(n=2) = " << norm << ", parallel bound " << par << ", adaptive bound " << ada;
}

// 10. Scaling classification.
void Criterion10(Outcome& o) {
  const ChannelFamily rz = BuiltinFamily("rz");
  const ScalingClassification c_rz = ClassifyScaling(rz, UniformGrid(rz));
  double lo = 1e300, hi = 0;
  for (std::size_t n = 2; n <= 8; ++n) {
    const double ratio = ParallelFisherBound(rz, 0.4, n).value / double(n * n);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  o.Require(c_rz.kind == ScalingKind::kHeisenbergPossible, "Rz not Heisenberg_possible");
  o.Require(hi / lo <= 1.2, "Rz ratio band");
  o.detail << "Rz " << ScalingKindName(c_rz.kind) << " (band " << hi / lo << ")";
  for (const char* name : {"dephasing", "amplitude_damping"}) {
    const ChannelFamily fam = BuiltinFamily(name);
    const ScalingClassification c = ClassifyScaling(fam, UniformGrid(fam));
    o.Require(c.kind == ScalingKind::kSqlCapped && std::isfinite(c.sql_denominator),
              std::string(name) + " not SQL_capped");
    o.detail << "; " << name << " " << ScalingKindName(c.kind) << " (denominator " << c.sql_denominator << ")";
  }
}

// 11. Estimation reduction against an exhaustive pair scan.
void Criterion11(Outcome& o) {
  const ChannelFamily con = BuiltinFamily("constant");
  for (double eps : {0.05, 0.25, 0.45}) {
    const EstimationInstance inst{con, 0.05, eps, UniformGrid(con)};
    o.Require(EstQueryLower(inst, AccessMode::kParallel).result.lower_bound.is_infinite(),
              "constant family not Infinite");
  }
  const ChannelFamily rz = BuiltinFamily("rz");
  const EstimationInstance inst{rz, kPi / 16, 0.05, UniformGrid(rz)};
  const EstimationQueryResult r = EstQueryLower(inst, AccessMode::kParallel);

  // Independent scan: pairs rebuilt from the grid, each bound by a linear scan from n = 1.
  const double sep = 2 * inst.delta * (1 + 1e-6), thr = 1 - inst.eps * (1 - inst.eps) / 0.25;
  double best = 0;
  int pairs = 0;
  for (double t : inst.grid) {
    if (!(t + sep < rz.theta_hi())) continue;
    ++pairs;
    const ChannelPair pair = ChannelPair::FromChannels(rz.KrausAt(t), rz.KrausAt(t + sep));
    const double f = RootFidelityChannels(pair).value;
    double bound = 1;
    if (!IsTrivialCase(0.5, inst.eps, f)) {
      const NMaxResult nm = NMaxFromFidelity(f, 0.5, inst.eps);
      std::size_t n = 1;
      while (n < *nm.n_max && ParallelBuresBound(pair, n).value + kCeilingNudge < thr) ++n;
      bound = double(n);
    }
    best = std::max(best, bound);
  }
  const double got = r.result.lower_bound.AsDouble();
  o.Require(std::isfinite(got) && got == best, "Rz bound differs from pair scan");
  o.detail << "constant family Infinite; Rz bound " << got << " vs scan " << best << " over " << pairs << " pairs";
}

// 12. Trivial cases.
void Criterion12(Outcome& o) {
  const ChannelPair pair = ChannelPair::FromChannels(Id(), Rz(0.3));
  int trivial = 0, total = 0;
  for (const auto& [p, eps] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {0.3, 0.3}, {0.8, 0.25}, {0.6, 0.9}}) {
    for (AccessMode mode : {AccessMode::kParallel, AccessMode::kAdaptive}) {
      ++total;
      if (QueryLowerBound({pair, p, eps}, mode).lower_bound == QueryCount::Trivial()) ++trivial;
    }
  }
  const ChannelPair orth = ChannelPair::FromChannels(Id(), Rz(kPi));
  for (double eps : {0.0, 0.1}) {
    for (AccessMode mode : {AccessMode::kParallel, AccessMode::kAdaptive}) {
      ++total;
      if (QueryLowerBound({orth, 0.5, eps}, mode).lower_bound == QueryCount::Trivial()) ++trivial;
    }
  }
  o.Require(trivial == total, "non-trivial result");
  o.detail << trivial << "/" << total << " cases returned Trivial(1)";
}

}  // namespace
}  // namespace qbound

int main() {
  using namespace qbound;
  random::Rng rng(random::SeedFromEnv(20260101));
  const std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria = {
      {1, [](Outcome& o) { Criterion1(o); }},
      {2, [&](Outcome& o) { Criterion2(o, rng); }},
      {3, [&](Outcome& o) { Criterion3(o, rng); }},
      {4, [&](Outcome& o) { Criterion4(o, rng); }},
      {5, [](Outcome& o) { Criterion5(o); }},
      {6, [](Outcome& o) { Criterion6(o); }},
      {7, [&](Outcome& o) { Criterion7(o, rng); }},
      {8, [&](Outcome& o) { Criterion8(o, rng); }},
      {9, [](Outcome& o) { Criterion9(o); }},
      {10, [](Outcome& o) { Criterion10(o); }},
      {11, [](Outcome& o) { Criterion11(o); }},
      {12, [](Outcome& o) { Criterion12(o); }},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %d: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
