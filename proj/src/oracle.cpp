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

#include "qbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "qbound/error.hpp"
#include "qbound/random.hpp"
#include "qbound/sdp.hpp"

namespace qbound::oracle {

namespace {

void RequireDeltas(const std::vector<double>& deltas) {
  if (deltas.empty()) throw Error(ErrorCode::kInvalidInput, "delta list is empty");
  for (double d : deltas) {
    if (!(d > 0.0 && d <= 0.1)) throw Error(ErrorCode::kInvalidInput, "deltas must lie in (0, 0.1]");
  }
}

// Least-squares fit v = limit + slope * delta.
void FitLinear(OracleReport& r) {
  const std::size_t m = r.deltas.size();
  if (m == 1) {
    r.value = r.sequence[0];
    r.slope = 0.0;
    return;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += r.deltas[i];
    sy += r.sequence[i];
    sxx += r.deltas[i] * r.deltas[i];
    sxy += r.deltas[i] * r.sequence[i];
  }
  const double md = static_cast<double>(m);
  const double den = md * sxx - sx * sx;
  r.slope = den == 0.0 ? 0.0 : (md * sxy - sx * sy) / den;
  r.value = (sy - r.slope * sx) / md;
}

ComplexVector Perturb(const ComplexVector& psi, double step, random::Rng& rng) {
  ComplexVector out = psi + step * random::HaarVector(static_cast<std::size_t>(psi.size()), rng);
  return out / out.norm();
}

// Best-of-samples followed by a shrinking random walk; `score` is maximized.
template <typename Score>
OracleReport ProbeSearch(std::size_t dim, const ProbeOptions& opts, Score score) {
  if (opts.samples == 0) throw Error(ErrorCode::kInvalidInput, "samples must be at least 1");
  random::Rng rng(opts.seed);
  OracleReport r;
  r.samples = opts.samples;
  r.seed = opts.seed;
  ComplexVector best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < opts.samples; ++s) {
    ComplexVector psi = random::HaarVector(dim, rng);
    const double v = score(psi);
    if (v > best_value) {
      best_value = v;
      best = std::move(psi);
    }
  }
  double step = 0.1;
  std::size_t fails = 0;
  for (std::size_t it = 0; it < opts.refine_steps && step > 1e-9; ++it) {
    ComplexVector psi = Perturb(best, step, rng);
    const double v = score(psi);
    ++r.iterations;
    if (v > best_value) {
      best_value = v;
      best = std::move(psi);
      fails = 0;
    } else if (++fails >= 40) {
      step *= 0.5;
      fails = 0;
    }
  }
  r.value = best_value;
  return r;
}

}  // namespace

std::string OracleReport::ToJson() const {
  nlohmann::json j;
  j["quantity"] = quantity;
  j["value"] = value;
  j["method"] = method;
  j["samples"] = samples;
  j["iterations"] = iterations;
  j["seed"] = seed;
  if (!deltas.empty()) {
    j["deltas"] = deltas;
    j["sequence"] = sequence;
    j["slope"] = slope;
  }
  return j.dump();
}

DiamondResult DiamondNormExact(double p, const KrausChannel& n1, double q, const KrausChannel& n2, std::size_t n,
                               const sdp::SolverOptions& opts) {
  if (n < 1 || n > 2) throw Error(ErrorCode::kTooLarge, "exact diamond norm supports n = 1 or 2");
  if (n1.d_in() != n2.d_in() || n1.d_out() != n2.d_out()) {
    throw Error(ErrorCode::kShapeError, "channels must share dimensions");
  }
  if (!(p >= 0.0 && q >= 0.0)) throw Error(ErrorCode::kInvalidInput, "weights must be nonnegative");
  const KrausChannel c1 = n == 1 ? n1 : n1.Tensor(n1);
  const KrausChannel c2 = n == 1 ? n2 : n2.Tensor(n2);
  const std::size_t din = c1.d_in(), dout = c1.d_out();
  if (din > kMaxDiamondInputDim || din * dout > kMaxDiamondChoiDim) {
    throw Error(ErrorCode::kTooLarge, "diamond-norm dimension cap exceeded");
  }
  const ComplexMatrix j1 = p * ChoiOfChannel(c1).matrix;
  const ComplexMatrix j2 = q * ChoiOfChannel(c2).matrix;
  const std::size_t dim = din * dout;

  sdp::Problem prob;
  const sdp::Variable q1 = prob.AddHermitian("Q1", dim);
  const sdp::Variable q2 = prob.AddHermitian("Q2", dim);
  const sdp::Variable sigma = prob.AddHermitian("sigma", din);
  prob.AddPsd(prob.Expr(q1), "Q1");
  prob.AddPsd(prob.Expr(q2), "Q2");
  prob.AddPsd(prob.Expr(sigma), "sigma");
  const ComplexMatrix id_out = Identity(dout);
  prob.AddEquality(prob.Expr(q1) + prob.Expr(q2) -
                       prob.Expr(sigma).MapLinear([&](const ComplexMatrix& s) { return Kron(s, id_out); }),
                   "Q1+Q2=sigma(x)I");
  auto trace = [](const ComplexMatrix& m) { return ComplexMatrix::Constant(1, 1, m.trace()); };
  prob.AddEquality(prob.Expr(sigma).MapLinear(trace) - sdp::AffineExpr(ComplexMatrix::Ones(1, 1)), "Tr sigma=1");
  prob.Maximize(prob.Expr(q1).RightMultiply(j1).MapLinear(trace) +
                prob.Expr(q2).RightMultiply(j2).MapLinear(trace));
  const sdp::Solution sol = sdp::Solve(prob, opts);
  if (sol.status != sdp::SolveStatus::kOptimal) {
    throw Error(ErrorCode::kSolverFailure,
                "diamond-norm SDP: " + std::string(sdp::StatusName(sol.status)) + " (" + sol.message + ")");
  }
  DiamondResult r;
  r.status = sol.status;
  r.p_success = sol.objective_value;
  r.norm = std::clamp(2.0 * r.p_success - (p + q), std::abs(p - q), p + q);
  r.p_error = 0.5 * (p + q - r.norm);
  return r;
}

void ProbeOutput(const ChannelFamily& fam, double theta, const ComplexVector& psi, ComplexMatrix& rho,
                 ComplexMatrix& drho) {
  const std::size_t dr = fam.d_in();
  const ComplexMatrix id_r = Identity(dr);
  const KrausChannel ch = fam.KrausAt(theta);
  const std::vector<ComplexMatrix> dk = fam.DKrausAt(theta);
  const std::size_t dim = dr * fam.d_out();
  rho = ComplexMatrix::Zero(dim, dim);
  drho = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < ch.size(); ++i) {
    const ComplexVector out = Kron(id_r, ch.kraus()[i]) * psi;
    const ComplexVector dout = Kron(id_r, dk[i]) * psi;
    rho += out * out.adjoint();
    const ComplexMatrix t = dout * out.adjoint();
    drho += t + t.adjoint();
  }
}

OracleReport ProbeFisherMax(const ChannelFamily& fam, double theta, const ProbeOptions& opts) {
  const std::size_t dim = fam.d_in() * fam.d_in();
  OracleReport r = ProbeSearch(dim, opts, [&](const ComplexVector& psi) {
    ComplexMatrix rho, drho;
    ProbeOutput(fam, theta, psi, rho, drho);
    return SldFisher(rho, drho, SingularPolicy::kSupport);
  });
  r.quantity = "probe_fisher_max";
  r.method = "max over Haar-random pure probes on R (x) A of the output SLD Fisher (support policy), then local random-walk refinement";
  return r;
}

OracleReport ProbeRootFidelityMin(const KrausChannel& a, const KrausChannel& b, const ProbeOptions& opts) {
  if (a.d_in() != b.d_in() || a.d_out() != b.d_out()) {
    throw Error(ErrorCode::kShapeError, "channels must share dimensions");
  }
  const std::size_t dr = a.d_in();
  OracleReport r = ProbeSearch(dr * dr, opts, [&](const ComplexVector& psi) {
    const ComplexMatrix in = psi * psi.adjoint();
    const DensityOperator ra(a.ApplyWithReference(in, dr));
    const DensityOperator rb(b.ApplyWithReference(in, dr));
    return -std::sqrt(FidelityStates(ra, rb));
  });
  r.value = -r.value;
  r.quantity = "probe_root_fidelity_min";
  r.method = "min over Haar-random pure probes on R (x) A of the output root fidelity, then local random-walk refinement";
  return r;
}

OracleReport FiniteDiffBuresFisher(const ChannelFamily& fam, double theta, const std::vector<double>& deltas,
                                   const BoundOptions& opts) {
  RequireDeltas(deltas);
  OracleReport r;
  r.quantity = "finite_diff_bures_fisher";
  r.method = "4 d_B^2(N_theta, N_theta+delta) / delta^2 from the channel Bures SDP, linear extrapolation in delta";
  r.deltas = deltas;
  const KrausChannel base = fam.KrausAt(theta);
  const ComplexMatrix base_choi = ChoiOfChannel(base).matrix;
  for (double d : deltas) {
    const KrausChannel moved = fam.KrausAt(theta + d);
    // Equal Choi operators: skip the solve, whose residual would be amplified by 1/d^2.
    if (ChoiOfChannel(moved).matrix == base_choi) {
      r.sequence.push_back(0.0);
      ++r.iterations;
      continue;
    }
    const ChannelPair pair = ChannelPair::FromChannels(base, moved);
    r.sequence.push_back(4.0 * BuresSqChannels(pair, opts).value / (d * d));
    ++r.iterations;
  }
  FitLinear(r);
  return r;
}

OracleReport FiniteDiffBuresFisher(const StateFamily& fam, double theta, const std::vector<double>& deltas) {
  RequireDeltas(deltas);
  OracleReport r;
  r.quantity = "finite_diff_bures_fisher";
  r.method = "4 d_B^2(rho_theta, rho_theta+delta) / delta^2, linear extrapolation in delta";
  r.deltas = deltas;
  const DensityOperator base = fam.RhoAt(theta);
  for (double d : deltas) {
    const double db = BuresDistanceStates(base, fam.RhoAt(theta + d));
    r.sequence.push_back(4.0 * db * db / (d * d));
    ++r.iterations;
  }
  FitLinear(r);
  return r;
}

double FiniteDiffKraus(const ChannelFamily& fam, double theta, double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw Error(ErrorCode::kInvalidInput, "h must lie in [1e-7, 1e-3]");
  const auto dk = fam.DKrausAt(theta);
  const auto kp = fam.KrausAt(theta + h).kraus();
  const auto km = fam.KrausAt(theta - h).kraus();
  double dev = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < dk.size(); ++i) {
    const ComplexMatrix fd = (kp[i] - km[i]) / (2.0 * h);
    dev = std::max(dev, (dk[i] - fd).norm());
    scale = std::max(scale, dk[i].norm());
  }
  return scale > 0.0 ? dev / scale : dev;
}

}  // namespace qbound::oracle
