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

#ifndef QBOUND_ORACLE_HPP_
#define QBOUND_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qbound/channel.hpp"
#include "qbound/channel_metrics.hpp"
#include "qbound/state_metrics.hpp"

namespace qbound::oracle {

struct OracleReport {
  std::string quantity;
  double value = 0.0;
  std::string method;
  std::size_t samples = 0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  // Finite-difference sequences: deltas[i] -> sequence[i]; slope of the linear fit.
  std::vector<double> deltas;
  std::vector<double> sequence;
  double slope = 0.0;

  std::string ToJson() const;
};

inline constexpr std::size_t kMaxDiamondInputDim = 16;
inline constexpr std::size_t kMaxDiamondChoiDim = 64;

struct DiamondResult {
  double norm = 0.0;       // || p N1^(x)n - q N2^(x)n ||_diamond
  double p_success = 0.0;  // optimal success probability of the weighted discrimination task
  double p_error = 0.0;    // (p + q - norm) / 2, the exact parallel error when p + q = 1
  sdp::SolveStatus status = sdp::SolveStatus::kOptimal;
};

// Exact diamond norm of p N1^(x)n - q N2^(x)n for n <= 2 through the
// discrimination SDP max Tr[Q1 p J1 + Q2 q J2], Q1 + Q2 = sigma (x) I, Tr sigma = 1.
DiamondResult DiamondNormExact(double p, const KrausChannel& n1, double q, const KrausChannel& n2,
                               std::size_t n, const sdp::SolverOptions& opts = {});

struct ProbeOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 7;
  // Local random-walk refinement steps from the best sample (0 disables).
  std::size_t refine_steps = 4000;
};

// Output state and derivative of (id_R (x) N_theta) on a pure probe psi over R (x) A.
void ProbeOutput(const ChannelFamily& fam, double theta, const ComplexVector& psi, ComplexMatrix& rho,
                 ComplexMatrix& drho);

// Max of the output SLD Fisher information over Haar-random pure probes (reference dim = d_in).
OracleReport ProbeFisherMax(const ChannelFamily& fam, double theta, const ProbeOptions& opts = {});

// Min of the output root fidelity over Haar-random pure probes.
OracleReport ProbeRootFidelityMin(const KrausChannel& a, const KrausChannel& b, const ProbeOptions& opts = {});

// 4 d_B^2(theta, theta + delta) / delta^2 for each delta, with a linear-in-delta extrapolation.
OracleReport FiniteDiffBuresFisher(const ChannelFamily& fam, double theta, const std::vector<double>& deltas,
                                   const BoundOptions& opts = {});
OracleReport FiniteDiffBuresFisher(const StateFamily& fam, double theta, const std::vector<double>& deltas);

// Max relative deviation of the analytic derivative Kraus operators from a central difference.
double FiniteDiffKraus(const ChannelFamily& fam, double theta, double h);

}  // namespace qbound::oracle

#endif  // QBOUND_ORACLE_HPP_
