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

#ifndef QBOUND_CHANNEL_METRICS_HPP_
#define QBOUND_CHANNEL_METRICS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "qbound/channel.hpp"
#include "qbound/matrix.hpp"
#include "qbound/sdp.hpp"

namespace qbound {

// Two channels with identical d_in, d_out and d_env = d_in * d_out.
class ChannelPair {
 public:
  ChannelPair(IsometricExtension v1, IsometricExtension v2);
  // Re-canonicalizes both channels through their Choi operators.
  static ChannelPair FromChannels(const KrausChannel& a, const KrausChannel& b);

  const IsometricExtension& v1() const { return v1_; }
  const IsometricExtension& v2() const { return v2_; }
  std::size_t d_in() const { return v1_.d_in; }
  std::size_t d_out() const { return v1_.d_out; }
  std::size_t d_env() const { return v1_.d_env; }

 private:
  IsometricExtension v1_;
  IsometricExtension v2_;
};

struct BoundReport {
  double value = 0.0;
  // "W" (contraction) or "H" (Hermitian generator) as applicable.
  std::map<std::string, ComplexMatrix> witness;
  // lambda, mu, nu, a, b as applicable.
  std::map<std::string, double> scalars;
  std::string theorem_tag;
  sdp::SolveStatus solver_status = sdp::SolveStatus::kOptimal;
  // SDP optimum expressed in the same units as `value`.
  double solver_objective = 0.0;
  int sdp_solves = 0;

  double WitnessNorm() const;
  double Scalar(const std::string& key) const;
};

struct BoundOptions {
  sdp::SolverOptions solver;
  int nu_grid_points = 25;
  double nu_min = 1e-4;
};

// M_W = V1^dag (W (x) I_B) V2.
ComplexMatrix OverlapOperator(const ChannelPair& pair, const ComplexMatrix& w);
// W / max(1, ||W||).
ComplexMatrix ProjectToContraction(const ComplexMatrix& w);

struct ContractionTerms {
  double a = 0.0;          // 2 ||I - Re M_W||
  double b = 0.0;          // ||I - M_W||^2
  double min_re_eig = 0.0;  // lambda_min(Re M_W)
};
ContractionTerms EvaluateContraction(const ChannelPair& pair, const ComplexMatrix& w);

struct FisherTerms {
  double a = 0.0;  // ||M_H||^2
  double b = 0.0;  // ||V^dag M_H||^2
};
// M_H = dV - i (H (x) I_B) V.
ComplexMatrix FisherResidualOperator(const FamilyIsometry& fi, const ComplexMatrix& h);
FisherTerms EvaluateFisher(const FamilyIsometry& fi, const ComplexMatrix& h);

BoundReport RootFidelityChannels(const ChannelPair& pair, const BoundOptions& opts = {});
BoundReport BuresSqChannels(const ChannelPair& pair, const BoundOptions& opts = {});
// n * inf_W { a_W + (n-1) b_W }.
BoundReport ParallelBuresBound(const ChannelPair& pair, std::size_t n, const BoundOptions& opts = {});
// n * inf_W { a_W + (n-1) sqrt(a_W b_W) } via the nu-split line search.
// `sql` is an optional precomputed BuresSqlDenominator report (mu = 0 candidate).
BoundReport AdaptiveBuresBound(const ChannelPair& pair, std::size_t n, const BoundOptions& opts = {},
                               const std::optional<BoundReport>& sql = std::nullopt);
// inf { a_W : ||W|| <= 1, M_W = I }; value +inf with status infeasible otherwise.
BoundReport BuresSqlDenominator(const ChannelPair& pair, const BoundOptions& opts = {});

// Channel SLD Fisher information I_F (four times the SDP optimum).
BoundReport SldFisherChannel(const ChannelFamily& fam, double theta, const BoundOptions& opts = {});
// 4 n inf_H { a_H + (n-1) b_H }.
BoundReport ParallelFisherBound(const ChannelFamily& fam, double theta, std::size_t n,
                                const BoundOptions& opts = {});
// 4 n inf_H { a_H + (n-1) sqrt(a_H b_H) }.
BoundReport AdaptiveFisherBound(const ChannelFamily& fam, double theta, std::size_t n,
                                const BoundOptions& opts = {},
                                const std::optional<BoundReport>& sql = std::nullopt);
// inf_H { alpha a_H + beta b_H } (quarter-Fisher units); scalars carry a and b at the witness.
BoundReport WeightedFisherTerms(const ChannelFamily& fam, double theta, double alpha, double beta,
                                const BoundOptions& opts = {});

// inf_H { a_H : V^dag M_H = 0 } (quarter-Fisher units); +inf and status infeasible otherwise.
BoundReport FisherSqlDenominator(const ChannelFamily& fam, double theta, const BoundOptions& opts = {});

}  // namespace qbound

#endif  // QBOUND_CHANNEL_METRICS_HPP_
