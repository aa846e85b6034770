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

#ifndef QBOUND_CHANNEL_HPP_
#define QBOUND_CHANNEL_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbound/matrix.hpp"

namespace qbound {

inline constexpr double kCptpTol = 1e-8;

// CPTP map rho -> sum_i K_i rho K_i^dag, each K_i of shape d_out x d_in.
class KrausChannel {
 public:
  KrausChannel(std::size_t d_in, std::size_t d_out, std::vector<ComplexMatrix> kraus);

  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }

  ComplexMatrix Apply(const ComplexMatrix& rho) const;
  // (id_R (x) N)(rho) for rho on R (x) A.
  ComplexMatrix ApplyWithReference(const ComplexMatrix& rho, std::size_t d_ref) const;
  // Zero-pads the Kraus list up to `count` operators.
  KrausChannel Padded(std::size_t count) const;
  KrausChannel Tensor(const KrausChannel& other) const;
  // Channel followed by `post`.
  KrausChannel Then(const KrausChannel& post) const;

 private:
  std::size_t d_in_;
  std::size_t d_out_;
  std::vector<ComplexMatrix> kraus_;
};

// (id (x) N)(|Gamma><Gamma|) with row index i*d_out + b.
struct ChoiOperator {
  ComplexMatrix matrix;
  std::size_t d_in = 0;
  std::size_t d_out = 0;

  // Checks PSD and Tr_out = I, throwing NotPSD / NotCPTP.
  void Validate() const;
};

// V = sum_e |e> (x) K_e, shape (d_env*d_out) x d_in, row index e*d_out + b.
struct IsometricExtension {
  ComplexMatrix v;
  std::size_t d_env = 0;
  std::size_t d_in = 0;
  std::size_t d_out = 0;
};

// Smooth family theta -> N_theta with analytic derivative Kraus operators.
class ChannelFamily {
 public:
  using KrausFn = std::function<std::vector<ComplexMatrix>(double)>;

  ChannelFamily(std::string name, std::size_t d_in, std::size_t d_out, double theta_lo,
                double theta_hi, KrausFn kraus, KrausFn dkraus);

  const std::string& name() const { return name_; }
  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }
  double theta_lo() const { return theta_lo_; }
  double theta_hi() const { return theta_hi_; }
  bool Contains(double theta) const { return theta > theta_lo_ && theta < theta_hi_; }
  std::size_t kraus_count() const { return kraus_count_; }

  // Both throw OutOfDomain outside the open interval.
  KrausChannel KrausAt(double theta) const;
  std::vector<ComplexMatrix> DKrausAt(double theta) const;

  ChannelFamily WithDomain(double lo, double hi) const;

 private:
  void RequireInDomain(double theta) const;

  std::string name_;
  std::size_t d_in_;
  std::size_t d_out_;
  double theta_lo_;
  double theta_hi_;
  KrausFn kraus_;
  KrausFn dkraus_;
  std::size_t kraus_count_ = 0;
};

ChoiOperator ChoiOfChannel(const KrausChannel& ch);
KrausChannel CanonicalKraus(const ChoiOperator& choi);
IsometricExtension MakeIsometricExtension(const KrausChannel& ch);

struct FamilyIsometry {
  IsometricExtension iso;
  ComplexMatrix dv;
};
FamilyIsometry FamilyIsometryAndDerivative(const ChannelFamily& fam, double theta);

// Names: identity, depolarizing, dephasing, amplitude_damping, unitary_rz, unitary_given.
KrausChannel BuiltinChannel(std::string_view name, std::span<const double> params = {});
// Names: rz, dephasing, amplitude_damping, depolarizing, constant.
ChannelFamily BuiltinFamily(std::string_view name, std::span<const double> params = {});

ChannelFamily ConstantFamily(const KrausChannel& ch, double lo = 0.0, double hi = 1.0);
// theta -> post o N_theta o pre; Kraus count is the product of the three counts.
ChannelFamily ComposeFamily(const ChannelFamily& fam, const KrausChannel& pre,
                            const KrausChannel& post);

// Rz(theta) = exp(-i theta Z / 2).
ComplexMatrix RzMatrix(double theta);

}  // namespace qbound

#endif  // QBOUND_CHANNEL_HPP_
