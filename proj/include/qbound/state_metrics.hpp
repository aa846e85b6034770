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

#ifndef QBOUND_STATE_METRICS_HPP_
#define QBOUND_STATE_METRICS_HPP_

#include <functional>
#include <string>

#include "qbound/matrix.hpp"

namespace qbound {

// Hermitian, PSD within 1e-10 and unit trace within 1e-10.
class DensityOperator {
 public:
  explicit DensityOperator(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

 private:
  ComplexMatrix m_;
};

class StateFamily {
 public:
  using MatrixFn = std::function<ComplexMatrix(double)>;

  StateFamily(std::string name, double theta_lo, double theta_hi, MatrixFn rho, MatrixFn drho);

  const std::string& name() const { return name_; }
  double theta_lo() const { return lo_; }
  double theta_hi() const { return hi_; }
  DensityOperator RhoAt(double theta) const;
  // Hermitian and traceless within 1e-9.
  ComplexMatrix DRhoAt(double theta) const;

 private:
  std::string name_;
  double lo_;
  double hi_;
  MatrixFn rho_;
  MatrixFn drho_;
};

double FidelityStates(const DensityOperator& rho, const DensityOperator& sigma);
double BuresDistanceStates(const DensityOperator& rho, const DensityOperator& sigma);

enum class SingularPolicy {
  kReject,      // min eigenvalue < 1e-9 throws SingularState
  kWhiteNoise,  // mixes rho with I/d at weight 1e-6 (result labeled by the caller)
  kSupport,     // spectral sum over pairs with lambda_l + lambda_m > 0 (constant-rank families)
};

inline constexpr double kSingularThreshold = 1e-9;
inline constexpr double kWhiteNoiseWeight = 1e-6;

// Spectral-sum SLD Fisher information from a state and its derivative.
double SldFisher(const ComplexMatrix& rho, const ComplexMatrix& drho,
                 SingularPolicy policy = SingularPolicy::kReject);
double SldFisherStates(const StateFamily& fam, double theta,
                       SingularPolicy policy = SingularPolicy::kReject);

// Derivative of sqrt(rho) via the divided difference 1/(sqrt(x) + sqrt(y)).
ComplexMatrix SqrtDerivative(const ComplexMatrix& rho, const ComplexMatrix& drho);

// H* solving rho H + H rho = i [d sqrt(rho), sqrt(rho)].
ComplexMatrix SldOptimalHamiltonian(const StateFamily& fam, double theta);
ComplexMatrix SldOptimalHamiltonian(const ComplexMatrix& rho, const ComplexMatrix& drho);

// rho_theta = (I + r (cos(theta) Z + sin(theta) X)) / 2.
StateFamily BlochRotationFamily(double r);
// rho_theta = diag(theta, 1 - theta).
StateFamily ClassicalFamily();
StateFamily ConstantStateFamily(const ComplexMatrix& rho);

}  // namespace qbound

#endif  // QBOUND_STATE_METRICS_HPP_
