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

#include "qbound/state_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qbound/error.hpp"

namespace qbound {

namespace {

void RequireSameDim(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kShapeError, "state dimensions differ");
}

HermitianEig CheckedSpectrum(const ComplexMatrix& rho, SingularPolicy policy, ComplexMatrix* used) {
  ComplexMatrix r = HermitianPart(rho);
  if (policy == SingularPolicy::kWhiteNoise) {
    const auto d = static_cast<double>(r.rows());
    r = (1.0 - kWhiteNoiseWeight) * r + (kWhiteNoiseWeight / d) * Identity(r.rows());
  }
  HermitianEig eig = EigHermitian(r);
  if (policy == SingularPolicy::kReject && eig.eigenvalues(0) < kSingularThreshold) {
    throw Error(ErrorCode::kSingularState,
                "state has minimum eigenvalue " + std::to_string(eig.eigenvalues(0)));
  }
  if (used != nullptr) *used = r;
  return eig;
}

}  // namespace

DensityOperator::DensityOperator(const ComplexMatrix& m) : m_(m) {
  RequireFinite(m, "density operator");
  if (m.rows() != m.cols()) throw Error(ErrorCode::kShapeError, "density operator not square");
  if (!IsHermitian(m)) throw Error(ErrorCode::kNotHermitian, "density operator not Hermitian");
  if (std::abs(m.trace() - 1.0) > 1e-10) {
    throw Error(ErrorCode::kInvalidInput, "density operator trace is not 1");
  }
  if (MinEigenvalue(m) < -1e-10) throw Error(ErrorCode::kNotPSD, "density operator not PSD");
  m_ = HermitianPart(m);
}

StateFamily::StateFamily(std::string name, double theta_lo, double theta_hi, MatrixFn rho,
                         MatrixFn drho)
    : name_(std::move(name)), lo_(theta_lo), hi_(theta_hi), rho_(std::move(rho)), drho_(std::move(drho)) {}

DensityOperator StateFamily::RhoAt(double theta) const {
  if (!(theta > lo_ && theta < hi_)) {
    throw Error(ErrorCode::kOutOfDomain, "theta outside state family domain");
  }
  return DensityOperator(rho_(theta));
}

ComplexMatrix StateFamily::DRhoAt(double theta) const {
  if (!(theta > lo_ && theta < hi_)) {
    throw Error(ErrorCode::kOutOfDomain, "theta outside state family domain");
  }
  ComplexMatrix d = drho_(theta);
  if (!IsHermitian(d, 1e-9) || std::abs(d.trace()) > 1e-9) {
    throw Error(ErrorCode::kInvalidInput, "state derivative must be Hermitian and traceless");
  }
  return d;
}

double FidelityStates(const DensityOperator& rho, const DensityOperator& sigma) {
  RequireSameDim(rho, sigma);
  const double root = TraceNorm(PsdSqrt(rho.matrix()) * PsdSqrt(sigma.matrix()));
  return std::clamp(root * root, 0.0, 1.0);
}

double BuresDistanceStates(const DensityOperator& rho, const DensityOperator& sigma) {
  const double root_f = std::sqrt(FidelityStates(rho, sigma));
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - root_f)));
}

double SldFisher(const ComplexMatrix& rho, const ComplexMatrix& drho, SingularPolicy policy) {
  if (rho.rows() != drho.rows() || rho.cols() != drho.cols()) {
    throw Error(ErrorCode::kShapeError, "state and derivative shapes differ");
  }
  const HermitianEig eig = CheckedSpectrum(rho, policy, nullptr);
  const ComplexMatrix d = eig.eigenvectors.adjoint() * HermitianPart(drho) * eig.eigenvectors;
  const RealVector lam = eig.eigenvalues.cwiseMax(0.0);
  const double cutoff = 1e-12 * std::max(1.0, lam.maxCoeff());
  double fisher = 0.0;
  for (Eigen::Index l = 0; l < lam.size(); ++l) {
    for (Eigen::Index m = 0; m < lam.size(); ++m) {
      const double s = lam(l) + lam(m);
      if (s <= cutoff) continue;
      fisher += 2.0 * std::norm(d(l, m)) / s;
    }
  }
  return fisher;
}

double SldFisherStates(const StateFamily& fam, double theta, SingularPolicy policy) {
  return SldFisher(fam.RhoAt(theta).matrix(), fam.DRhoAt(theta), policy);
}

ComplexMatrix SqrtDerivative(const ComplexMatrix& rho, const ComplexMatrix& drho) {
  const HermitianEig eig = CheckedSpectrum(rho, SingularPolicy::kReject, nullptr);
  const RealVector root = eig.eigenvalues.cwiseSqrt();
  ComplexMatrix d = eig.eigenvectors.adjoint() * HermitianPart(drho) * eig.eigenvectors;
  for (Eigen::Index l = 0; l < d.rows(); ++l) {
    for (Eigen::Index m = 0; m < d.cols(); ++m) d(l, m) /= (root(l) + root(m));
  }
  return eig.eigenvectors * d * eig.eigenvectors.adjoint();
}

ComplexMatrix SldOptimalHamiltonian(const ComplexMatrix& rho, const ComplexMatrix& drho) {
  const HermitianEig eig = CheckedSpectrum(rho, SingularPolicy::kReject, nullptr);
  const RealVector lam = eig.eigenvalues;
  const RealVector root = lam.cwiseSqrt();
  ComplexMatrix h = eig.eigenvectors.adjoint() * HermitianPart(drho) * eig.eigenvectors;
  for (Eigen::Index l = 0; l < h.rows(); ++l) {
    for (Eigen::Index m = 0; m < h.cols(); ++m) {
      const double w = (root(l) - root(m)) / ((lam(l) + lam(m)) * (root(l) + root(m)));
      h(l, m) *= Complex(0.0, -w);
    }
  }
  return HermitianPart(eig.eigenvectors * h * eig.eigenvectors.adjoint());
}

ComplexMatrix SldOptimalHamiltonian(const StateFamily& fam, double theta) {
  return SldOptimalHamiltonian(fam.RhoAt(theta).matrix(), fam.DRhoAt(theta));
}

StateFamily BlochRotationFamily(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorCode::kInvalidParam, "Bloch radius outside [0,1]");
  return StateFamily(
      "bloch_rotation", -10.0, 10.0,
      [r](double t) {
        return ComplexMatrix(0.5 * (pauli::I() + r * (std::cos(t) * pauli::Z() + std::sin(t) * pauli::X())));
      },
      [r](double t) {
        return ComplexMatrix(0.5 * r * (-std::sin(t) * pauli::Z() + std::cos(t) * pauli::X()));
      });
}

StateFamily ClassicalFamily() {
  return StateFamily(
      "classical", 0.0, 1.0,
      [](double t) {
        ComplexMatrix m = ComplexMatrix::Zero(2, 2);
        m(0, 0) = t;
        m(1, 1) = 1.0 - t;
        return m;
      },
      [](double) {
        ComplexMatrix m = ComplexMatrix::Zero(2, 2);
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
        return m;
      });
}

StateFamily ConstantStateFamily(const ComplexMatrix& rho) {
  const ComplexMatrix zero = ComplexMatrix::Zero(rho.rows(), rho.cols());
  return StateFamily(
      "constant", -10.0, 10.0, [rho](double) { return rho; }, [zero](double) { return zero; });
}

}  // namespace qbound
