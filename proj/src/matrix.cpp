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

#include "qbound/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbound/error.hpp"

namespace qbound {

void RequireFinite(const ComplexMatrix& a, std::string_view what) {
  if (a.size() == 0) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + " is empty");
  }
  if (!a.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + " has non-finite entries");
  }
}

namespace {

RealVector SingularValues(const ComplexMatrix& a) {
  if (a.size() == 0) return RealVector::Zero(1);
  return Eigen::BDCSVD<ComplexMatrix>(a).singularValues();
}

}  // namespace

double SpectralNorm(const ComplexMatrix& a) {
  RequireFinite(a, "matrix");
  return SingularValues(a).maxCoeff();
}

double TraceNorm(const ComplexMatrix& a) {
  RequireFinite(a, "matrix");
  return SingularValues(a).sum();
}

double HilbertSchmidtNorm(const ComplexMatrix& a) {
  RequireFinite(a, "matrix");
  return a.norm();
}

bool IsHermitian(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

ComplexMatrix HermitianPart(const ComplexMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

HermitianEig EigHermitian(const ComplexMatrix& a) {
  RequireFinite(a, "matrix");
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kShapeError, "eigendecomposition needs a square matrix");
  }
  if (!IsHermitian(a)) {
    throw Error(ErrorCode::kNotHermitian, "matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(HermitianPart(a));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidInput, "eigendecomposition did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double MinEigenvalue(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(HermitianPart(hermitian),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double MaxEigenvalue(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(HermitianPart(hermitian),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

ComplexMatrix PsdSqrt(const ComplexMatrix& a) {
  const HermitianEig eig = EigHermitian(a);
  const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  if (eig.eigenvalues(0) < -1e-8 * scale) {
    throw Error(ErrorCode::kNotPSD, "negative eigenvalue " + std::to_string(eig.eigenvalues(0)));
  }
  // Eigenvalues at rounding level are treated as exact zeros.
  const double floor = 1e-14 * scale;
  const RealVector roots =
      eig.eigenvalues.unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
  return eig.eigenvectors * roots.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
}

ComplexVector MaxEntangledVector(std::size_t d) {
  if (d == 0) throw Error(ErrorCode::kInvalidInput, "dimension must be positive");
  ComplexVector gamma = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < d; ++i) gamma(static_cast<Eigen::Index>(i * d + i)) = 1.0;
  return gamma;
}

ComplexMatrix Identity(std::size_t d) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

ComplexMatrix Kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix PartialTraceFirst(const ComplexMatrix& m, std::size_t d1, std::size_t d2) {
  const auto n1 = static_cast<Eigen::Index>(d1);
  const auto n2 = static_cast<Eigen::Index>(d2);
  if (m.rows() != n1 * n2 || m.cols() != n1 * n2) {
    throw Error(ErrorCode::kShapeError, "partial trace dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(n2, n2);
  for (Eigen::Index k = 0; k < n1; ++k) out += m.block(k * n2, k * n2, n2, n2);
  return out;
}

ComplexMatrix PartialTraceSecond(const ComplexMatrix& m, std::size_t d1, std::size_t d2) {
  const auto n1 = static_cast<Eigen::Index>(d1);
  const auto n2 = static_cast<Eigen::Index>(d2);
  if (m.rows() != n1 * n2 || m.cols() != n1 * n2) {
    throw Error(ErrorCode::kShapeError, "partial trace dimension mismatch");
  }
  ComplexMatrix out(n1, n1);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n1; ++j) out(i, j) = m.block(i * n2, j * n2, n2, n2).trace();
  }
  return out;
}

namespace pauli {

ComplexMatrix I() { return Identity(2); }

ComplexMatrix X() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix Y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix Z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace pauli

}  // namespace qbound
