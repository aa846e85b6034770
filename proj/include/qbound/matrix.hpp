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

#ifndef QBOUND_MATRIX_HPP_
#define QBOUND_MATRIX_HPP_

#include <complex>
#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

namespace qbound {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Eigenvalues ascending, eigenvectors as orthonormal columns.
struct HermitianEig {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

// Relative Hermiticity tolerance used by eig_hermitian and friends.
inline constexpr double kHermitianTol = 1e-10;

// Throws InvalidInput if empty or any entry is NaN/Inf.
void RequireFinite(const ComplexMatrix& a, std::string_view what);

double SpectralNorm(const ComplexMatrix& a);
double TraceNorm(const ComplexMatrix& a);
double HilbertSchmidtNorm(const ComplexMatrix& a);

bool IsHermitian(const ComplexMatrix& a, double rel_tol = kHermitianTol);
ComplexMatrix HermitianPart(const ComplexMatrix& a);

HermitianEig EigHermitian(const ComplexMatrix& a);
double MinEigenvalue(const ComplexMatrix& hermitian);
double MaxEigenvalue(const ComplexMatrix& hermitian);

// Principal square root of a PSD matrix; eigenvalues in [-1e-8, 0) are clamped.
ComplexMatrix PsdSqrt(const ComplexMatrix& a);

// Unnormalized sum_i |i>|i>, as a d^2 x 1 column.
ComplexVector MaxEntangledVector(std::size_t d);

ComplexMatrix Identity(std::size_t d);
ComplexMatrix Kron(const ComplexMatrix& a, const ComplexMatrix& b);

// For m on H1 (x) H2: trace out the first or the second factor.
ComplexMatrix PartialTraceFirst(const ComplexMatrix& m, std::size_t d1, std::size_t d2);
ComplexMatrix PartialTraceSecond(const ComplexMatrix& m, std::size_t d1, std::size_t d2);

namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
}  // namespace pauli

}  // namespace qbound

#endif  // QBOUND_MATRIX_HPP_
