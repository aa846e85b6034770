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

#include "qbound/random.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include "qbound/error.hpp"

namespace qbound::random {

namespace {

using Index = Eigen::Index;

ComplexMatrix Gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

// Q factor with the phases of R's diagonal removed.
ComplexMatrix Orthonormalize(const ComplexMatrix& g) {
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(g.rows(), g.cols());
  const ComplexMatrix r = qr.matrixQR();
  ComplexMatrix out = q;
  for (Index j = 0; j < g.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) out.col(j) *= d / std::abs(d);
  }
  return out;
}

}  // namespace

std::uint64_t SeedFromEnv(std::uint64_t fallback) {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return fallback;
  try {
    return std::stoull(env);
  } catch (...) {
    return fallback;
  }
}

ComplexVector HaarVector(std::size_t d, Rng& rng) {
  if (d == 0) throw Error(ErrorCode::kInvalidInput, "dimension must be positive");
  ComplexVector v = Gaussian(static_cast<Index>(d), 1, rng);
  return v / v.norm();
}

ComplexMatrix HaarUnitary(std::size_t d, Rng& rng) {
  const auto n = static_cast<Index>(d);
  return Orthonormalize(Gaussian(n, n, rng));
}

ComplexMatrix RandomHermitian(std::size_t d, Rng& rng) {
  const auto n = static_cast<Index>(d);
  const ComplexMatrix g = Gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix RandomDensity(std::size_t d, Rng& rng) {
  const auto n = static_cast<Index>(d);
  const ComplexMatrix g = Gaussian(n, n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return HermitianPart(rho);
}

KrausChannel RandomChannel(std::size_t d_in, std::size_t d_out, std::size_t kraus_count, Rng& rng) {
  if (kraus_count == 0 || kraus_count * d_out < d_in) {
    throw Error(ErrorCode::kInvalidParam, "too few Kraus operators for an isometry");
  }
  const auto rows = static_cast<Index>(kraus_count * d_out);
  const ComplexMatrix v = Orthonormalize(Gaussian(rows, static_cast<Index>(d_in), rng));
  std::vector<ComplexMatrix> kraus;
  for (std::size_t e = 0; e < kraus_count; ++e) {
    kraus.push_back(v.middleRows(static_cast<Index>(e * d_out), static_cast<Index>(d_out)));
  }
  return KrausChannel(d_in, d_out, std::move(kraus));
}

}  // namespace qbound::random
