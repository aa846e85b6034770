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

#ifndef QBOUND_RANDOM_HPP_
#define QBOUND_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

#include "qbound/channel.hpp"
#include "qbound/matrix.hpp"

namespace qbound::random {

using Rng = std::mt19937_64;

inline constexpr const char* kSeedEnvVar = "QBOUND_SEED";

// Seed from QBOUND_SEED when set and parseable, else `fallback`.
std::uint64_t SeedFromEnv(std::uint64_t fallback);

// Normalized complex Gaussian vector (Haar distributed on the unit sphere).
ComplexVector HaarVector(std::size_t d, Rng& rng);
ComplexMatrix HaarUnitary(std::size_t d, Rng& rng);
ComplexMatrix RandomHermitian(std::size_t d, Rng& rng);
// Hilbert-Schmidt random density matrix.
ComplexMatrix RandomDensity(std::size_t d, Rng& rng);
// Kraus operators cut from a Haar-like random isometry.
KrausChannel RandomChannel(std::size_t d_in, std::size_t d_out, std::size_t kraus_count, Rng& rng);

}  // namespace qbound::random

#endif  // QBOUND_RANDOM_HPP_
