// Copyright 2026 The Bornkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

#include "bornkit/hilbert.hpp"

namespace bornkit {

/// SplitMix64 finalizer. Used to derive independent sub-seeds from
/// (seed + index).
std::uint64_t mix_seed(std::uint64_t x);

/// Seeded source of random vectors and operators. Engine is mt19937_64 seeded
/// with mix_seed(seed); streams are reproducible for a given build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    std::mt19937_64& engine() { return engine_; }

    double uniform();  // [0, 1)
    double normal();
    std::size_t index(std::size_t n);  // uniform in [0, n)

    /// Complex Gaussian vector (not normalized).
    Vector gaussian(std::size_t dim);
    /// Haar-distributed unit vector.
    StateVector state(const HilbertSpace& space);
    /// Haar-ish random unitary (QR of a complex Ginibre matrix, phases fixed).
    Matrix unitary(std::size_t dim);
    /// Random unit vector in the range of `p` (p must be nonzero).
    StateVector state_in_range(const Projector& p);
    /// Projector onto a random subspace of the given rank.
    Projector projector(const HilbertSpace& space, std::size_t rank);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace bornkit
