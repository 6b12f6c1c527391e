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
#include <optional>
#include <span>
#include <vector>

namespace bornkit {

struct SampleRun {
    std::vector<double> probabilities;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> counts;
};

/// `n` categorical draws by inverse CDF, one uniform per draw. Each uniform
/// is (x >> 11) / 2^53 for one 64-bit engine output x.
///
/// Reproducibility contract: the run is split into `parts` sub-runs; sub-run
/// i draws n / parts samples (one extra for i < n % parts) from an
/// mt19937_64 seeded with mix_seed(seed + i). Counts are the sum over
/// sub-runs, so they depend only on (probabilities, n, seed, parts) and not
/// on how sub-runs are scheduled. Sub-runs execute on separate threads when
/// parts > 1. Throws InputError for an invalid distribution.
SampleRun sample_outcomes(std::span<const double> probabilities, std::uint64_t n, std::uint64_t seed,
                          std::size_t parts = 1);

struct FrequencyReport {
    std::vector<std::optional<double>> z_scores;  // empty for p in {0, 1}
    bool pass = false;
};

/// z_k = (count_k - N p_k) / sqrt(N p_k (1 - p_k)); pass iff every |z_k| <=
/// sigmas and outcomes with p_k in {0, 1} match exactly.
FrequencyReport frequency_check(const SampleRun& run, double sigmas = 4.0);

}  // namespace bornkit
