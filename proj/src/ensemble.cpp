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

#include "bornkit/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "bornkit/hilbert.hpp"
#include "bornkit/random.hpp"

namespace bornkit {

namespace {

std::vector<double> cumulative(std::span<const double> p) {
    if (p.empty()) throw InputError("sample_outcomes: empty distribution");
    double total = 0.0;
    for (double x : p) {
        if (!std::isfinite(x) || x < 0.0) throw InputError("sample_outcomes: probabilities must be nonnegative");
        total += x;
    }
    if (std::abs(total - 1.0) > Tolerances{}.op) throw InputError("sample_outcomes: probabilities do not sum to 1");

    std::vector<double> cdf(p.size());
    std::size_t last_positive = 0;
    double running = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        running += p[k];
        cdf[k] = running;
        if (p[k] > 0.0) last_positive = k;
    }
    // Pin the tail to 1 so rounding in the sum never leaves mass for the
    // zero-probability outcomes after the last positive one.
    for (std::size_t k = last_positive; k < cdf.size(); ++k) cdf[k] = 1.0;
    return cdf;
}

std::vector<std::uint64_t> draw(const std::vector<double>& cdf, std::uint64_t n, std::uint64_t seed) {
    std::mt19937_64 engine(mix_seed(seed));
    std::vector<std::uint64_t> counts(cdf.size(), 0);
    for (std::uint64_t t = 0; t < n; ++t) {
        // Top 53 bits of one engine output: u = k / 2^53 in [0, 1).
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        // Bucket k is [cdf[k-1], cdf[k]); zero-width buckets are never hit.
        ++counts[static_cast<std::size_t>(it - cdf.begin())];
    }
    return counts;
}

}  // namespace

SampleRun sample_outcomes(std::span<const double> probabilities, std::uint64_t n, std::uint64_t seed,
                          std::size_t parts) {
    const std::vector<double> cdf = cumulative(probabilities);
    if (parts == 0) parts = 1;

    std::vector<std::future<std::vector<std::uint64_t>>> jobs;
    for (std::size_t i = 0; i < parts; ++i) {
        const std::uint64_t share = n / parts + (i < n % parts ? 1 : 0);
        const std::uint64_t sub_seed = seed + i;
        jobs.push_back(std::async(parts > 1 ? std::launch::async : std::launch::deferred,
                                  [&cdf, share, sub_seed] { return draw(cdf, share, sub_seed); }));
    }

    SampleRun run;
    run.probabilities.assign(probabilities.begin(), probabilities.end());
    run.sample_count = n;
    run.seed = seed;
    run.counts.assign(cdf.size(), 0);
    for (auto& job : jobs) {
        const auto counts = job.get();
        for (std::size_t k = 0; k < counts.size(); ++k) run.counts[k] += counts[k];
    }
    return run;
}

FrequencyReport frequency_check(const SampleRun& run, double sigmas) {
    FrequencyReport report;
    report.pass = true;
    const double n = static_cast<double>(run.sample_count);
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < run.probabilities.size(); ++k) {
        const double p = run.probabilities[k];
        const std::uint64_t count = k < run.counts.size() ? run.counts[k] : 0;
        total += count;
        if (p <= 0.0) {
            report.z_scores.emplace_back();
            if (count != 0) report.pass = false;
        } else if (p >= 1.0) {
            report.z_scores.emplace_back();
            if (count != run.sample_count) report.pass = false;
        } else {
            const double z = (static_cast<double>(count) - n * p) / std::sqrt(n * p * (1.0 - p));
            report.z_scores.emplace_back(z);
            if (!(std::abs(z) <= sigmas)) report.pass = false;
        }
    }
    if (total != run.sample_count) report.pass = false;
    return report;
}

}  // namespace bornkit
