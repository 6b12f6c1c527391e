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
#include <vector>

#include "bornkit/hilbert.hpp"
#include "bornkit/schmidt.hpp"

namespace bornkit {

struct MixtureComponent {
    StateVector state;
    double weight;
};

/// Proper mixture: pure sub-ensembles with statistical weights w_k, optionally
/// backed by integer sub-ensemble sizes N_k with w_k = N_k / sum N.
class MixtureSpec {
public:
    static MixtureSpec make(std::vector<MixtureComponent> components,
                            std::optional<std::vector<std::uint64_t>> counts = std::nullopt,
                            double tol = Tolerances{}.identity);

    const std::vector<MixtureComponent>& components() const { return components_; }
    const std::optional<std::vector<std::uint64_t>>& counts() const { return counts_; }
    const HilbertSpace& space() const { return components_.front().state.space(); }

private:
    MixtureSpec(std::vector<MixtureComponent> c, std::optional<std::vector<std::uint64_t>> n)
        : components_(std::move(c)), counts_(std::move(n)) {}

    std::vector<MixtureComponent> components_;
    std::optional<std::vector<std::uint64_t>> counts_;
};

/// rho = sum_k w_k |phi_k><phi_k|
DensityOperator mix(const MixtureSpec& spec, const Tolerances& tol = {});

/// sum_k w_k <phi_k|P|phi_k>, cross-checked against tr(P mix(spec)).
/// Throws VerificationError when the two disagree beyond tol.identity.
double proper_probability(const Projector& p, const MixtureSpec& spec, const Tolerances& tol = {});

/// tr((P1 ⊗ I) |psi><psi|), cross-checked against tr(P1 tr_2 |psi><psi|).
double improper_probability(const Projector& p1, const BipartiteState& psi, const Tolerances& tol = {});

struct EquivalenceReport {
    double max_residual = 0.0;
    std::size_t trials = 0;
    double state_residual = 0.0;  // ||mix(spec) - tr_2 |psi><psi|||
};

/// Compares proper and improper probabilities over `trials` random
/// projectors of random rank on factor 1. Throws InputError if mix(spec) and
/// the reduced state of psi differ by more than tol.op.
EquivalenceReport proper_improper_equivalence(const MixtureSpec& spec, const BipartiteState& psi, std::size_t trials,
                                              std::uint64_t seed, const Tolerances& tol = {});

/// sum_l sqrt(r_l) |l>|l> over the eigenbasis of rho; partner dimension equals
/// dim(rho).
BipartiteState canonical_purification(const DensityOperator& rho);

/// The mixture {(|l>, r_l)} over the eigenbasis of rho (zero eigenvalues
/// dropped).
MixtureSpec spectral_mixture(const DensityOperator& rho, double zero_tol = Tolerances{}.zero_branch);

}  // namespace bornkit
