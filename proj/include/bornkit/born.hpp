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
#include <span>
#include <vector>

#include "bornkit/hilbert.hpp"
#include "bornkit/premeasurement.hpp"

namespace bornkit {

/// One Schmidt state |kl>_2 of branch k.
struct SchmidtContribution {
    double branch_share = 0.0;  // |phi_kl|^2 within the normalized branch
    double probability = 0.0;   // weight_k * |phi_kl|^2
};

struct OutcomeRecord {
    std::size_t outcome = 0;
    bool omitted = false;
    double branch_weight = 0.0;
    double derived_probability = 0.0;
    double oracle_probability = 0.0;
    std::vector<SchmidtContribution> schmidt_detail;
    std::size_t pointer_rank = 0;
    std::size_t complement_rank = 0;
    double complement_residual = 0.0;  // ||(I ⊗ (Q^k)') psi||
    double sublemma_residual = 0.0;
    double additivity_residual = 0.0;
};

struct AuditFlags {
    bool cc_ok = false;
    bool nondemolition_ok = false;
    bool norm_law_ok = false;
    bool biorthogonality_ok = false;
    bool sublemma_ok = false;
    bool complement_ok = false;
    bool additivity_ok = false;
    bool prc_ok = false;

    bool all() const {
        return cc_ok && nondemolition_ok && norm_law_ok && biorthogonality_ok && sublemma_ok && complement_ok &&
               additivity_ok && prc_ok;
    }
};

struct ProbabilityReport {
    std::vector<OutcomeRecord> outcomes;  // one per outcome of A, in order
    AuditFlags flags;
    Tolerances tolerances;
    double biorthogonality_first = 0.0;   // max |<kl|k'l'>_1 - delta|
    double biorthogonality_second = 0.0;
    double reconstruction_residual = 0.0; // ||sum of global Schmidt terms - psi||
    CalibrationReport calibration;
    NondemolitionReport nondemolition;
    NormLawReport norm_law;
    std::vector<double> prc_residuals;

    std::vector<double> derived() const;
    std::vector<double> oracle() const;
};

/// Runs the full derivation for input phi: evolve, split into pointer
/// branches, Schmidt-decompose each branch, assemble and check the global
/// biorthogonal form, assign Schmidt-state probabilities, sum them, verify
/// the pointer-projector complement vanishes on the state, and compare the
/// result with <phi|P^k|phi>. Audit failures are recorded in the flags;
/// nothing is thrown for them. `seed` drives the calibration sampling.
ProbabilityReport derive_probabilities(const PremeasurementModel& model, const StateVector& phi,
                                       std::uint64_t seed = 0, const Tolerances& tol = {});

/// (Q^k)' = Q^k - sum_l |kl><kl|. Returns ||(I ⊗ (Q^k)') psi||. Throws
/// VerificationError if (Q^k)' is not a projector.
double complement_check(const PremeasurementModel& model, const BipartiteState& psi, std::size_t outcome,
                        const Matrix& schmidt2, const Tolerances& tol = {});

/// |p(sum parts) - sum p(part)| via the trace rule. Throws InputError for
/// non-orthogonal parts.
double check_additivity(const DensityOperator& rho, std::span<const Projector> parts, const Tolerances& tol = {});

struct PrcResult {
    std::vector<double> residuals;
    bool satisfied = false;
};

/// Per outcome |derived - oracle|.
PrcResult check_prc(const ProbabilityReport& report, double tol = Tolerances{}.op);

}  // namespace bornkit
