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

/// Measuring instrument: pointer observable B = sum b_n Q^n, ready state
/// chi0 and one pointer state chi^n in range(Q^n) per outcome.
class PointerApparatus {
public:
    /// Throws InputError unless pointer states are orthonormal, one per
    /// outcome, each inside its pointer projector.
    static PointerApparatus make(StateVector ready, Observable pointer, std::vector<StateVector> pointer_states,
                                 const Tolerances& tol = {});

    const HilbertSpace& space() const { return ready_.space(); }
    const StateVector& ready_state() const { return ready_; }
    const Observable& pointer_observable() const { return pointer_; }
    const std::vector<StateVector>& pointer_states() const { return pointer_states_; }
    std::size_t outcome_count() const { return pointer_states_.size(); }

private:
    PointerApparatus(StateVector ready, Observable pointer, std::vector<StateVector> states)
        : ready_(std::move(ready)), pointer_(std::move(pointer)), pointer_states_(std::move(states)) {}

    StateVector ready_;
    Observable pointer_;
    std::vector<StateVector> pointer_states_;
};

/// Measured observable A on factor 1, apparatus on factor 2, and the
/// coupling unitary U12 on the composite.
class PremeasurementModel {
public:
    /// Wraps a caller-supplied coupling. Only unitarity and the outcome
    /// pairing are enforced; calibration and nondemolition are left to the
    /// verifiers so that broken couplings can be audited.
    static PremeasurementModel with_coupling(Observable measured, PointerApparatus apparatus, Operator coupling,
                                             const Tolerances& tol = {});

    const Observable& measured() const { return measured_; }
    const PointerApparatus& apparatus() const { return apparatus_; }
    const Operator& coupling() const { return coupling_; }
    FactorDims dims() const { return {measured_.dim(), apparatus_.space().dim()}; }
    std::size_t outcome_count() const { return measured_.outcome_count(); }

private:
    PremeasurementModel(Observable a, PointerApparatus app, Operator u)
        : measured_(std::move(a)), apparatus_(std::move(app)), coupling_(std::move(u)) {}

    Observable measured_;
    PointerApparatus apparatus_;
    Operator coupling_;
};

/// Unitary V on the pointer space with V|from> = |to> exactly: a Householder
/// reflection times a global phase, or the identity when from == to.
Operator pointer_shift(const StateVector& from, const StateVector& to);

/// U12 = sum_n P^n ⊗ V_n with V_n = pointer_shift(chi0, chi^n).
PremeasurementModel build_premeasurement(const Observable& measured, const PointerApparatus& apparatus,
                                         const Tolerances& tol = {});

/// U12 (phi ⊗ chi0).
BipartiteState evolve(const PremeasurementModel& model, const StateVector& phi);

struct Branch {
    std::size_t outcome = 0;
    Vector vector;  // (I ⊗ Q^n) psi, unnormalized
    double weight = 0.0;  // squared norm
};

struct BranchSet {
    std::vector<Branch> terms;          // nonzero branches, ascending outcome
    std::vector<std::size_t> omitted;   // outcomes whose branch vanished

    const Branch* find(std::size_t outcome) const;
    double total_weight() const;
};

BranchSet branches(const PremeasurementModel& model, const BipartiteState& psi, const Tolerances& tol = {});

struct OutcomeResidual {
    std::size_t outcome = 0;
    double max_residual = 0.0;
    std::size_t vectors_checked = 0;
};

struct CalibrationReport {
    std::vector<OutcomeResidual> outcomes;
    bool passed = false;
    double max_residual() const;
};

/// For every outcome n, evolves a basis of range(P^n) plus `random_vectors`
/// random unit vectors in that range and records ||(I ⊗ Q^n) psi - psi||.
CalibrationReport verify_calibration(const PremeasurementModel& model, std::uint64_t seed,
                                     std::size_t random_vectors = 20, const Tolerances& tol = {});

struct BranchResidual {
    std::size_t outcome = 0;
    double measured_residual = 0.0;  // ||(P^k ⊗ I) b - b||
    double pointer_residual = 0.0;   // ||(I ⊗ Q^k) b - b||
};

struct NondemolitionReport {
    std::vector<BranchResidual> branches;
    bool passed = false;
};

NondemolitionReport verify_nondemolition(const PremeasurementModel& model, const StateVector& phi,
                                         const Tolerances& tol = {});

struct NormLawEntry {
    std::size_t outcome = 0;
    bool omitted = false;
    double weight = 0.0;
    double oracle = 0.0;  // <phi|P^n|phi> by the trace rule
    double residual = 0.0;
};

struct NormLawReport {
    std::vector<NormLawEntry> outcomes;
    bool passed = false;
};

/// Branch weights against <phi|P^n|phi>; omitted branches must have oracle
/// value at most tol.zero_branch.
NormLawReport branch_norm_law(const PremeasurementModel& model, const StateVector& phi, const Tolerances& tol = {});

}  // namespace bornkit
