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

#include <span>
#include <utility>
#include <vector>

#include "bornkit/hilbert.hpp"

namespace bornkit {

/// Pure state on a declared two-factor space.
class BipartiteState {
public:
    BipartiteState(StateVector state, FactorDims dims);

    const StateVector& state() const { return state_; }
    const Vector& amplitudes() const { return state_.amplitudes(); }
    FactorDims dims() const { return dims_; }

    /// Amplitudes reshaped to the d1 x d2 coefficient matrix C(i, j) = psi[i*d2 + j].
    Matrix coefficient_matrix() const;

private:
    StateVector state_;
    FactorDims dims_;
};

/// Biorthogonal form  psi = sum_i alpha_i |i>_1 |i>_2  with positive,
/// descending coefficients. Bases are stored as columns.
class SchmidtForm {
public:
    /// Validates every invariant; throws InputError on violation.
    static SchmidtForm make(std::vector<double> coefficients, Matrix basis1, Matrix basis2,
                            double tol = Tolerances{}.op);

    std::span<const double> coefficients() const { return coefficients_; }
    const Matrix& basis1() const { return basis1_; }
    const Matrix& basis2() const { return basis2_; }
    std::size_t rank() const { return coefficients_.size(); }
    FactorDims dims() const {
        return {static_cast<std::size_t>(basis1_.rows()), static_cast<std::size_t>(basis2_.rows())};
    }

    /// sum_i |i><i| on either factor.
    Projector support(Subsystem side) const;

private:
    SchmidtForm(std::vector<double> c, Matrix b1, Matrix b2)
        : coefficients_(std::move(c)), basis1_(std::move(b1)), basis2_(std::move(b2)) {}

    std::vector<double> coefficients_;
    Matrix basis1_;
    Matrix basis2_;
};

/// SVD of the coefficient matrix. Singular values below `tol.zero_branch` are
/// dropped. Equal coefficients are ordered by the index of the first nonzero
/// component of their factor-1 vector; that component is made real positive
/// and the compensating phase moves into the factor-2 vector.
SchmidtForm schmidt_decompose(const BipartiteState& psi, const Tolerances& tol = {});

BipartiteState reconstruct(const SchmidtForm& form);

/// Pair of local unitaries on the two factors.
struct LocalPair {
    Operator first;
    Operator second;
};

/// U1 = sum e^{i theta_i}|i><i| and U2 = sum e^{-i theta_i}|i><i|, identity on
/// the complements of the Schmidt supports.
LocalPair twin_unitary(const SchmidtForm& form, std::span<const double> phases);

/// Permutes the Schmidt vectors of both factors by `perm` (term i -> perm[i]).
/// The factor-2 move undoes the factor-1 move, so the pair leaves psi
/// invariant. Throws InputError when a moved term's coefficient differs from
/// its image's coefficient by more than `coefficient_tol`.
LocalPair swap_witness(const SchmidtForm& form, std::span<const std::size_t> perm,
                       double coefficient_tol = 1e-12);

/// ||(U1 ⊗ U2) psi - psi||. Throws InputError if either operator is not
/// unitary within `tol`, or dimensions do not match the factors.
double check_envariance(const BipartiteState& psi, const Operator& u1, const Operator& u2,
                        double tol = Tolerances{}.op);

/// {alpha_i^2}: the probabilities the envariance theorem assigns to the
/// Schmidt states. No derivation happens here.
std::vector<double> schmidt_probabilities(const SchmidtForm& form);

struct SublemmaReport {
    bool holds = false;
    double max_residual = 0.0;        // max_l ||Q2|l> - |l>||
    double reduced_state_residual = 0.0;  // ||Q2 rho2 - rho2||
};

/// Checks that every factor-2 Schmidt vector of psi lies in range(q2) given
/// (I ⊗ q2) psi = psi. Throws InputError when that hypothesis fails.
SublemmaReport sublemma_check(const BipartiteState& psi, const Projector& q2,
                              const Tolerances& tol = {});

}  // namespace bornkit
