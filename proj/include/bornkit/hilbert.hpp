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

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bornkit {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Raised when caller-supplied data violates a precondition (shape, norm,
/// orthogonality, ...). The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when two independent computations of the same quantity disagree
/// beyond tolerance.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric tolerances. Every check takes one of these; defaults are the
/// library-wide values.
struct Tolerances {
    double op = 1e-10;           // operator identities, projector checks, residuals
    double norm = 1e-12;         // normalization
    double zero_branch = 1e-12;  // squared norm / singular value below which a term is dropped
    double identity = 1e-12;     // agreement of two routes to the same number

    bool operator==(const Tolerances&) const = default;
};

class HilbertSpace {
public:
    explicit HilbertSpace(std::size_t dim, std::string label = {});

    std::size_t dim() const { return dim_; }
    const std::string& label() const { return label_; }

    /// Spaces are compatible when dimensions agree; labels are descriptive.
    bool operator==(const HilbertSpace& other) const { return dim_ == other.dim_; }

private:
    std::size_t dim_;
    std::string label_;
};

HilbertSpace composite(const HilbertSpace& first, const HilbertSpace& second);

/// Unit vector over a finite-dimensional space.
class StateVector {
public:
    const HilbertSpace& space() const { return space_; }
    const Vector& amplitudes() const { return amplitudes_; }
    std::size_t dim() const { return space_.dim(); }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

    /// Computational basis vector e_index.
    static StateVector basis(const HilbertSpace& space, std::size_t index);

    /// Wraps an already-normalized vector; throws InputError if the norm is
    /// off by more than `norm_tol`.
    static StateVector from_normalized(const HilbertSpace& space, Vector amplitudes,
                                       double norm_tol = Tolerances{}.norm);

private:
    StateVector(HilbertSpace space, Vector amplitudes)
        : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {}

    friend StateVector make_state(const HilbertSpace&, const Vector&);

    HilbertSpace space_;
    Vector amplitudes_;
};

/// Normalizes `amplitudes` onto `space`.
StateVector make_state(const HilbertSpace& space, const Vector& amplitudes);
StateVector make_state(const HilbertSpace& space, std::span<const Complex> amplitudes);

/// Kronecker product; the first factor is the slow index.
StateVector tensor(const StateVector& u, const StateVector& v);
Vector kron(const Vector& u, const Vector& v);

class Operator {
public:
    Operator(HilbertSpace space, Matrix matrix);

    static Operator identity(const HilbertSpace& space);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }
    std::size_t dim() const { return space_.dim(); }

    Operator adjoint() const;
    bool is_unitary(double tol = Tolerances{}.op) const;
    /// Frobenius norm of U^dagger U - I.
    double unitarity_residual() const;

    Operator operator*(const Operator& rhs) const;

private:
    HilbertSpace space_;
    Matrix matrix_;
};

Operator kron(const Operator& a, const Operator& b);

/// Hermitian idempotent operator.
class Projector {
public:
    /// Throws InputError unless `op` is Hermitian and idempotent within `tol`.
    static Projector from_operator(const Operator& op, double tol = Tolerances{}.op);
    static Projector identity(const HilbertSpace& space);
    static Projector zero(const HilbertSpace& space);

    const Operator& op() const { return base_; }
    const Matrix& matrix() const { return base_.matrix(); }
    const HilbertSpace& space() const { return base_.space(); }
    std::size_t dim() const { return base_.dim(); }

    std::size_t rank() const;
    Projector complement() const;
    /// Orthonormal basis of the range, as columns.
    Matrix range_basis() const;

private:
    explicit Projector(Operator base) : base_(std::move(base)) {}

    Operator base_;
};

/// Orthogonal projector onto span(vectors). Modified Gram-Schmidt with one
/// re-orthogonalization pass; throws InputError on a dependent set.
Projector projector_from_span(std::span<const StateVector> vectors,
                              double tol = Tolerances{}.op);
Projector projector_from_span(const HilbertSpace& space, std::span<const Vector> vectors,
                              double tol = Tolerances{}.op);

/// Orthonormal columns spanning the same space as the input columns.
Matrix orthonormalize(const Matrix& columns, double tol = Tolerances{}.op);

/// Observable in spectral form: distinct eigenvalues paired with mutually
/// orthogonal projectors summing to the identity.
class Observable {
public:
    const HilbertSpace& space() const { return projectors_.front().space(); }
    std::span<const double> eigenvalues() const { return eigenvalues_; }
    std::span<const Projector> projectors() const { return projectors_; }
    const Projector& projector(std::size_t n) const { return projectors_.at(n); }
    std::size_t outcome_count() const { return eigenvalues_.size(); }
    std::size_t dim() const { return space().dim(); }

    /// sum_n a_n P^n
    Matrix matrix() const;

private:
    Observable(std::vector<double> eigenvalues, std::vector<Projector> projectors)
        : eigenvalues_(std::move(eigenvalues)), projectors_(std::move(projectors)) {}

    friend Observable spectral_observable(std::vector<double>, std::vector<Projector>,
                                          const Tolerances&);

    std::vector<double> eigenvalues_;
    std::vector<Projector> projectors_;
};

Observable spectral_observable(std::vector<double> eigenvalues, std::vector<Projector> projectors,
                               const Tolerances& tol = {});

class DensityOperator {
public:
    /// Validates Hermiticity, unit trace and positivity within `tol`.
    static DensityOperator from_matrix(const HilbertSpace& space, Matrix matrix,
                                       double tol = Tolerances{}.op);
    /// |psi><psi|
    static DensityOperator pure(const StateVector& psi);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }
    std::size_t dim() const { return space_.dim(); }

    /// Eigenvalues in ascending order.
    Eigen::VectorXd spectrum() const;

private:
    DensityOperator(HilbertSpace space, Matrix matrix)
        : space_(std::move(space)), matrix_(std::move(matrix)) {}

    HilbertSpace space_;
    Matrix matrix_;
};

/// Matrix-vector product; no renormalization.
Vector apply(const Operator& op, const Vector& v);
Vector apply(const Operator& op, const StateVector& s);
Vector apply(const Projector& p, const Vector& v);
Vector apply(const Projector& p, const StateVector& s);

enum class Subsystem { first, second };

struct FactorDims {
    std::size_t first;
    std::size_t second;

    std::size_t total() const { return first * second; }
    bool operator==(const FactorDims&) const = default;
};

/// Reduced density operator on the kept factor of a bipartite operator.
DensityOperator partial_trace(const DensityOperator& rho, FactorDims dims, Subsystem keep,
                              const Tolerances& tol = {});

/// tr(P rho) with tiny negative values clamped to zero. Throws InputError when
/// the imaginary part exceeds `tol.op`.
double trace_probability(const Projector& p, const DensityOperator& rho,
                         const Tolerances& tol = {});
/// <phi|P|phi>, the pure-state case.
double trace_probability(const Projector& p, const StateVector& phi, const Tolerances& tol = {});

/// P ⊗ I_d and I_d ⊗ P.
Projector lift_first(const Projector& p, std::size_t second_dim);
Projector lift_second(std::size_t first_dim, const Projector& p);

}  // namespace bornkit
