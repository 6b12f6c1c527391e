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

#include "bornkit/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace bornkit {

namespace {

std::string dims_message(const char* what, std::size_t expected, std::size_t got) {
    std::ostringstream os;
    os << what << ": expected dimension " << expected << ", got " << got;
    return os.str();
}

void require_dim(const char* what, std::size_t expected, std::size_t got) {
    if (expected != got) throw InputError(dims_message(what, expected, got));
}

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

HilbertSpace::HilbertSpace(std::size_t dim, std::string label) : dim_(dim), label_(std::move(label)) {
    if (dim_ < 1) throw InputError("HilbertSpace: dimension must be at least 1");
}

HilbertSpace composite(const HilbertSpace& first, const HilbertSpace& second) {
    std::string label;
    if (!first.label().empty() || !second.label().empty()) label = first.label() + "*" + second.label();
    return HilbertSpace(first.dim() * second.dim(), std::move(label));
}

// ---- StateVector ----

StateVector StateVector::basis(const HilbertSpace& space, std::size_t index) {
    if (index >= space.dim()) throw InputError("StateVector::basis: index out of range");
    Vector v = Vector::Zero(idx(space.dim()));
    v(idx(index)) = 1.0;
    return StateVector(space, std::move(v));
}

StateVector StateVector::from_normalized(const HilbertSpace& space, Vector amplitudes,
                                         double norm_tol) {
    require_dim("StateVector", space.dim(), static_cast<std::size_t>(amplitudes.size()));
    if (std::abs(amplitudes.norm() - 1.0) > norm_tol) {
        throw InputError("StateVector: vector is not normalized");
    }
    return StateVector(space, std::move(amplitudes));
}

StateVector make_state(const HilbertSpace& space, const Vector& amplitudes) {
    require_dim("make_state", space.dim(), static_cast<std::size_t>(amplitudes.size()));
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw InputError("make_state: zero or non-finite vector");
    return StateVector(space, amplitudes / norm);
}

StateVector make_state(const HilbertSpace& space, std::span<const Complex> amplitudes) {
    Vector v(idx(amplitudes.size()));
    for (std::size_t i = 0; i < amplitudes.size(); ++i) v(idx(i)) = amplitudes[i];
    return make_state(space, v);
}

Vector kron(const Vector& u, const Vector& v) {
    Vector out(u.size() * v.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        out.segment(i * v.size(), v.size()) = u(i) * v;
    }
    return out;
}

StateVector tensor(const StateVector& u, const StateVector& v) {
    // The product of two unit vectors is a unit vector up to rounding.
    return make_state(composite(u.space(), v.space()), kron(u.amplitudes(), v.amplitudes()));
}

// ---- Operator ----

Operator::Operator(HilbertSpace space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (static_cast<std::size_t>(matrix_.rows()) != space_.dim() ||
        static_cast<std::size_t>(matrix_.cols()) != space_.dim()) {
        throw InputError(dims_message("Operator", space_.dim(), static_cast<std::size_t>(matrix_.rows())));
    }
}

Operator Operator::identity(const HilbertSpace& space) {
    return Operator(space, Matrix::Identity(idx(space.dim()), idx(space.dim())));
}

Operator Operator::adjoint() const { return Operator(space_, matrix_.adjoint()); }

double Operator::unitarity_residual() const {
    return (matrix_.adjoint() * matrix_ - Matrix::Identity(matrix_.rows(), matrix_.cols())).norm();
}

bool Operator::is_unitary(double tol) const { return unitarity_residual() <= tol; }

Operator Operator::operator*(const Operator& rhs) const {
    require_dim("Operator product", dim(), rhs.dim());
    return Operator(space_, matrix_ * rhs.matrix_);
}

Operator kron(const Operator& a, const Operator& b) {
    const auto& A = a.matrix();
    const auto& B = b.matrix();
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        }
    }
    return Operator(composite(a.space(), b.space()), std::move(out));
}

// ---- Projector ----

Projector Projector::from_operator(const Operator& op, double tol) {
    const Matrix& m = op.matrix();
    if ((m - m.adjoint()).norm() > tol) throw InputError("Projector: operator is not Hermitian");
    if ((m * m - m).norm() > tol) throw InputError("Projector: operator is not idempotent");
    return Projector(op);
}

Projector Projector::identity(const HilbertSpace& space) { return Projector(Operator::identity(space)); }

Projector Projector::zero(const HilbertSpace& space) {
    return Projector(Operator(space, Matrix::Zero(idx(space.dim()), idx(space.dim()))));
}

std::size_t Projector::rank() const {
    return static_cast<std::size_t>(std::llround(matrix().trace().real()));
}

Projector Projector::complement() const {
    const auto n = idx(dim());
    return Projector(Operator(space(), Matrix::Identity(n, n) - matrix()));
}

Matrix Projector::range_basis() const {
    const std::size_t r = rank();
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix());
    // Eigenvalues ascend; the range is the top-r eigenvectors.
    return es.eigenvectors().rightCols(idx(r));
}

Matrix orthonormalize(const Matrix& columns, double tol) {
    Matrix q = columns;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index i = 0; i < j; ++i) {
                const Complex c = q.col(i).dot(q.col(j));
                q.col(j) -= c * q.col(i);
            }
        }
        const double norm = q.col(j).norm();
        if (norm <= tol * std::max(1.0, columns.col(j).norm())) {
            throw InputError("orthonormalize: vectors are linearly dependent");
        }
        q.col(j) /= norm;
    }
    return q;
}

Projector projector_from_span(const HilbertSpace& space, std::span<const Vector> vectors, double tol) {
    const auto n = idx(space.dim());
    if (vectors.empty()) return Projector::zero(space);
    Matrix cols(n, idx(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        require_dim("projector_from_span", space.dim(), static_cast<std::size_t>(vectors[j].size()));
        cols.col(idx(j)) = vectors[j];
    }
    const Matrix q = orthonormalize(cols, tol);
    return Projector::from_operator(Operator(space, q * q.adjoint()), tol);
}

Projector projector_from_span(std::span<const StateVector> vectors, double tol) {
    if (vectors.empty()) throw InputError("projector_from_span: empty vector list has no space");
    std::vector<Vector> raw;
    raw.reserve(vectors.size());
    for (const auto& v : vectors) {
        require_dim("projector_from_span", vectors.front().dim(), v.dim());
        raw.push_back(v.amplitudes());
    }
    return projector_from_span(vectors.front().space(), raw, tol);
}

// ---- Observable ----

Observable spectral_observable(std::vector<double> eigenvalues, std::vector<Projector> projectors,
                               const Tolerances& tol) {
    if (eigenvalues.size() != projectors.size()) {
        throw InputError("spectral_observable: eigenvalue and projector counts differ");
    }
    if (projectors.empty()) throw InputError("spectral_observable: no outcomes");
    const std::size_t dim = projectors.front().dim();
    for (const auto& p : projectors) require_dim("spectral_observable", dim, p.dim());

    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (!std::isfinite(eigenvalues[i])) throw InputError("spectral_observable: non-finite eigenvalue");
        for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
            if (eigenvalues[i] == eigenvalues[j]) {
                throw InputError("spectral_observable: duplicate eigenvalues");
            }
            if ((projectors[i].matrix() * projectors[j].matrix()).norm() > tol.op) {
                throw InputError("spectral_observable: projectors are not mutually orthogonal");
            }
        }
    }
    Matrix sum = Matrix::Zero(idx(dim), idx(dim));
    for (const auto& p : projectors) sum += p.matrix();
    if ((sum - Matrix::Identity(idx(dim), idx(dim))).norm() > tol.op) {
        throw InputError("spectral_observable: projectors do not sum to the identity");
    }
    return Observable(std::move(eigenvalues), std::move(projectors));
}

Matrix Observable::matrix() const {
    Matrix m = Matrix::Zero(idx(dim()), idx(dim()));
    for (std::size_t n = 0; n < eigenvalues_.size(); ++n) m += eigenvalues_[n] * projectors_[n].matrix();
    return m;
}

// ---- DensityOperator ----

DensityOperator DensityOperator::from_matrix(const HilbertSpace& space, Matrix matrix, double tol) {
    require_dim("DensityOperator", space.dim(), static_cast<std::size_t>(matrix.rows()));
    require_dim("DensityOperator", space.dim(), static_cast<std::size_t>(matrix.cols()));
    if ((matrix - matrix.adjoint()).norm() > tol) throw InputError("DensityOperator: not Hermitian");
    if (std::abs(matrix.trace() - Complex(1.0)) > tol) throw InputError("DensityOperator: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) throw InputError("DensityOperator: negative eigenvalue");
    return DensityOperator(space, std::move(matrix));
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
    const Vector& a = psi.amplitudes();
    return DensityOperator(psi.space(), a * a.adjoint());
}

Eigen::VectorXd DensityOperator::spectrum() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// ---- apply / partial trace / trace rule ----

Vector apply(const Operator& op, const Vector& v) {
    require_dim("apply", op.dim(), static_cast<std::size_t>(v.size()));
    return op.matrix() * v;
}

Vector apply(const Operator& op, const StateVector& s) { return apply(op, s.amplitudes()); }
Vector apply(const Projector& p, const Vector& v) { return apply(p.op(), v); }
Vector apply(const Projector& p, const StateVector& s) { return apply(p.op(), s.amplitudes()); }

DensityOperator partial_trace(const DensityOperator& rho, FactorDims dims, Subsystem keep,
                              const Tolerances& tol) {
    if (dims.first == 0 || dims.second == 0 || dims.total() != rho.dim()) {
        std::ostringstream os;
        os << "partial_trace: dimension " << rho.dim() << " does not factor as " << dims.first << " x "
           << dims.second;
        throw InputError(os.str());
    }
    const auto d1 = idx(dims.first);
    const auto d2 = idx(dims.second);
    const Matrix& m = rho.matrix();
    Matrix out;
    if (keep == Subsystem::first) {
        out = Matrix::Zero(d1, d1);
        for (Eigen::Index i = 0; i < d1; ++i)
            for (Eigen::Index j = 0; j < d1; ++j)
                for (Eigen::Index b = 0; b < d2; ++b) out(i, j) += m(i * d2 + b, j * d2 + b);
    } else {
        out = Matrix::Zero(d2, d2);
        for (Eigen::Index i = 0; i < d2; ++i)
            for (Eigen::Index j = 0; j < d2; ++j)
                for (Eigen::Index a = 0; a < d1; ++a) out(i, j) += m(a * d2 + i, a * d2 + j);
    }
    const std::size_t kept = keep == Subsystem::first ? dims.first : dims.second;
    return DensityOperator::from_matrix(HilbertSpace(kept), std::move(out), tol.op);
}

namespace {

double clamp_probability(Complex value, const Tolerances& tol) {
    if (std::abs(value.imag()) > tol.op) {
        throw InputError("trace_probability: imaginary part exceeds tolerance");
    }
    double p = value.real();
    if (p < -tol.op || p > 1.0 + tol.op) throw InputError("trace_probability: value outside [0, 1]");
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

double trace_probability(const Projector& p, const DensityOperator& rho, const Tolerances& tol) {
    require_dim("trace_probability", p.dim(), rho.dim());
    // tr(P rho) without forming the product.
    const Complex t = (p.matrix().transpose().cwiseProduct(rho.matrix())).sum();
    return clamp_probability(t, tol);
}

double trace_probability(const Projector& p, const StateVector& phi, const Tolerances& tol) {
    require_dim("trace_probability", p.dim(), phi.dim());
    const Complex t = phi.amplitudes().dot(p.matrix() * phi.amplitudes());
    return clamp_probability(t, tol);
}

Projector lift_first(const Projector& p, std::size_t second_dim) {
    return Projector::from_operator(kron(p.op(), Operator::identity(HilbertSpace(second_dim))),
                                    Tolerances{}.op * static_cast<double>(second_dim));
}

Projector lift_second(std::size_t first_dim, const Projector& p) {
    return Projector::from_operator(kron(Operator::identity(HilbertSpace(first_dim)), p.op()),
                                    Tolerances{}.op * static_cast<double>(first_dim));
}

}  // namespace bornkit
