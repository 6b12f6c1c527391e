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

#include "bornkit/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

namespace bornkit {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Components at or below this magnitude are treated as zero when choosing the
// ordering key and phase reference of a Schmidt vector.
constexpr double kComponentFloor = 1e-10;

std::size_t first_nonzero(const Eigen::Ref<const Vector>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > kComponentFloor) return static_cast<std::size_t>(i);
    }
    return static_cast<std::size_t>(v.size());
}

double orthonormality_residual(const Matrix& basis) {
    const auto r = basis.cols();
    return (basis.adjoint() * basis - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
}

Matrix complement_identity(const Matrix& basis) {
    const auto n = basis.rows();
    return Matrix::Identity(n, n) - basis * basis.adjoint();
}

}  // namespace

BipartiteState::BipartiteState(StateVector state, FactorDims dims) : state_(std::move(state)), dims_(dims) {
    if (dims_.first == 0 || dims_.second == 0 || dims_.total() != state_.dim()) {
        throw InputError("BipartiteState: declared factor dimensions do not match the state dimension");
    }
}

Matrix BipartiteState::coefficient_matrix() const {
    const auto d1 = idx(dims_.first);
    const auto d2 = idx(dims_.second);
    Matrix c(d1, d2);
    for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index j = 0; j < d2; ++j) c(i, j) = amplitudes()(i * d2 + j);
    return c;
}

SchmidtForm SchmidtForm::make(std::vector<double> coefficients, Matrix basis1, Matrix basis2, double tol) {
    const auto r = idx(coefficients.size());
    if (r == 0) throw InputError("SchmidtForm: no terms");
    if (basis1.cols() != r || basis2.cols() != r) {
        throw InputError("SchmidtForm: basis sizes differ from coefficient count");
    }
    if (r > basis1.rows() || r > basis2.rows()) throw InputError("SchmidtForm: more terms than min(d1, d2)");
    double total = 0.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        if (!(coefficients[i] > 0.0)) throw InputError("SchmidtForm: coefficients must be positive");
        if (i > 0 && coefficients[i] > coefficients[i - 1]) {
            throw InputError("SchmidtForm: coefficients must be in descending order");
        }
        total += coefficients[i] * coefficients[i];
    }
    if (std::abs(total - 1.0) > tol) throw InputError("SchmidtForm: squared coefficients do not sum to 1");
    if (orthonormality_residual(basis1) > tol || orthonormality_residual(basis2) > tol) {
        throw InputError("SchmidtForm: bases are not orthonormal");
    }
    return SchmidtForm(std::move(coefficients), std::move(basis1), std::move(basis2));
}

Projector SchmidtForm::support(Subsystem side) const {
    const Matrix& b = side == Subsystem::first ? basis1_ : basis2_;
    return Projector::from_operator(Operator(HilbertSpace(static_cast<std::size_t>(b.rows())),
                                             b * b.adjoint()));
}

SchmidtForm schmidt_decompose(const BipartiteState& psi, const Tolerances& tol) {
    const Matrix c = psi.coefficient_matrix();
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const Matrix& u = svd.matrixU();
    // C = U S V^dagger  =>  psi = sum_i s_i u_i ⊗ conj(v_i).
    const Matrix v2 = svd.matrixV().conjugate();

    std::vector<std::size_t> kept;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) >= tol.zero_branch) kept.push_back(static_cast<std::size_t>(i));
    }
    if (kept.empty()) throw InputError("schmidt_decompose: state has no nonzero singular value");

    std::stable_sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) { return s(idx(a)) > s(idx(b)); });
    // Within runs of equal coefficients, order by first nonzero factor-1 component.
    // A run shares one value (its mean) so reordering cannot break the ordering.
    std::vector<double> value(kept.size());
    for (std::size_t start = 0; start < kept.size();) {
        std::size_t end = start + 1;
        while (end < kept.size() && s(idx(kept[start])) - s(idx(kept[end])) <= tol.norm) ++end;
        std::stable_sort(kept.begin() + static_cast<std::ptrdiff_t>(start),
                         kept.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                             return first_nonzero(u.col(idx(a))) < first_nonzero(u.col(idx(b)));
                         });
        double mean = 0.0;
        for (std::size_t t = start; t < end; ++t) mean += s(idx(kept[t]));
        mean /= static_cast<double>(end - start);
        std::fill(value.begin() + static_cast<std::ptrdiff_t>(start), value.begin() + static_cast<std::ptrdiff_t>(end),
                  mean);
        start = end;
    }

    const auto r = idx(kept.size());
    std::vector<double> coefficients;
    Matrix basis1(c.rows(), r);
    Matrix basis2(c.cols(), r);
    for (Eigen::Index t = 0; t < r; ++t) {
        const auto i = idx(kept[static_cast<std::size_t>(t)]);
        Vector a = u.col(i);
        Vector b = v2.col(i);
        const std::size_t lead = first_nonzero(a);
        if (lead < static_cast<std::size_t>(a.size())) {
            const Complex phase = a(idx(lead)) / std::abs(a(idx(lead)));
            a *= std::conj(phase);
            b *= phase;
        }
        basis1.col(t) = a;
        basis2.col(t) = b;
        coefficients.push_back(value[static_cast<std::size_t>(t)]);
    }

    // Renormalize away the weight of dropped terms so the form invariant holds.
    const double norm = std::sqrt(std::inner_product(coefficients.begin(), coefficients.end(),
                                                     coefficients.begin(), 0.0));
    for (double& x : coefficients) x /= norm;
    return SchmidtForm::make(std::move(coefficients), std::move(basis1), std::move(basis2), tol.op);
}

BipartiteState reconstruct(const SchmidtForm& form) {
    const FactorDims dims = form.dims();
    Vector psi = Vector::Zero(idx(dims.total()));
    for (std::size_t i = 0; i < form.rank(); ++i) {
        psi += form.coefficients()[i] * kron(Vector(form.basis1().col(idx(i))), Vector(form.basis2().col(idx(i))));
    }
    return BipartiteState(make_state(HilbertSpace(dims.total()), psi), dims);
}

LocalPair twin_unitary(const SchmidtForm& form, std::span<const double> phases) {
    if (phases.size() != form.rank()) throw InputError("twin_unitary: one phase per Schmidt term required");
    const Matrix& b1 = form.basis1();
    const Matrix& b2 = form.basis2();
    Matrix u1 = complement_identity(b1);
    Matrix u2 = complement_identity(b2);
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const Complex e = std::polar(1.0, phases[i]);
        u1 += e * b1.col(idx(i)) * b1.col(idx(i)).adjoint();
        u2 += std::conj(e) * b2.col(idx(i)) * b2.col(idx(i)).adjoint();
    }
    return {Operator(HilbertSpace(static_cast<std::size_t>(b1.rows())), std::move(u1)),
            Operator(HilbertSpace(static_cast<std::size_t>(b2.rows())), std::move(u2))};
}

LocalPair swap_witness(const SchmidtForm& form, std::span<const std::size_t> perm, double coefficient_tol) {
    const std::size_t r = form.rank();
    if (perm.size() != r) throw InputError("swap_witness: permutation length differs from Schmidt rank");
    std::vector<bool> seen(r, false);
    for (std::size_t target : perm) {
        if (target >= r || seen[target]) throw InputError("swap_witness: not a permutation");
        seen[target] = true;
    }
    for (std::size_t i = 0; i < r; ++i) {
        if (perm[i] != i && std::abs(form.coefficients()[i] - form.coefficients()[perm[i]]) > coefficient_tol) {
            throw InputError("swap_witness: moved Schmidt terms have unequal coefficients");
        }
    }
    const Matrix& b1 = form.basis1();
    const Matrix& b2 = form.basis2();
    Matrix u1 = complement_identity(b1);
    Matrix u2 = complement_identity(b2);
    for (std::size_t i = 0; i < r; ++i) {
        u1 += b1.col(idx(perm[i])) * b1.col(idx(i)).adjoint();
        u2 += b2.col(idx(perm[i])) * b2.col(idx(i)).adjoint();
    }
    return {Operator(HilbertSpace(static_cast<std::size_t>(b1.rows())), std::move(u1)),
            Operator(HilbertSpace(static_cast<std::size_t>(b2.rows())), std::move(u2))};
}

double check_envariance(const BipartiteState& psi, const Operator& u1, const Operator& u2, double tol) {
    if (u1.dim() != psi.dims().first || u2.dim() != psi.dims().second) {
        throw InputError("check_envariance: operator dimensions do not match the factors");
    }
    if (!u1.is_unitary(tol) || !u2.is_unitary(tol)) throw InputError("check_envariance: operator is not unitary");
    // (U1 ⊗ U2) psi  ==  U1 C U2^T  on the coefficient matrix.
    const Matrix c = psi.coefficient_matrix();
    const Matrix moved = u1.matrix() * c * u2.matrix().transpose();
    return (moved - c).norm();
}

std::vector<double> schmidt_probabilities(const SchmidtForm& form) {
    std::vector<double> p;
    p.reserve(form.rank());
    for (double a : form.coefficients()) p.push_back(a * a);
    return p;
}

SublemmaReport sublemma_check(const BipartiteState& psi, const Projector& q2, const Tolerances& tol) {
    const FactorDims dims = psi.dims();
    if (q2.dim() != dims.second) throw InputError("sublemma_check: projector is not on the second factor");
    const Matrix c = psi.coefficient_matrix();
    // (I ⊗ Q2) psi  ==  C Q2^T.
    if ((c * q2.matrix().transpose() - c).norm() > tol.op) {
        throw InputError("sublemma_check: hypothesis (I ⊗ Q2) psi = psi does not hold");
    }

    SublemmaReport report;
    const DensityOperator rho2 = partial_trace(DensityOperator::pure(psi.state()), dims, Subsystem::second, tol);
    report.reduced_state_residual = (q2.matrix() * rho2.matrix() - rho2.matrix()).norm();

    const SchmidtForm form = schmidt_decompose(psi, tol);
    for (std::size_t l = 0; l < form.rank(); ++l) {
        const Vector v = form.basis2().col(idx(l));
        report.max_residual = std::max(report.max_residual, (q2.matrix() * v - v).norm());
    }
    report.holds = report.max_residual <= tol.op && report.reduced_state_residual <= tol.op;
    return report;
}

}  // namespace bornkit
