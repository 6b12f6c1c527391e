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

#include "bornkit/premeasurement.hpp"

#include <algorithm>
#include <cmath>

#include "bornkit/random.hpp"

namespace bornkit {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Below this norm the Householder direction is taken to be zero, i.e. the two
// pointer states coincide up to phase.
constexpr double kReflectionFloor = 1e-14;

// ||(I ⊗ Q) v - v|| using the coefficient-matrix form of v.
double pointer_projection_residual(const Vector& v, FactorDims dims, const Projector& q) {
    const auto d1 = idx(dims.first);
    const auto d2 = idx(dims.second);
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c(v.data(), d1,
                                                                                                      d2);
    return (c * q.matrix().transpose() - c).norm();
}

double measured_projection_residual(const Vector& v, FactorDims dims, const Projector& p) {
    const auto d1 = idx(dims.first);
    const auto d2 = idx(dims.second);
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c(v.data(), d1,
                                                                                                      d2);
    return (p.matrix() * c - c).norm();
}

Vector project_pointer(const Vector& v, FactorDims dims, const Projector& q) {
    const auto d1 = idx(dims.first);
    const auto d2 = idx(dims.second);
    using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> c(v.data(), d1, d2);
    RowMajor projected = c * q.matrix().transpose();
    return Eigen::Map<const Vector>(projected.data(), d1 * d2);
}

}  // namespace

PointerApparatus PointerApparatus::make(StateVector ready, Observable pointer, std::vector<StateVector> pointer_states,
                                        const Tolerances& tol) {
    const std::size_t d2 = ready.dim();
    if (pointer.dim() != d2) throw InputError("PointerApparatus: pointer observable is on a different space");
    if (pointer_states.size() != pointer.outcome_count()) {
        throw InputError("PointerApparatus: need exactly one pointer state per pointer outcome");
    }
    if (pointer_states.size() > d2) throw InputError("PointerApparatus: more outcomes than pointer dimensions");
    for (std::size_t n = 0; n < pointer_states.size(); ++n) {
        const auto& chi = pointer_states[n];
        if (chi.dim() != d2) throw InputError("PointerApparatus: pointer state is on a different space");
        for (std::size_t m = 0; m < pointer_states.size(); ++m) {
            const Complex overlap = pointer_states[m].amplitudes().dot(chi.amplitudes());
            const double expected = m == n ? 1.0 : 0.0;
            if (std::abs(overlap - expected) > tol.op) {
                throw InputError("PointerApparatus: pointer states are not orthonormal");
            }
        }
        if ((apply(pointer.projector(n), chi) - chi.amplitudes()).norm() > tol.op) {
            throw InputError("PointerApparatus: pointer state lies outside its pointer projector");
        }
    }
    return PointerApparatus(std::move(ready), std::move(pointer), std::move(pointer_states));
}

PremeasurementModel PremeasurementModel::with_coupling(Observable measured, PointerApparatus apparatus,
                                                       Operator coupling, const Tolerances& tol) {
    if (measured.outcome_count() != apparatus.outcome_count()) {
        throw InputError("PremeasurementModel: measured and pointer outcome counts differ");
    }
    if (coupling.dim() != measured.dim() * apparatus.space().dim()) {
        throw InputError("PremeasurementModel: coupling is not on the composite space");
    }
    if (!coupling.is_unitary(tol.op)) throw InputError("PremeasurementModel: coupling is not unitary");
    return PremeasurementModel(std::move(measured), std::move(apparatus), std::move(coupling));
}

Operator pointer_shift(const StateVector& from, const StateVector& to) {
    if (from.dim() != to.dim()) throw InputError("pointer_shift: states on different spaces");
    const auto n = idx(from.dim());
    const Vector& x = from.amplitudes();
    const Vector& y = to.amplitudes();
    // Rotate the target by the phase that makes <z|x> real, reflect x onto z,
    // then undo the phase so the image is exactly y.
    const Complex overlap = y.dot(x);
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    const Vector z = phase * y;
    const Vector w = x - z;
    Matrix v = Matrix::Identity(n, n);
    const double w2 = w.squaredNorm();
    if (std::sqrt(w2) > kReflectionFloor) v -= (2.0 / w2) * (w * w.adjoint());
    v *= std::conj(phase);
    return Operator(from.space(), std::move(v));
}

PremeasurementModel build_premeasurement(const Observable& measured, const PointerApparatus& apparatus,
                                         const Tolerances& tol) {
    if (measured.outcome_count() != apparatus.outcome_count()) {
        throw InputError("build_premeasurement: measured and pointer outcome counts differ");
    }
    const std::size_t d1 = measured.dim();
    const std::size_t d2 = apparatus.space().dim();
    Matrix u = Matrix::Zero(idx(d1 * d2), idx(d1 * d2));
    for (std::size_t n = 0; n < measured.outcome_count(); ++n) {
        const Operator shift = pointer_shift(apparatus.ready_state(), apparatus.pointer_states()[n]);
        u += kron(measured.projector(n).op(), shift).matrix();
    }
    return PremeasurementModel::with_coupling(measured, apparatus, Operator(HilbertSpace(d1 * d2), std::move(u)), tol);
}

BipartiteState evolve(const PremeasurementModel& model, const StateVector& phi) {
    if (phi.dim() != model.dims().first) throw InputError("evolve: input state is not on the measured space");
    const Vector in = kron(phi.amplitudes(), model.apparatus().ready_state().amplitudes());
    const Vector out = model.coupling().matrix() * in;
    return BipartiteState(StateVector::from_normalized(HilbertSpace(model.dims().total()), out, 1e-10),
                          model.dims());
}

const Branch* BranchSet::find(std::size_t outcome) const {
    auto it = std::find_if(terms.begin(), terms.end(), [&](const Branch& b) { return b.outcome == outcome; });
    return it == terms.end() ? nullptr : &*it;
}

double BranchSet::total_weight() const {
    double total = 0.0;
    for (const auto& b : terms) total += b.weight;
    return total;
}

BranchSet branches(const PremeasurementModel& model, const BipartiteState& psi, const Tolerances& tol) {
    if (psi.dims() != model.dims()) throw InputError("branches: state is not on the model's composite space");
    BranchSet set;
    const Observable& pointer = model.apparatus().pointer_observable();
    for (std::size_t n = 0; n < pointer.outcome_count(); ++n) {
        Vector term = project_pointer(psi.amplitudes(), psi.dims(), pointer.projector(n));
        const double weight = term.squaredNorm();
        if (weight < tol.zero_branch) {
            set.omitted.push_back(n);
        } else {
            set.terms.push_back({n, std::move(term), weight});
        }
    }
    return set;
}

double CalibrationReport::max_residual() const {
    double m = 0.0;
    for (const auto& o : outcomes) m = std::max(m, o.max_residual);
    return m;
}

CalibrationReport verify_calibration(const PremeasurementModel& model, std::uint64_t seed,
                                     std::size_t random_vectors, const Tolerances& tol) {
    Rng rng(seed);
    CalibrationReport report;
    const HilbertSpace space1(model.dims().first);
    const Observable& pointer = model.apparatus().pointer_observable();
    for (std::size_t n = 0; n < model.outcome_count(); ++n) {
        const Projector& p = model.measured().projector(n);
        const Projector& q = pointer.projector(n);
        std::vector<StateVector> inputs;
        const Matrix basis = p.range_basis();
        for (Eigen::Index j = 0; j < basis.cols(); ++j) inputs.push_back(make_state(space1, basis.col(j)));
        for (std::size_t t = 0; t < random_vectors; ++t) inputs.push_back(rng.state_in_range(p));

        OutcomeResidual entry{n, 0.0, inputs.size()};
        for (const auto& phi : inputs) {
            const BipartiteState psi = evolve(model, phi);
            entry.max_residual = std::max(entry.max_residual, pointer_projection_residual(psi.amplitudes(), psi.dims(), q));
        }
        report.outcomes.push_back(entry);
    }
    report.passed = report.max_residual() <= tol.op;
    return report;
}

NondemolitionReport verify_nondemolition(const PremeasurementModel& model, const StateVector& phi,
                                         const Tolerances& tol) {
    const BipartiteState psi = evolve(model, phi);
    const BranchSet set = branches(model, psi, tol);
    NondemolitionReport report;
    report.passed = true;
    for (const auto& b : set.terms) {
        BranchResidual r;
        r.outcome = b.outcome;
        r.measured_residual = measured_projection_residual(b.vector, psi.dims(), model.measured().projector(b.outcome));
        r.pointer_residual = pointer_projection_residual(
            b.vector, psi.dims(), model.apparatus().pointer_observable().projector(b.outcome));
        if (r.measured_residual > tol.op || r.pointer_residual > tol.op) report.passed = false;
        report.branches.push_back(r);
    }
    return report;
}

NormLawReport branch_norm_law(const PremeasurementModel& model, const StateVector& phi, const Tolerances& tol) {
    const BipartiteState psi = evolve(model, phi);
    const BranchSet set = branches(model, psi, tol);
    NormLawReport report;
    report.passed = true;
    for (std::size_t n = 0; n < model.outcome_count(); ++n) {
        NormLawEntry e;
        e.outcome = n;
        e.oracle = trace_probability(model.measured().projector(n), phi, tol);
        if (const Branch* b = set.find(n)) {
            e.weight = b->weight;
            e.residual = std::abs(e.weight - e.oracle);
            if (e.residual > tol.op) report.passed = false;
        } else {
            e.omitted = true;
            e.residual = e.oracle;
            if (e.oracle > tol.zero_branch) report.passed = false;
        }
        report.outcomes.push_back(e);
    }
    return report;
}

}  // namespace bornkit
