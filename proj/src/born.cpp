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

#include "bornkit/born.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bornkit/schmidt.hpp"

namespace bornkit {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

double gram_residual(const Matrix& columns) {
    if (columns.cols() == 0) return 0.0;
    const auto r = columns.cols();
    return (columns.adjoint() * columns - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
}

Projector rank_one(const Vector& v) {
    return Projector::from_operator(Operator(HilbertSpace(static_cast<std::size_t>(v.size())), v * v.adjoint()));
}

}  // namespace

std::vector<double> ProbabilityReport::derived() const {
    std::vector<double> out;
    for (const auto& o : outcomes) out.push_back(o.derived_probability);
    return out;
}

std::vector<double> ProbabilityReport::oracle() const {
    std::vector<double> out;
    for (const auto& o : outcomes) out.push_back(o.oracle_probability);
    return out;
}

double complement_check(const PremeasurementModel& model, const BipartiteState& psi, std::size_t outcome,
                        const Matrix& schmidt2, const Tolerances& tol) {
    const Projector& q = model.apparatus().pointer_observable().projector(outcome);
    const Matrix rest = q.matrix() - schmidt2 * schmidt2.adjoint();
    Projector complement = Projector::zero(q.space());
    try {
        complement = Projector::from_operator(Operator(q.space(), rest), tol.op);
    } catch (const InputError& e) {
        throw VerificationError(std::string("complement_check: pointer complement is not a projector: ") + e.what());
    }
    // (I ⊗ Q') psi  ==  C Q'^T
    const Matrix c = psi.coefficient_matrix();
    return (c * complement.matrix().transpose()).norm();
}

double check_additivity(const DensityOperator& rho, std::span<const Projector> parts, const Tolerances& tol) {
    const auto n = idx(rho.dim());
    Matrix sum = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].dim() != rho.dim()) throw InputError("check_additivity: part is on a different space");
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            if ((parts[i].matrix() * parts[j].matrix()).norm() > tol.op) {
                throw InputError("check_additivity: parts are not mutually orthogonal");
            }
        }
        sum += parts[i].matrix();
    }
    const Projector whole = Projector::from_operator(Operator(rho.space(), sum), tol.op);
    double separate = 0.0;
    for (const auto& p : parts) separate += trace_probability(p, rho, tol);
    return std::abs(trace_probability(whole, rho, tol) - separate);
}

PrcResult check_prc(const ProbabilityReport& report, double tol) {
    PrcResult result;
    result.satisfied = true;
    for (const auto& o : report.outcomes) {
        const double r = std::abs(o.derived_probability - o.oracle_probability);
        result.residuals.push_back(r);
        if (!(r <= tol)) result.satisfied = false;
    }
    return result;
}

ProbabilityReport derive_probabilities(const PremeasurementModel& model, const StateVector& phi,
                                       std::uint64_t seed, const Tolerances& tol) {
    ProbabilityReport report;
    report.tolerances = tol;
    const FactorDims dims = model.dims();
    const HilbertSpace composite_space(dims.total());

    report.calibration = verify_calibration(model, seed, 20, tol);
    report.nondemolition = verify_nondemolition(model, phi, tol);
    report.norm_law = branch_norm_law(model, phi, tol);
    report.flags.cc_ok = report.calibration.passed;
    report.flags.nondemolition_ok = report.nondemolition.passed;
    report.flags.norm_law_ok = report.norm_law.passed;

    const BipartiteState psi = evolve(model, phi);
    const BranchSet set = branches(model, psi, tol);
    const DensityOperator rho = DensityOperator::pure(psi.state());

    report.flags.sublemma_ok = true;
    report.flags.complement_ok = true;
    report.flags.additivity_ok = true;

    Matrix global1(idx(dims.first), 0);
    Matrix global2(idx(dims.second), 0);
    Vector rebuilt = Vector::Zero(idx(dims.total()));

    for (std::size_t n = 0; n < model.outcome_count(); ++n) {
        OutcomeRecord rec;
        rec.outcome = n;
        rec.oracle_probability = trace_probability(model.measured().projector(n), phi, tol);
        const Projector& q = model.apparatus().pointer_observable().projector(n);
        rec.pointer_rank = q.rank();

        const Branch* branch = set.find(n);
        if (branch == nullptr) {
            rec.omitted = true;
            report.outcomes.push_back(std::move(rec));
            continue;
        }
        rec.branch_weight = branch->weight;

        const BipartiteState unit(make_state(composite_space, branch->vector), dims);
        const SchmidtForm form = schmidt_decompose(unit, tol);
        const double amplitude = std::sqrt(branch->weight);

        // Global biorthogonal form: coefficient sqrt(w_k) * phi_kl on |kl>_1 |kl>_2.
        const auto before = global1.cols();
        global1.conservativeResize(Eigen::NoChange, before + idx(form.rank()));
        global2.conservativeResize(Eigen::NoChange, before + idx(form.rank()));
        global1.rightCols(idx(form.rank())) = form.basis1();
        global2.rightCols(idx(form.rank())) = form.basis2();
        for (std::size_t l = 0; l < form.rank(); ++l) {
            rebuilt += amplitude * form.coefficients()[l] *
                       kron(Vector(form.basis1().col(idx(l))), Vector(form.basis2().col(idx(l))));
        }

        // Each Schmidt state |kl>_2 gets weight_k * |phi_kl|^2; summing over l
        // gives the probability of the Schmidt support inside Q^k.
        const std::vector<double> shares = schmidt_probabilities(form);
        double support_probability = 0.0;
        for (double share : shares) {
            SchmidtContribution c{share, branch->weight * share};
            support_probability += c.probability;
            rec.schmidt_detail.push_back(c);
        }

        try {
            const SublemmaReport lemma = sublemma_check(unit, q, tol);
            rec.sublemma_residual = std::max(lemma.max_residual, lemma.reduced_state_residual);
            if (!lemma.holds) report.flags.sublemma_ok = false;
        } catch (const InputError&) {
            rec.sublemma_residual = std::numeric_limits<double>::infinity();
            report.flags.sublemma_ok = false;
        }

        std::vector<Projector> parts;
        for (std::size_t l = 0; l < form.rank(); ++l) {
            parts.push_back(lift_second(dims.first, rank_one(form.basis2().col(idx(l)))));
        }
        try {
            rec.complement_residual = complement_check(model, psi, n, form.basis2(), tol);
            const Matrix rest = q.matrix() - form.basis2() * form.basis2().adjoint();
            const Projector complement = Projector::from_operator(Operator(q.space(), rest), tol.op);
            rec.complement_rank = complement.rank();
            if (rec.complement_rank > 0) parts.push_back(lift_second(dims.first, complement));
            if (rec.complement_residual > tol.op) report.flags.complement_ok = false;
        } catch (const VerificationError&) {
            rec.complement_residual = std::numeric_limits<double>::infinity();
            report.flags.complement_ok = false;
        }

        try {
            rec.additivity_residual = check_additivity(rho, parts, tol);
            if (rec.additivity_residual > tol.op) report.flags.additivity_ok = false;
        } catch (const InputError&) {
            rec.additivity_residual = std::numeric_limits<double>::infinity();
            report.flags.additivity_ok = false;
        }

        // The complement contributes zero once it is verified to annihilate psi.
        rec.derived_probability = support_probability;
        report.outcomes.push_back(std::move(rec));
    }

    report.biorthogonality_first = gram_residual(global1);
    report.biorthogonality_second = gram_residual(global2);
    report.reconstruction_residual = (rebuilt - psi.amplitudes()).norm();
    report.flags.biorthogonality_ok = report.biorthogonality_first <= tol.op &&
                                      report.biorthogonality_second <= tol.op &&
                                      report.reconstruction_residual <= tol.op;

    const PrcResult prc = check_prc(report, tol.op);
    report.prc_residuals = prc.residuals;
    report.flags.prc_ok = prc.satisfied;
    return report;
}

}  // namespace bornkit
