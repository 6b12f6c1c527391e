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

#include "bornkit/mixtures.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "bornkit/random.hpp"

namespace bornkit {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

MixtureSpec MixtureSpec::make(std::vector<MixtureComponent> components,
                              std::optional<std::vector<std::uint64_t>> counts, double tol) {
    if (components.empty()) throw InputError("MixtureSpec: no components");
    const std::size_t dim = components.front().state.dim();
    double total = 0.0;
    for (const auto& c : components) {
        if (c.state.dim() != dim) throw InputError("MixtureSpec: components live on different spaces");
        if (!(c.weight > 0.0)) throw InputError("MixtureSpec: weights must be positive");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > tol) throw InputError("MixtureSpec: weights do not sum to 1");
    if (counts) {
        if (counts->size() != components.size()) throw InputError("MixtureSpec: one count per component required");
        const std::uint64_t n = std::accumulate(counts->begin(), counts->end(), std::uint64_t{0});
        for (std::size_t k = 0; k < counts->size(); ++k) {
            if ((*counts)[k] == 0) throw InputError("MixtureSpec: counts must be positive");
            const double frequency = static_cast<double>((*counts)[k]) / static_cast<double>(n);
            if (std::abs(components[k].weight - frequency) > tol) {
                throw InputError("MixtureSpec: weight differs from N_k / N");
            }
        }
    }
    return MixtureSpec(std::move(components), std::move(counts));
}

DensityOperator mix(const MixtureSpec& spec, const Tolerances& tol) {
    const auto n = idx(spec.space().dim());
    Matrix rho = Matrix::Zero(n, n);
    for (const auto& c : spec.components()) {
        const Vector& a = c.state.amplitudes();
        rho += c.weight * (a * a.adjoint());
    }
    return DensityOperator::from_matrix(spec.space(), std::move(rho), tol.op);
}

double proper_probability(const Projector& p, const MixtureSpec& spec, const Tolerances& tol) {
    if (p.dim() != spec.space().dim()) throw InputError("proper_probability: projector is on a different space");
    double by_subensemble = 0.0;
    for (const auto& c : spec.components()) by_subensemble += c.weight * trace_probability(p, c.state, tol);
    const double by_trace = trace_probability(p, mix(spec, tol), tol);
    if (std::abs(by_subensemble - by_trace) > tol.identity) {
        throw VerificationError("proper_probability: sub-ensemble sum and trace formula disagree");
    }
    return by_subensemble;
}

double improper_probability(const Projector& p1, const BipartiteState& psi, const Tolerances& tol) {
    const FactorDims dims = psi.dims();
    if (p1.dim() != dims.first) throw InputError("improper_probability: projector is not on the first factor");
    const DensityOperator whole = DensityOperator::pure(psi.state());
    const double global = trace_probability(lift_first(p1, dims.second), whole, tol);
    const double reduced = trace_probability(p1, partial_trace(whole, dims, Subsystem::first, tol), tol);
    if (std::abs(global - reduced) > tol.identity) {
        throw VerificationError("improper_probability: composite and reduced traces disagree");
    }
    return global;
}

EquivalenceReport proper_improper_equivalence(const MixtureSpec& spec, const BipartiteState& psi, std::size_t trials,
                                              std::uint64_t seed, const Tolerances& tol) {
    if (spec.space().dim() != psi.dims().first) {
        throw InputError("proper_improper_equivalence: mixture and first factor differ in dimension");
    }
    const DensityOperator proper = mix(spec, tol);
    const DensityOperator improper =
        partial_trace(DensityOperator::pure(psi.state()), psi.dims(), Subsystem::first, tol);
    EquivalenceReport report;
    report.state_residual = (proper.matrix() - improper.matrix()).norm();
    if (report.state_residual > tol.op) {
        throw InputError("proper_improper_equivalence: mixture differs from the reduced state");
    }
    Rng rng(seed);
    const std::size_t d = spec.space().dim();
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t rank = 1 + rng.index(d);
        const Projector p = rng.projector(spec.space(), rank);
        const double r = std::abs(proper_probability(p, spec, tol) - improper_probability(p, psi, tol));
        report.max_residual = std::max(report.max_residual, r);
    }
    report.trials = trials;
    return report;
}

BipartiteState canonical_purification(const DensityOperator& rho) {
    const std::size_t d = rho.dim();
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    Vector psi = Vector::Zero(idx(d * d));
    for (Eigen::Index l = 0; l < idx(d); ++l) {
        const double r = std::max(0.0, es.eigenvalues()(l));
        if (r == 0.0) continue;
        // |l>_1 |conj l>_2 keeps tr_2 equal to rho for complex eigenvectors.
        const Vector v = es.eigenvectors().col(l);
        psi += std::sqrt(r) * kron(v, Vector(v.conjugate()));
    }
    return BipartiteState(make_state(HilbertSpace(d * d), psi), {d, d});
}

MixtureSpec spectral_mixture(const DensityOperator& rho, double zero_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    std::vector<MixtureComponent> components;
    double total = 0.0;
    for (Eigen::Index l = es.eigenvalues().size() - 1; l >= 0; --l) {
        const double r = es.eigenvalues()(l);
        if (r <= zero_tol) continue;
        components.push_back({make_state(rho.space(), es.eigenvectors().col(l)), r});
        total += r;
    }
    for (auto& c : components) c.weight /= total;
    return MixtureSpec::make(std::move(components));
}

}  // namespace bornkit
