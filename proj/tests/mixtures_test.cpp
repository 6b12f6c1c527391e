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

#include "gtest/gtest.h"

#include "bornkit/random.hpp"
#include "support/generators.hpp"

using namespace bornkit;
using bornkit::testing::naive_expectation;
using bornkit::testing::naive_reduced;
using bornkit::testing::span_projector;
using bornkit::testing::state;
using bornkit::testing::vec;

namespace {

MixtureSpec zero_plus() { return MixtureSpec::make({{state({1, 0}), 0.5}, {state({1, 1}), 0.5}}); }

Matrix outer(const Vector& v) { return v * v.adjoint(); }

BipartiteState bipartite(std::initializer_list<Complex> xs, std::size_t d1, std::size_t d2) {
    return BipartiteState(state(xs), {d1, d2});
}

}  // namespace

TEST(MixtureSpec, Validation) {
    EXPECT_THROW(MixtureSpec::make({{state({1, 0}), 0.5}, {state({0, 1}), 0.4}}), InputError);
    EXPECT_THROW(MixtureSpec::make({{state({1, 0}), 0.5}, {state({0, 1, 0}), 0.5}}), InputError);
    EXPECT_THROW(MixtureSpec::make({{state({1, 0}), 1.5}, {state({0, 1}), -0.5}}), InputError);
    EXPECT_THROW(MixtureSpec::make({}), InputError);
    // Counts must reproduce the weights.
    EXPECT_NO_THROW(MixtureSpec::make({{state({1, 0}), 0.25}, {state({0, 1}), 0.75}}, std::vector<std::uint64_t>{1, 3}));
    EXPECT_THROW(MixtureSpec::make({{state({1, 0}), 0.25}, {state({0, 1}), 0.75}}, std::vector<std::uint64_t>{1, 2}),
                 InputError);
    EXPECT_THROW(MixtureSpec::make({{state({1, 0}), 0.25}, {state({0, 1}), 0.75}}, std::vector<std::uint64_t>{1}),
                 InputError);
}

TEST(Mix, Examples) {
    const DensityOperator pure = mix(MixtureSpec::make({{state({1, 1}), 1.0}}));
    EXPECT_LE((pure.matrix() - Matrix::Constant(2, 2, 0.5)).norm(), 1e-15);

    const DensityOperator half = mix(MixtureSpec::make({{state({1, 0}), 0.5}, {state({0, 1}), 0.5}}));
    EXPECT_LE((half.matrix() - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-15);

    // Outer-product oracle, then the literal [[0.75, 0.25], [0.25, 0.25]].
    const Matrix oracle = 0.5 * outer(vec({1, 0})) + 0.5 * outer(state({1, 1}).amplitudes());
    Matrix expected(2, 2);
    expected << 0.75, 0.25, 0.25, 0.25;
    EXPECT_LE((oracle - expected).norm(), 1e-15);
    EXPECT_LE((mix(zero_plus()).matrix() - expected).norm(), 1e-15);
}

TEST(ProperProbability, Examples) {
    const Projector p0 = span_projector(2, {vec({1, 0})});
    // Sub-ensemble sum by hand: 0.5 * 1 + 0.5 * 0.5
    EXPECT_NEAR(proper_probability(p0, zero_plus()), 0.75, 1e-12);
    EXPECT_NEAR(proper_probability(Projector::identity(HilbertSpace(2)), zero_plus()), 1.0, 1e-12);

    const StateVector phi = state({0.6, 0.8});
    EXPECT_NEAR(proper_probability(p0, MixtureSpec::make({{phi, 1.0}})), naive_expectation(p0.matrix(), phi.amplitudes()),
                1e-12);
    EXPECT_THROW(proper_probability(span_projector(3, {vec({1, 0, 0})}), zero_plus()), InputError);
}

TEST(ImproperProbability, Examples) {
    const Projector p0 = span_projector(2, {vec({1, 0})});
    EXPECT_NEAR(improper_probability(p0, bipartite({1, 0, 0, 1}, 2, 2)), 0.5, 1e-12);
    EXPECT_NEAR(improper_probability(p0, BipartiteState(tensor(state({1, 0}), state({1, 1})), {2, 2})), 1.0, 1e-12);

    const BipartiteState psi = bipartite({2, 0, 0, 1}, 2, 2);
    const Matrix reduced = naive_reduced(psi.amplitudes(), 2, 2, true);
    EXPECT_NEAR(reduced(0, 0).real(), 0.8, 1e-15);
    EXPECT_NEAR(improper_probability(p0, psi), 0.8, 1e-12);
    EXPECT_THROW(improper_probability(span_projector(3, {vec({1, 0, 0})}), psi), InputError);
}

TEST(ProperImproperEquivalence, Examples) {
    const MixtureSpec half = MixtureSpec::make({{state({1, 0}), 0.5}, {state({0, 1}), 0.5}});
    const EquivalenceReport bell = proper_improper_equivalence(half, bipartite({1, 0, 0, 1}, 2, 2), 50, 0);
    EXPECT_EQ(bell.trials, 50u);
    EXPECT_LE(bell.max_residual, 1e-10);

    // Purification sqrt(0.8)|00> + sqrt(0.2)|11> of diag(0.8, 0.2).
    const MixtureSpec diag = MixtureSpec::make({{state({1, 0}), 0.8}, {state({0, 1}), 0.2}});
    const BipartiteState pur = bipartite({std::sqrt(0.8), 0, 0, std::sqrt(0.2)}, 2, 2);
    EXPECT_LE(proper_improper_equivalence(diag, pur, 50, 1).max_residual, 1e-10);

    EXPECT_THROW(proper_improper_equivalence(diag, bipartite({1, 0, 0, 1}, 2, 2), 50, 0), InputError);
}

TEST(CanonicalPurification, DiagonalExample) {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.8;
    rho(1, 1) = 0.2;
    const BipartiteState psi = canonical_purification(DensityOperator::from_matrix(HilbertSpace(2), rho));
    EXPECT_LE((naive_reduced(psi.amplitudes(), 2, 2, true) - rho).norm(), 1e-12);
}

// ---- properties ----

TEST(MixturesProperties, RandomSpecsAreDensityOperators) {
    Rng rng(51);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + rng.index(3);
        const std::size_t n = 2 + rng.index(4);
        std::vector<double> w(n);
        double total = 0;
        for (double& x : w) total += (x = rng.uniform() + 0.05);
        std::vector<MixtureComponent> comps;
        for (std::size_t k = 0; k < n; ++k) comps.push_back({rng.state(HilbertSpace(d)), w[k] / total});
        const MixtureSpec spec = MixtureSpec::make(comps);
        const DensityOperator rho = mix(spec);
        EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_LE((rho.matrix() - rho.matrix().adjoint()).norm(), 1e-12);
        EXPECT_GE(rho.spectrum().minCoeff(), -1e-12);

        // Sub-ensemble sum against the brute-force trace.
        const Projector p = rng.projector(HilbertSpace(d), 1 + rng.index(d));
        double sub = 0;
        for (const auto& c : comps) sub += c.weight * naive_expectation(p.matrix(), c.state.amplitudes());
        EXPECT_NEAR(proper_probability(p, spec), sub, 1e-12);
        EXPECT_NEAR(proper_probability(p, spec), (p.matrix() * rho.matrix()).trace().real(), 1e-12);
    }
}

TEST(MixturesProperties, ImproperIdentityOnRandomStates) {
    Rng rng(52);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d1 = 2 + rng.index(3), d2 = 2 + rng.index(3);
        const BipartiteState psi(rng.state(HilbertSpace(d1 * d2)), {d1, d2});
        const Projector p = rng.projector(HilbertSpace(d1), rng.index(d1 + 1));
        const Matrix reduced = naive_reduced(psi.amplitudes(), d1, d2, true);
        EXPECT_NEAR(improper_probability(p, psi), (p.matrix() * reduced).trace().real(), 1e-12);
    }
}

TEST(MixturesProperties, PurificationRoundTrip) {
    Rng rng(53);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + rng.index(3);
        // Random diagonal rho, sometimes with a zero entry.
        Eigen::VectorXd r(static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = rng.uniform();
        if (t % 4 == 0) r(0) = 0;
        r /= r.sum();
        const Matrix rho = r.cast<Complex>().asDiagonal();
        const BipartiteState psi = canonical_purification(DensityOperator::from_matrix(HilbertSpace(d), rho));
        EXPECT_LE((naive_reduced(psi.amplitudes(), d, d, true) - rho).norm(), 1e-12);

        const MixtureSpec spec = spectral_mixture(DensityOperator::from_matrix(HilbertSpace(d), rho));
        EXPECT_LE(proper_improper_equivalence(spec, psi, 20, static_cast<std::uint64_t>(t)).max_residual, 1e-10);
    }
}

TEST(MixturesProperties, EquivalenceWithNonSpectralMixtures) {
    // A non-orthogonal ensemble and the canonical purification of its mix.
    Rng rng(54);
    for (int t = 0; t < 30; ++t) {
        const std::size_t d = 2 + rng.index(3);
        std::vector<MixtureComponent> comps{{rng.state(HilbertSpace(d)), 0.3}, {rng.state(HilbertSpace(d)), 0.7}};
        const MixtureSpec spec = MixtureSpec::make(comps);
        const BipartiteState psi = canonical_purification(mix(spec));
        const EquivalenceReport r = proper_improper_equivalence(spec, psi, 30, static_cast<std::uint64_t>(t));
        EXPECT_LE(r.state_residual, 1e-10);
        EXPECT_LE(r.max_residual, 1e-10);
    }
}
