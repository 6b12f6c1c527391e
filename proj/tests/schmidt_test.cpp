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
#include <numbers>

#include "gtest/gtest.h"

#include "bornkit/random.hpp"
#include "support/generators.hpp"

using namespace bornkit;
using bornkit::testing::naive_kron;
using bornkit::testing::naive_reduced;
using bornkit::testing::span_projector;
using bornkit::testing::state;
using bornkit::testing::vec;

namespace {

const double kRt2 = std::sqrt(2.0);
const double kRt5 = std::sqrt(5.0);
constexpr double kPi = std::numbers::pi;

BipartiteState bipartite(std::initializer_list<Complex> xs, std::size_t d1, std::size_t d2) {
    return BipartiteState(state(xs), {d1, d2});
}

BipartiteState bell() { return bipartite({1, 0, 0, 1}, 2, 2); }

// (U1 ⊗ U2) psi - psi with the Kronecker product built by index loops.
double brute_envariance(const BipartiteState& psi, const LocalPair& pair) {
    const Matrix u = naive_kron(pair.first.matrix(), pair.second.matrix());
    return (u * psi.amplitudes() - psi.amplitudes()).norm();
}

Matrix columns(std::initializer_list<Vector> cols) {
    Matrix m(cols.begin()->size(), static_cast<Eigen::Index>(cols.size()));
    Eigen::Index c = 0;
    for (const auto& v : cols) m.col(c++) = v;
    return m;
}

std::vector<double> sorted_desc(std::vector<double> xs) {
    std::sort(xs.rbegin(), xs.rend());
    return xs;
}

}  // namespace

TEST(BipartiteState, RejectsInconsistentDims) {
    EXPECT_THROW(BipartiteState(state({1, 0, 0, 1}), {3, 2}), InputError);
}

TEST(SchmidtDecompose, Examples) {
    const SchmidtForm b = schmidt_decompose(bell());
    ASSERT_EQ(b.rank(), 2u);
    EXPECT_NEAR(b.coefficients()[0], 1 / kRt2, 1e-12);
    EXPECT_NEAR(b.coefficients()[1], 1 / kRt2, 1e-12);

    const SchmidtForm p = schmidt_decompose(BipartiteState(tensor(state({1, 0}), state({1, 1})), {2, 2}));
    ASSERT_EQ(p.rank(), 1u);
    EXPECT_NEAR(p.coefficients()[0], 1.0, 1e-12);

    const BipartiteState psi = bipartite({2, 0, 0, 1}, 2, 2);
    const SchmidtForm f = schmidt_decompose(psi);
    ASSERT_EQ(f.rank(), 2u);
    // Oracle: square roots of the reduced-state eigenvalues.
    Eigen::SelfAdjointEigenSolver<Matrix> es(naive_reduced(psi.amplitudes(), 2, 2, false));
    EXPECT_NEAR(f.coefficients()[0], std::sqrt(es.eigenvalues()(1)), 1e-12);
    EXPECT_NEAR(f.coefficients()[1], std::sqrt(es.eigenvalues()(0)), 1e-12);
    EXPECT_NEAR(f.coefficients()[0], 2 / kRt5, 1e-12);
    EXPECT_NEAR(f.coefficients()[1], 1 / kRt5, 1e-12);
}

TEST(SchmidtDecompose, PhaseConventionAndTieBreak) {
    // Bell: equal coefficients, ordered by the first nonzero index of basis1.
    const SchmidtForm b = schmidt_decompose(bipartite({0, 1, Complex(0, 1), 0}, 2, 2));
    ASSERT_EQ(b.rank(), 2u);
    for (Eigen::Index i = 0; i < 2; ++i) {
        Eigen::Index lead = 0;
        while (std::abs(b.basis1()(lead, i)) <= 1e-10) ++lead;
        EXPECT_EQ(lead, i);
        EXPECT_NEAR(b.basis1()(lead, i).imag(), 0.0, 1e-15);
        EXPECT_GT(b.basis1()(lead, i).real(), 0.0);
    }
}

TEST(SchmidtDecompose, IsDeterministic) {
    Rng rng(3);
    const BipartiteState psi(rng.state(HilbertSpace(12)), {3, 4});
    const SchmidtForm a = schmidt_decompose(psi);
    const SchmidtForm b = schmidt_decompose(psi);
    EXPECT_EQ(a.basis1(), b.basis1());
    EXPECT_EQ(a.basis2(), b.basis2());
    EXPECT_TRUE(std::equal(a.coefficients().begin(), a.coefficients().end(), b.coefficients().begin()));
}

TEST(Reconstruct, Examples) {
    const SchmidtForm single = SchmidtForm::make({1.0}, columns({vec({1, 0})}), columns({vec({0, 1})}));
    EXPECT_LE((reconstruct(single).amplitudes() - vec({0, 1, 0, 0})).norm(), 1e-15);

    EXPECT_LE((reconstruct(schmidt_decompose(bell())).amplitudes() - bell().amplitudes()).norm(), 1e-12);

    Rng rng(4);
    const BipartiteState psi(rng.state(HilbertSpace(12)), {3, 4});
    EXPECT_LE((reconstruct(schmidt_decompose(psi)).amplitudes() - psi.amplitudes()).norm(), 1e-10);
}

TEST(SchmidtForm, RejectsInvalidForms) {
    const Matrix e0 = columns({vec({1, 0})});
    EXPECT_THROW(SchmidtForm::make({0.5}, e0, e0), InputError);                     // not normalized
    EXPECT_THROW(SchmidtForm::make({1 / kRt5, 2 / kRt5}, columns({vec({1, 0}), vec({0, 1})}),
                                   columns({vec({1, 0}), vec({0, 1})})),
                 InputError);                                                       // ascending
    EXPECT_THROW(SchmidtForm::make({1 / kRt2, 1 / kRt2}, columns({vec({1, 0}), vec({1, 0})}),
                                   columns({vec({1, 0}), vec({0, 1})})),
                 InputError);                                                       // not orthonormal
}

TEST(TwinUnitary, Examples) {
    const SchmidtForm b = schmidt_decompose(bell());
    const std::vector<double> zero{0, 0};
    const LocalPair id = twin_unitary(b, zero);
    EXPECT_LE((id.first.matrix() - Matrix::Identity(2, 2)).norm(), 1e-15);
    EXPECT_LE((id.second.matrix() - Matrix::Identity(2, 2)).norm(), 1e-15);

    const std::vector<double> phases{kPi / 3, kPi / 7};
    const LocalPair pair = twin_unitary(b, phases);
    EXPECT_TRUE(pair.first.is_unitary());
    EXPECT_TRUE(pair.second.is_unitary());
    for (Eigen::Index i = 0; i < 2; ++i) {
        const Vector v1 = b.basis1().col(i);
        const Vector v2 = b.basis2().col(i);
        const Complex e = std::polar(1.0, phases[static_cast<std::size_t>(i)]);
        EXPECT_LE((pair.first.matrix() * v1 - e * v1).norm(), 1e-12);
        EXPECT_LE((pair.second.matrix() * v2 - std::conj(e) * v2).norm(), 1e-12);
    }
    EXPECT_LE(brute_envariance(bell(), pair), 1e-12);
    EXPECT_LE(check_envariance(bell(), pair.first, pair.second), 1e-12);

    const BipartiteState prod(tensor(state({1, 0}), state({1, 1})), {2, 2});
    const std::vector<double> pi{kPi};
    EXPECT_LE(brute_envariance(prod, twin_unitary(schmidt_decompose(prod), pi)), 1e-12);

    const std::vector<double> wrong{0.1};
    EXPECT_THROW(twin_unitary(b, wrong), InputError);
}

TEST(TwinUnitary, IdentityOnComplement) {
    // Rank 1 in 3x3: vectors orthogonal to the Schmidt supports are untouched.
    const BipartiteState psi(tensor(state({1, 0, 0}), state({0, 1, 0})), {3, 3});
    const std::vector<double> phases{0.7};
    const LocalPair pair = twin_unitary(schmidt_decompose(psi), phases);
    EXPECT_LE((pair.first.matrix() * vec({0, 1, 0}) - vec({0, 1, 0})).norm(), 1e-12);
    EXPECT_LE((pair.second.matrix() * vec({0, 0, 1}) - vec({0, 0, 1})).norm(), 1e-12);
}

TEST(SwapWitness, Examples) {
    const std::vector<std::size_t> t{1, 0};
    const LocalPair bell_swap = swap_witness(schmidt_decompose(bell()), t);
    EXPECT_LE(brute_envariance(bell(), bell_swap), 1e-10);
    // The swap on factor 1 alone is not envariant.
    EXPECT_GT((naive_kron(bell_swap.first.matrix(), Matrix::Identity(2, 2)) * bipartite({1, 0, 0, 0}, 2, 2).amplitudes() -
               bipartite({1, 0, 0, 0}, 2, 2).amplitudes())
                  .norm(),
              0.5);

    EXPECT_THROW(swap_witness(schmidt_decompose(bipartite({2, 0, 0, 1}, 2, 2)), t), InputError);

    const BipartiteState uniform = bipartite({1, 0, 0, 0, 1, 0, 0, 0, 1}, 3, 3);
    const std::vector<std::size_t> cycle{1, 2, 0};
    const LocalPair c = swap_witness(schmidt_decompose(uniform), cycle);
    EXPECT_TRUE(c.first.is_unitary());
    EXPECT_LE(brute_envariance(uniform, c), 1e-10);
    EXPECT_LE(check_envariance(uniform, c.first, c.second), 1e-10);

    const std::vector<std::size_t> not_perm{0, 0, 1};
    EXPECT_THROW(swap_witness(schmidt_decompose(uniform), not_perm), InputError);
}

TEST(SwapWitness, FixedIndicesMayHaveDistinctCoefficients) {
    // Coefficients (a, b, b): swapping the equal pair is allowed.
    const double a = std::sqrt(0.5), b = 0.5;
    const BipartiteState psi = bipartite({a, 0, 0, 0, b, 0, 0, 0, b}, 3, 3);
    const std::vector<std::size_t> perm{0, 2, 1};
    EXPECT_LE(brute_envariance(psi, swap_witness(schmidt_decompose(psi), perm)), 1e-10);
}

TEST(CheckEnvariance, Examples) {
    const HilbertSpace s(2);
    EXPECT_EQ(check_envariance(bell(), Operator::identity(s), Operator::identity(s)), 0.0);

    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    // ||(σx ⊗ I)Bell - Bell|| = || (|10> + |01>)/√2 - (|00> + |11>)/√2 || = √2.
    const double oracle = (naive_kron(x, Matrix::Identity(2, 2)) * bell().amplitudes() - bell().amplitudes()).norm();
    EXPECT_NEAR(oracle, kRt2, 1e-15);
    EXPECT_NEAR(check_envariance(bell(), Operator(s, x), Operator::identity(s)), kRt2, 1e-12);

    Matrix not_unitary = Matrix::Identity(2, 2);
    not_unitary(0, 0) = 2;
    EXPECT_THROW(check_envariance(bell(), Operator(s, not_unitary), Operator::identity(s)), InputError);
    EXPECT_THROW(check_envariance(bell(), Operator::identity(HilbertSpace(3)), Operator::identity(s)), InputError);
}

TEST(SchmidtProbabilities, Examples) {
    const auto b = schmidt_probabilities(schmidt_decompose(bell()));
    ASSERT_EQ(b.size(), 2u);
    EXPECT_NEAR(b[0], 0.5, 1e-12);
    EXPECT_NEAR(b[1], 0.5, 1e-12);

    const auto one = schmidt_probabilities(schmidt_decompose(BipartiteState(tensor(state({1, 0}), state({0, 1})), {2, 2})));
    ASSERT_EQ(one.size(), 1u);
    EXPECT_NEAR(one[0], 1.0, 1e-12);

    const SchmidtForm f = schmidt_decompose(bipartite({2, 0, 0, 1}, 2, 2));
    const auto p = schmidt_probabilities(f);
    EXPECT_NEAR(p[0], f.coefficients()[0] * f.coefficients()[0], 1e-15);
    EXPECT_NEAR(p[0], 0.8, 1e-12);
    EXPECT_NEAR(p[1], 0.2, 1e-12);
}

TEST(SublemmaCheck, Examples) {
    const SublemmaReport id = sublemma_check(bell(), Projector::identity(HilbertSpace(2)));
    EXPECT_TRUE(id.holds);

    EXPECT_THROW(sublemma_check(bell(), span_projector(2, {vec({1, 0})})), InputError);

    // Factor 2 confined to span{|0>, |1>} inside d2 = 3.
    const BipartiteState psi = bipartite({0.6, 0, 0, 0, 0.8, 0}, 2, 3);
    const SublemmaReport r = sublemma_check(psi, span_projector(3, {vec({1, 0, 0}), vec({0, 1, 0})}));
    EXPECT_TRUE(r.holds);
    EXPECT_LE(r.max_residual, 1e-12);
    EXPECT_LE(r.reduced_state_residual, 1e-12);
}

// ---- properties ----

TEST(SchmidtProperties, RoundTripAndSpectrum) {
    Rng rng(21);
    for (std::size_t d1 : {2, 3, 4}) {
        for (std::size_t d2 : {2, 3, 4}) {
            for (int trial = 0; trial < 10; ++trial) {
                // Mix generic states with low-rank ones.
                Vector amp;
                if (trial % 3 == 0) {
                    amp = kron(rng.state(HilbertSpace(d1)).amplitudes(), rng.state(HilbertSpace(d2)).amplitudes());
                } else {
                    amp = rng.state(HilbertSpace(d1 * d2)).amplitudes();
                }
                const BipartiteState psi(make_state(HilbertSpace(d1 * d2), amp), {d1, d2});
                const SchmidtForm f = schmidt_decompose(psi);
                EXPECT_LE((reconstruct(f).amplitudes() - psi.amplitudes()).norm(), 1e-10);

                Eigen::SelfAdjointEigenSolver<Matrix> es(naive_reduced(psi.amplitudes(), d1, d2, false));
                std::vector<double> oracle;
                for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
                    const double ev = es.eigenvalues()(i);
                    if (ev > 1e-12) oracle.push_back(std::sqrt(ev));
                }
                oracle = sorted_desc(oracle);
                ASSERT_EQ(oracle.size(), f.rank());
                for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(f.coefficients()[i], oracle[i], 1e-8);

                const auto probs = schmidt_probabilities(f);
                double total = 0;
                for (double x : probs) {
                    EXPECT_GE(x, 0.0);
                    total += x;
                }
                EXPECT_NEAR(total, 1.0, 1e-10);
            }
        }
    }
}

TEST(SchmidtProperties, TwinUnitariesAreEnvariant) {
    Rng rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d1 = 2 + rng.index(3), d2 = 2 + rng.index(3);
        const BipartiteState psi(rng.state(HilbertSpace(d1 * d2)), {d1, d2});
        const SchmidtForm f = schmidt_decompose(psi);
        std::vector<double> phases;
        for (std::size_t i = 0; i < f.rank(); ++i) phases.push_back(2 * kPi * rng.uniform());
        const LocalPair pair = twin_unitary(f, phases);
        EXPECT_LE(check_envariance(psi, pair.first, pair.second), 1e-10);
        EXPECT_LE(brute_envariance(psi, pair), 1e-10);
    }
}

TEST(SchmidtProperties, SwapWitnessOnRandomUniformStates) {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t r = 2 + rng.index(3);
        const std::size_t d1 = r + rng.index(2), d2 = r + rng.index(2);
        const Matrix u1 = rng.unitary(d1), u2 = rng.unitary(d2);
        Vector amp = Vector::Zero(static_cast<Eigen::Index>(d1 * d2));
        for (std::size_t i = 0; i < r; ++i) amp += kron(u1.col(static_cast<Eigen::Index>(i)), u2.col(static_cast<Eigen::Index>(i)));
        const BipartiteState psi(make_state(HilbertSpace(d1 * d2), amp), {d1, d2});
        std::vector<std::size_t> perm(r);
        for (std::size_t i = 0; i < r; ++i) perm[i] = (i + 1) % r;
        EXPECT_LE(brute_envariance(psi, swap_witness(schmidt_decompose(psi), perm)), 1e-10);
    }
}

TEST(SchmidtProperties, SublemmaHoldsForSupportExtensions) {
    Rng rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d1 = 2 + rng.index(3), d2 = 2 + rng.index(3);
        // Low-rank psi so that the support has a proper complement.
        const std::size_t r = 1 + rng.index(std::min(d1, d2) - 1 + 1);
        const Matrix u1 = rng.unitary(d1), u2 = rng.unitary(d2);
        Vector amp = Vector::Zero(static_cast<Eigen::Index>(d1 * d2));
        for (std::size_t i = 0; i < r; ++i)
            amp += (rng.uniform() + 0.1) * kron(u1.col(static_cast<Eigen::Index>(i)), u2.col(static_cast<Eigen::Index>(i)));
        const BipartiteState psi(make_state(HilbertSpace(d1 * d2), amp), {d1, d2});
        const SchmidtForm f = schmidt_decompose(psi);

        // Q2 = support ⊕ random orthogonal extension.
        const Projector support = f.support(Subsystem::second);
        const std::size_t extra = rng.index(d2 - support.rank() + 1);
        std::vector<Vector> span;
        for (Eigen::Index c = 0; c < f.basis2().cols(); ++c) span.push_back(f.basis2().col(c));
        if (extra > 0) {
            const Matrix comp = support.complement().range_basis();
            const Matrix mix = comp * rng.unitary(static_cast<std::size_t>(comp.cols()));
            for (std::size_t e = 0; e < extra; ++e) span.push_back(mix.col(static_cast<Eigen::Index>(e)));
        }
        const Projector q2 = projector_from_span(HilbertSpace(d2), span);
        const SublemmaReport rep = sublemma_check(psi, q2);
        EXPECT_TRUE(rep.holds);
        EXPECT_LE(rep.max_residual, 1e-10);
    }
}
