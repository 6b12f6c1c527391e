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

#include "bornkit/random.hpp"

#include <cmath>

namespace bornkit {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double Rng::uniform() {
    double u = uniform_(engine_);
    // libstdc++ can round up to exactly 1.0.
    return u < 1.0 ? u : std::nextafter(1.0, 0.0);
}

double Rng::normal() { return normal_(engine_); }

std::size_t Rng::index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return d(engine_);
}

Vector Rng::gaussian(std::size_t dim) {
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = normal();
        const double im = normal();
        v(i) = Complex(re, im);
    }
    return v;
}

StateVector Rng::state(const HilbertSpace& space) { return make_state(space, gaussian(space.dim())); }

Matrix Rng::unitary(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) g.col(j) = gaussian(dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

StateVector Rng::state_in_range(const Projector& p) {
    // Haar on the range: Gaussian coordinates in an orthonormal range basis.
    const Matrix basis = p.range_basis();
    if (basis.cols() == 0) throw InputError("Rng::state_in_range: projector has empty range");
    return make_state(p.space(), basis * gaussian(static_cast<std::size_t>(basis.cols())));
}

Projector Rng::projector(const HilbertSpace& space, std::size_t rank) {
    if (rank > space.dim()) throw InputError("Rng::projector: rank exceeds dimension");
    if (rank == 0) return Projector::zero(space);
    const Matrix u = unitary(space.dim());
    const Matrix cols = u.leftCols(static_cast<Eigen::Index>(rank));
    return Projector::from_operator(Operator(space, cols * cols.adjoint()));
}

}  // namespace bornkit
