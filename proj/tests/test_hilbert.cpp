// Copyright 2026 qdyne authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qdyne/hilbert.hpp"

using namespace qdyne;

namespace {

Matrix random_hermitian(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(normal(rng), normal(rng));
    return 0.5 * (m + Matrix(m.adjoint()));
}

}  // namespace

TEST_CASE("annihilation operator ladder action") {
    const int n_fock = 8;
    const Matrix a = build_annihilation(n_fock);

    CHECK((a * fock_state(0, n_fock)).norm() == doctest::Approx(0.0));

    const Vector lowered = a * fock_state(4, n_fock);
    CHECK((lowered - 2.0 * fock_state(3, n_fock)).norm() < 1e-14);

    // Canonical commutation holds away from the truncation edge.
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    for (int n = 0; n <= n_fock - 2; ++n) {
        for (int m = 0; m <= n_fock - 2; ++m) {
            const double expected = n == m ? 1.0 : 0.0;
            CHECK(std::abs(comm(n, m) - expected) < 1e-14);
        }
    }

    CHECK_THROWS_AS(build_annihilation(1), std::invalid_argument);
}

TEST_CASE("qubit-cavity hamiltonian structure") {
    const int n_fock = 6;

    SUBCASE("hermiticity") {
        for (auto conv : {InteractionConvention::MainText, InteractionConvention::Appendix}) {
            const Matrix h = build_jc_hamiltonian(1.0, 0.8, 0.7, n_fock, conv);
            CHECK(hermiticity_error(h) <= 1e-14);
        }
    }

    SUBCASE("uncoupled spectrum splits into qubit and cavity ladders") {
        const Matrix h = build_jc_hamiltonian(1.0, 1.0, 0.0, n_fock);
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        std::vector<double> expected;
        for (int q = 0; q < 2; ++q)
            for (int n = 0; n < n_fock; ++n) expected.push_back((q == 0 ? 0.5 : -0.5) + n);
        std::sort(expected.begin(), expected.end());
        for (int k = 0; k < 2 * n_fock; ++k)
            CHECK(es.eigenvalues()(k) == doctest::Approx(expected[static_cast<std::size_t>(k)]).epsilon(1e-12));
    }

    SUBCASE("resonant single-excitation doublet splits by 2g") {
        // Excitation-exchange convention: the {excited & empty, ground & one
        // photon} block is degenerate at resonance and splits by +-g.
        const double g = 1.0;
        const Matrix h = build_jc_hamiltonian(1.0, 1.0, g, n_fock, InteractionConvention::Appendix);
        const int dim = 2 * n_fock;
        Vector e0 = Vector::Zero(dim);
        e0(0 * n_fock + 0) = 1.0;  // excited, vacuum
        Vector g1 = Vector::Zero(dim);
        g1(1 * n_fock + 1) = 1.0;  // ground, one photon
        Matrix block(2, 2);
        block << e0.dot(h * e0), e0.dot(h * g1), g1.dot(h * e0), g1.dot(h * g1);
        Eigen::SelfAdjointEigenSolver<Matrix> es(block);
        CHECK(es.eigenvalues()(0) == doctest::Approx(0.5 - g).epsilon(1e-12));
        CHECK(es.eigenvalues()(1) == doctest::Approx(0.5 + g).epsilon(1e-12));
    }
}

TEST_CASE("squeezed vacuum construction") {
    SUBCASE("zero squeezing gives the vacuum") {
        const Vector v = build_squeezed_vacuum(0.0, 10);
        CHECK((v - fock_state(0, 10)).norm() < 1e-14);
    }

    SUBCASE("matches the analytic even-level expansion") {
        const int n_fock = 30;
        const double s = 0.25;
        const Vector v = build_squeezed_vacuum(s, n_fock);
        const auto expected = oracles::squeezed_amplitudes(s, n_fock);
        for (int n = 0; n < n_fock; ++n) {
            CHECK(std::abs(v(n).real() - expected[static_cast<std::size_t>(n)]) < 1e-10);
            CHECK(std::abs(v(n).imag()) < 1e-12);
        }
    }

    SUBCASE("odd levels stay empty") {
        const Vector v = build_squeezed_vacuum(0.37, 40);
        for (int n = 1; n < 40; n += 2) CHECK(std::abs(v(n)) <= 1e-10);
    }

    SUBCASE("norm is unit after renormalization") {
        CHECK(build_squeezed_vacuum(0.25, 15).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("inadequate truncation is rejected") {
        CHECK_THROWS_AS(build_squeezed_vacuum(0.5, 6), TruncationError);
        CHECK_THROWS_AS(build_squeezed_vacuum(0.6, 30), std::invalid_argument);
    }
}

TEST_CASE("partial trace over the cavity") {
    const int n_fock = 5;
    std::mt19937_64 rng(7);

    SUBCASE("product state reduces to its qubit factor") {
        const Matrix rho_a = [] {
            Matrix m(2, 2);
            m << 0.7, Complex(0.1, -0.2), Complex(0.1, 0.2), 0.3;
            return m;
        }();
        const Vector vac = fock_state(0, n_fock);
        const Matrix rho = kron(rho_a, Matrix(vac * vac.adjoint()));
        CHECK((partial_trace_cavity(rho, n_fock) - rho_a).cwiseAbs().maxCoeff() < 1e-14);
    }

    SUBCASE("maximally entangled state reduces to the coin") {
        Vector psi = Vector::Zero(2 * n_fock);
        psi(0 * n_fock + 0) = 1.0 / std::sqrt(2.0);
        psi(1 * n_fock + 1) = 1.0 / std::sqrt(2.0);
        const Matrix reduced = partial_trace_cavity(psi * psi.adjoint(), n_fock);
        CHECK((reduced - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    }

    SUBCASE("trace and linearity against direct index summation") {
        for (int rep = 0; rep < 20; ++rep) {
            const Matrix rho = random_hermitian(2 * n_fock, rng);
            const Matrix reduced = partial_trace_cavity(rho, n_fock);
            CHECK(std::abs((reduced.trace() - rho.trace())) < 1e-12);
            // direct summation oracle
            Matrix direct = Matrix::Zero(2, 2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int n = 0; n < n_fock; ++n)
                        direct(i, j) += rho(i * n_fock + n, j * n_fock + n);
            CHECK((reduced - direct).cwiseAbs().maxCoeff() == 0.0);
            CHECK(hermiticity_error(reduced) < 1e-12);
        }
    }

    SUBCASE("product rule with unnormalized cavity factor") {
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix rho_a = random_hermitian(2, rng);
            const Matrix sigma_c = random_hermitian(n_fock, rng);
            const Matrix reduced = partial_trace_cavity(kron(rho_a, sigma_c), n_fock);
            const Matrix expected = sigma_c.trace() * rho_a;
            CHECK((reduced - expected).cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(partial_trace_cavity(Matrix::Identity(7, 7), 3), std::invalid_argument);
    }
}

TEST_CASE("density matrix validation") {
    DensityMatrix rho{0.5 * Matrix::Identity(2, 2), true};
    CHECK_NOTHROW(rho.require_valid());

    DensityMatrix bad{Matrix::Identity(2, 2), true};
    bad.mat(0, 1) = Complex(0.0, 1e-6);
    CHECK_THROWS_AS(bad.require_valid(), NumericError);
}
