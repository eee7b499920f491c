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
#include "qdyne/dynamics.hpp"

using namespace qdyne;

namespace {

Matrix random_matrix(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(normal(rng), normal(rng));
    return m;
}

Matrix random_hermitian(int dim, std::mt19937_64& rng) {
    const Matrix m = random_matrix(dim, rng);
    return 0.5 * (m + Matrix(m.adjoint()));
}

SchemeSpec composite_spec(SchemeKind kind, int n_fock = 4) {
    SchemeSpec spec;
    spec.kind = kind;
    spec.physics = {1.0, 1.0, 1.0, 1.0};
    spec.n_fock = n_fock;
    return spec;
}

const std::vector<SchemeKind> kCompositeStochastic = {
    SchemeKind::LinearQsd, SchemeKind::HeterodyneMarginalX, SchemeKind::HeterodyneMarginalY,
    SchemeKind::HomodyneX, SchemeKind::HomodyneY};

}  // namespace

TEST_CASE("gksl derivative is traceless and hermiticity-preserving") {
    std::mt19937_64 rng(21);
    auto rhs = make_rhs(composite_spec(SchemeKind::GkslReference));
    Matrix out;
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix rho = random_hermitian(rhs->rows(), rng);
        rhs->apply(rho, {}, out);
        CHECK(std::abs(out.trace()) < 1e-12 * rho.cwiseAbs().maxCoeff() * rhs->rows());
        CHECK(hermiticity_error(out) < 1e-12 * out.cwiseAbs().maxCoeff() + 1e-14);
    }
}

TEST_CASE("gksl stationary and dark states") {
    SUBCASE("closed system: functions of H are stationary") {
        SchemeSpec spec = composite_spec(SchemeKind::GkslReference);
        spec.physics.kappa = 0.0;
        auto rhs = make_rhs(spec);
        const Matrix h =
            build_jc_hamiltonian(spec.physics.omega_a, spec.physics.omega_c, spec.physics.g,
                                 spec.n_fock, spec.convention);
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        const Matrix rho = es.eigenvectors() *
                           (-es.eigenvalues().array()).exp().matrix().asDiagonal() *
                           es.eigenvectors().adjoint();
        Matrix out;
        rhs->apply(rho / rho.trace().real(), {}, out);
        CHECK(out.cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("decoupled ground state in the vacuum is dark") {
        SchemeSpec spec = composite_spec(SchemeKind::GkslReference);
        spec.physics.g = 0.0;
        auto rhs = make_rhs(spec);
        Matrix rho = Matrix::Zero(rhs->rows(), rhs->rows());
        rho(1 * spec.n_fock + 0, 1 * spec.n_fock + 0) = 1.0;  // ground qubit, empty cavity
        Matrix out;
        rhs->apply(rho, {}, out);
        CHECK(out.cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("every stochastic rhs is complex-linear and hermiticity-preserving") {
    std::mt19937_64 rng(22);
    std::normal_distribution<double> normal;
    std::vector<SchemeSpec> specs;
    for (auto kind : kCompositeStochastic) specs.push_back(composite_spec(kind));
    for (auto kind : {SchemeKind::AdiabaticComplex, SchemeKind::AdiabaticX, SchemeKind::AdiabaticY}) {
        SchemeSpec spec;
        spec.kind = kind;
        spec.physics = {1.0, 1.3, 2.0, 1.0};
        specs.push_back(spec);
    }
    {
        SchemeSpec spec;
        spec.kind = SchemeKind::Hierarchy;
        spec.physics = {1.0, 1.0, 2.0, 1.0};
        spec.hierarchy_order = 2;
        specs.push_back(spec);
    }

    for (const auto& spec : specs) {
        auto rhs = make_rhs(spec);
        const Complex xi{normal(rng), normal(rng)};
        CAPTURE(scheme_name(spec.kind));

        // linearity over complex scalars
        const Complex alpha{normal(rng), normal(rng)};
        const Complex beta{normal(rng), normal(rng)};
        Matrix r1(rhs->rows(), rhs->cols()), r2(rhs->rows(), rhs->cols());
        for (Eigen::Index i = 0; i < r1.rows(); ++i)
            for (Eigen::Index j = 0; j < r1.cols(); ++j) {
                r1(i, j) = Complex(normal(rng), normal(rng));
                r2(i, j) = Complex(normal(rng), normal(rng));
            }
        Matrix d1, d2, dsum;
        rhs->apply(r1, xi, d1);
        rhs->apply(r2, xi, d2);
        rhs->apply(alpha * r1 + beta * r2, xi, dsum);
        CHECK((dsum - alpha * d1 - beta * d2).cwiseAbs().maxCoeff() < 1e-10);

        // hermiticity preservation (square-state schemes)
        if (spec.kind != SchemeKind::Hierarchy) {
            const Matrix h = random_hermitian(rhs->rows(), rng);
            Matrix dh;
            rhs->apply(h, xi, dh);
            CHECK(hermiticity_error(dh) < 1e-12 * (1.0 + dh.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("hermitian-stacked fast path agrees with the reference map") {
    std::mt19937_64 rng(23);
    for (auto kind : kCompositeStochastic) {
        const SchemeSpec spec = composite_spec(kind);
        auto rhs = make_rhs(spec);
        const int d = rhs->rows();
        Matrix stacked(d, 4 * d);
        for (int b = 0; b < 4; ++b) stacked.middleCols(b * d, d) = random_hermitian(d, rng);
        const Complex xi{0.4, -1.1};
        Matrix fast, slow(d, 4 * d), block;
        rhs->apply_blocks(stacked, xi, fast);
        for (int b = 0; b < 4; ++b) {
            rhs->apply(Matrix(stacked.middleCols(b * d, d)), xi, block);
            slow.middleCols(b * d, d) = block;
        }
        CAPTURE(scheme_name(kind));
        CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("linear qsd limiting cases") {
    SchemeSpec spec = composite_spec(SchemeKind::LinearQsd);
    spec.physics.kappa = 0.0;
    auto rhs = make_rhs(spec);
    std::mt19937_64 rng(24);
    const Matrix rho = random_hermitian(rhs->rows(), rng);
    Matrix out;
    rhs->apply(rho, {}, out);
    const Matrix h = build_jc_hamiltonian(1.0, 1.0, 1.0, spec.n_fock);
    const Matrix expected = Complex(0, -1) * (h * rho - rho * h);
    CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("marginal and quadrature schemes reduce to their drift at zero record") {
    const int nf = 4;
    const Matrix a = lift_cavity(build_annihilation(nf));
    const Matrix a2 = a * a;
    const Matrix h = build_jc_hamiltonian(1.0, 1.0, 1.0, nf);
    const Matrix num = a.adjoint() * a;
    std::mt19937_64 rng(25);
    const Matrix rho = random_hermitian(2 * nf, rng);
    const Matrix comm = Complex(0, -1) * (h * rho - rho * h) - 0.5 * (num * rho + rho * num);

    Matrix out;
    SUBCASE("x-quadrature keeps the negative two-photon term") {
        auto rhs = make_rhs(composite_spec(SchemeKind::HomodyneX, nf));
        rhs->apply(rho, {}, out);
        const Matrix expected =
            comm - 0.5 * (a2 * rho + rho * Matrix(a2.adjoint()));
        CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("x marginal keeps sandwich and half-weight two-photon terms") {
        auto rhs = make_rhs(composite_spec(SchemeKind::HeterodyneMarginalX, nf));
        rhs->apply(rho, {}, out);
        const Matrix expected = comm + 0.5 * (a * rho * Matrix(a.adjoint())) -
                                0.25 * (a2 * rho + rho * Matrix(a2.adjoint()));
        CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("vacuum dark state for the x marginal") {
        SchemeSpec spec = composite_spec(SchemeKind::HeterodyneMarginalX, nf);
        spec.physics.g = 0.0;
        auto rhs = make_rhs(spec);
        Matrix dark = Matrix::Zero(2 * nf, 2 * nf);
        dark(1 * nf + 0, 1 * nf + 0) = 1.0;
        rhs->apply(dark, {}, out);
        CHECK(out.cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("adiabatic rates") {
    SUBCASE("closed forms") {
        auto r = adiabatic_rates(1.0, 2.0, 0.0);
        CHECK(r.gamma == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.omega == 0.0);
        r = adiabatic_rates(1.0, 1.0, 0.0);
        CHECK(r.gamma == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(r.omega == 0.0);
        // delta = kappa/2 makes the two rates equal
        r = adiabatic_rates(0.7, 1.6, 0.8);
        CHECK(r.gamma == doctest::Approx(r.omega).epsilon(1e-14));
    }
    SUBCASE("vanishing kappa is rejected") {
        CHECK_THROWS_AS(adiabatic_rates(1.0, 0.0, 0.5), std::invalid_argument);
        SchemeSpec spec;
        spec.kind = SchemeKind::AdiabaticComplex;
        spec.physics.kappa = 0.0;
        CHECK_THROWS_AS(make_rhs(spec), std::invalid_argument);
    }
    SUBCASE("rhs carries the same constants") {
        SchemeSpec spec;
        spec.kind = SchemeKind::AdiabaticX;
        spec.physics = {1.0, 1.4, 2.0, 0.9};
        auto rhs = make_rhs(spec);
        const auto direct =
            adiabatic_rates(spec.physics.g, spec.physics.kappa, spec.physics.delta());
        const auto wired = rhs_adiabatic_rates(*rhs);
        CHECK(wired.gamma == direct.gamma);
        CHECK(wired.omega == direct.omega);
    }
}

TEST_CASE("adiabatic ground state is free of dissipation") {
    for (auto kind : {SchemeKind::AdiabaticComplex, SchemeKind::AdiabaticX, SchemeKind::AdiabaticY}) {
        SchemeSpec spec;
        spec.kind = kind;
        spec.physics = {1.0, 1.5, 2.0, 1.0};
        auto rhs = make_rhs(spec);
        Matrix ground = Matrix::Zero(2, 2);
        ground(1, 1) = 1.0;
        Matrix out;
        rhs->apply(ground, Complex{0.7, -0.3}, out);
        CHECK(out.cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("hierarchy layout and packing") {
    HierarchyLayout layout(2);
    CHECK(layout.block_count() == 6);
    CHECK(layout.slot(0, 0) == 0);
    CHECK(layout.slot(1, 1) == 4);
    CHECK(layout.slot(2, 1) == -1);
    CHECK_THROWS_AS(HierarchyLayout(0), std::invalid_argument);

    const Matrix rho = 0.5 * (Matrix::Identity(2, 2) + sigma_x());
    const Matrix packed = hierarchy_initial_state(rho, 2);
    CHECK((hierarchy_block(packed, layout, 0, 0) - rho).cwiseAbs().maxCoeff() == 0.0);
    CHECK(hierarchy_block(packed, layout, 1, 0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hierarchy first level reaches the closed-form stationary block") {
    // Freeze the base block at the excited projector and let rho^{10} relax:
    // it must land on g^2/(kappa/2 + i delta) |1><0|.
    SchemeSpec spec;
    spec.kind = SchemeKind::Hierarchy;
    spec.physics = {1.0, 1.4, 3.0, 0.6};  // omega_a, omega_c, kappa, g
    spec.hierarchy_order = 1;
    auto rhs = make_rhs(spec);
    HierarchyLayout layout(1);

    Matrix excited = Matrix::Zero(2, 2);
    excited(0, 0) = 1.0;
    Matrix state = hierarchy_initial_state(excited, 1);

    const double dt = 1e-3;
    auto frozen_rhs = [&](const Matrix& s, Matrix& out) {
        rhs->apply(s, {}, out);
        out.block<2, 2>(0, 0).setZero();  // hold the base block fixed
    };
    Matrix k1, k2, k3, k4, stage;
    for (int step = 0; step < 8000; ++step) {  // t = 8, transient ~ e^{-kappa t / 2}
        frozen_rhs(state, k1);
        stage = state + 0.5 * dt * k1;
        frozen_rhs(stage, k2);
        stage = state + 0.5 * dt * k2;
        frozen_rhs(stage, k3);
        stage = state + dt * k3;
        frozen_rhs(stage, k4);
        state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const Matrix b10 = hierarchy_block(state, layout, 1, 0);
    const double delta = spec.physics.delta();
    const Complex expected =
        spec.physics.g * spec.physics.g / Complex(0.5 * spec.physics.kappa, delta);
    CHECK(std::abs(b10(1, 0) - expected) < 1e-6);
    CHECK(std::abs(b10(0, 0)) < 1e-9);
    CHECK(std::abs(b10(0, 1)) < 1e-9);
    CHECK(std::abs(b10(1, 1)) < 1e-9);
}
