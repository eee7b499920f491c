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

#include "qdyne/povm.hpp"

using namespace qdyne;

namespace {

SchemeSpec paper_spec(SchemeKind kind, int n_fock) {
    SchemeSpec spec;
    spec.kind = kind;
    spec.physics = {1.0, 1.0, 1.0, 1.0};
    spec.n_fock = n_fock;
    return spec;
}

NoiseParams noise_for(const SchemeSpec& spec, double t_end, std::uint64_t seed) {
    NoiseParams np;
    np.kappa = spec.physics.kappa;
    np.gamma_ou = 15.0;
    np.dt = 1.0 / 160.0;
    np.t_end = t_end;
    np.seed = seed;
    return np;
}

}  // namespace

TEST_CASE("povm matrix from four-vector") {
    const Matrix coin = povm_matrix({1.0, Eigen::Vector3d::Zero()});
    CHECK((coin - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

    const Matrix proj = povm_matrix({1.0, Eigen::Vector3d(0, 0, 1)});
    Eigen::SelfAdjointEigenSolver<Matrix> es(proj);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));

    Eigen::SelfAdjointEigenSolver<Matrix> es2(povm_matrix({0.8, Eigen::Vector3d(0, 0, 0.5)}));
    CHECK(es2.eigenvalues()(0) == doctest::Approx(0.15));
    CHECK(es2.eigenvalues()(1) == doctest::Approx(0.65));
}

TEST_CASE("reconstruction starts from the unit four-vector") {
    const SchemeSpec spec = paper_spec(SchemeKind::HeterodyneMarginalX, 4);
    const NoiseParams np = noise_for(spec, 0.5, 4);
    const ComplexNoisePath path = generate_complex_path(np);
    const IntegratorConfig cfg{np.dt, np.t_end, 16};
    const auto traj = reconstruct_povm(spec, {}, path, cfg, 0);
    CHECK(traj.fourvectors.front().mu == 1.0);
    CHECK(traj.fourvectors.front().bloch.norm() == 0.0);
    CHECK(traj.times.front() == 0.0);
}

TEST_CASE("decoupled qubit leaves no trace in the record") {
    SchemeSpec spec = paper_spec(SchemeKind::LinearQsd, 4);
    spec.physics.g = 0.0;
    const NoiseParams np = noise_for(spec, 1.0, 9);
    const ComplexNoisePath path = generate_complex_path(np);
    const IntegratorConfig cfg{np.dt, np.t_end, 16};
    const auto traj = reconstruct_povm(spec, {}, path, cfg, 0);
    for (const auto& v : traj.fourvectors) CHECK(v.bloch.norm() < 1e-9);
}

TEST_CASE("tomography equals direct matrix-unit propagation") {
    // The four-state reconstruction and the qubit-basis superoperator columns
    // encode the same linear functional of the initial qubit state.
    const SchemeSpec spec = paper_spec(SchemeKind::HeterodyneMarginalX, 3);
    const NoiseParams np = noise_for(spec, 0.8, 12);
    const ComplexNoisePath path = generate_complex_path(np);
    const IntegratorConfig cfg{np.dt, np.t_end, 16};

    const auto traj = reconstruct_povm(spec, {}, path, cfg, 0);

    const Vector vac = fock_state(0, spec.n_fock);
    const Matrix proj = vac * vac.adjoint();
    std::vector<std::vector<Complex>> unit_traces(4);
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            Matrix unit = Matrix::Zero(2, 2);
            unit(k, l) = 1.0;
            auto rhs = make_rhs(spec);
            std::vector<Complex>& traces = unit_traces[static_cast<std::size_t>(2 * k + l)];
            integrate_observe(*rhs, kron(unit, proj), &path, cfg,
                              [&](int, double, const Matrix& s) { traces.push_back(s.trace()); });
        }
    }
    for (std::size_t t = 0; t < traj.times.size(); ++t) {
        // F_{lk} = tr(G[|k><l| (x) P]) / 2
        Matrix f(2, 2);
        f(0, 0) = 0.5 * unit_traces[0][t];
        f(1, 0) = 0.5 * unit_traces[1][t];  // from |0><1|
        f(0, 1) = 0.5 * unit_traces[2][t];  // from |1><0|
        f(1, 1) = 0.5 * unit_traces[3][t];
        const Matrix g = povm_matrix(traj.fourvectors[t]);
        CHECK((f - g).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("hierarchy reconstruction matches the composite one on a vacuum cavity") {
    SchemeSpec composite = paper_spec(SchemeKind::LinearQsd, 2);
    composite.physics.kappa = 2.0;
    composite.convention = InteractionConvention::Appendix;
    SchemeSpec hierarchy = composite;
    hierarchy.kind = SchemeKind::Hierarchy;
    hierarchy.hierarchy_order = 4;

    const NoiseParams np = noise_for(composite, 1.0, 77);
    const ComplexNoisePath path = generate_complex_path(np);
    const IntegratorConfig cfg{np.dt, np.t_end, 20};

    const auto a = reconstruct_povm(composite, {}, path, cfg, 0);
    const auto b = reconstruct_povm(hierarchy, {}, path, cfg, 0);
    REQUIRE(a.times.size() == b.times.size());
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        CHECK(std::abs(a.fourvectors[k].mu - b.fourvectors[k].mu) < 1e-8);
        CHECK((a.fourvectors[k].bloch - b.fourvectors[k].bloch).norm() < 1e-8);
    }
}

TEST_CASE("reconstructed effects stay positive along a long record") {
    const SchemeSpec spec = paper_spec(SchemeKind::HomodyneX, 8);
    const NoiseParams np = noise_for(spec, 4.0, 2024);
    const ComplexNoisePath path = generate_complex_path(np);
    const IntegratorConfig cfg{np.dt, np.t_end, 32};
    const auto traj = reconstruct_povm(spec, {}, path, cfg, 0);
    CHECK(traj.diag.min_eigenvalue >= -1e-6);
    CHECK(traj.diag.positivity_violations == 0);
}

TEST_CASE("the effect depends only on the record up to t") {
    const SchemeSpec spec = paper_spec(SchemeKind::HomodyneX, 3);
    const NoiseParams np = noise_for(spec, 1.0, 5);
    ComplexNoisePath path = generate_complex_path(np);
    const IntegratorConfig cfg{np.dt, np.t_end, 40};  // records every 0.25

    const auto full = reconstruct_povm(spec, {}, path, cfg, 0);

    // Scramble the record strictly after t* = 0.5.
    const auto cut = static_cast<std::size_t>(std::llround(0.5 / np.dt));
    for (std::size_t i = cut + 1; i < path.x.values.size(); ++i) {
        path.x.values[i] = -3.0 * path.x.values[i] + 1.0;
        path.y.values[i] = 2.0;
    }
    const auto scrambled = reconstruct_povm(spec, {}, path, cfg, 0);
    for (std::size_t k = 0; k < full.times.size(); ++k) {
        if (full.times[k] > 0.5 + 1e-12) continue;
        CHECK(full.fourvectors[k].mu == scrambled.fourvectors[k].mu);
        CHECK((full.fourvectors[k].bloch - scrambled.fourvectors[k].bloch).norm() == 0.0);
    }
}

TEST_CASE("normalization check: mean effect is the unit four-vector") {
    SUBCASE("composite scheme") {
        const SchemeSpec spec = paper_spec(SchemeKind::HeterodyneMarginalX, 4);
        NoiseParams base = noise_for(spec, 1.0, 40);
        const IntegratorConfig cfg{base.dt, base.t_end, 40};
        const auto report = mc_normalization_check(spec, {}, {250, 40, 0}, base, cfg);
        CHECK(report.max_dev_over_sem < 5.0);
    }
    SUBCASE("adiabatic scheme") {
        // Qubit-only propagation is cheap; a wide OU bandwidth keeps the
        // finite-bandwidth residual inside the statistical gate.
        SchemeSpec spec;
        spec.kind = SchemeKind::AdiabaticY;
        spec.physics = {1.0, 1.0, 2.0, 1.0};
        NoiseParams base = noise_for(spec, 1.5, 41);
        base.kappa = spec.physics.kappa;
        base.gamma_ou = 60.0;
        base.dt = 1.0 / 640.0;
        const IntegratorConfig cfg{base.dt, base.t_end, 192};
        const auto report = mc_normalization_check(spec, {}, {600, 41, 0}, base, cfg);
        CHECK(report.max_dev_over_sem < 5.0);
    }
}

TEST_CASE("reconstruction rejects unsuitable schemes") {
    const SchemeSpec gksl = paper_spec(SchemeKind::GkslReference, 3);
    const NoiseParams np = noise_for(gksl, 0.5, 1);
    const ComplexNoisePath path = generate_complex_path(np);
    const IntegratorConfig cfg{np.dt, np.t_end, 8};
    CHECK_THROWS_AS(reconstruct_povm(gksl, {}, path, cfg, 0), std::invalid_argument);

    SchemeSpec hier = paper_spec(SchemeKind::Hierarchy, 3);
    hier.hierarchy_order = 2;
    CavityState squeezed{CavityState::Kind::Squeezed, 0.1, 15};
    CHECK_THROWS_AS(reconstruct_povm(hier, squeezed, path, cfg, 0), std::invalid_argument);
}
