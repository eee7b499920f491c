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

#include "qdyne/povm.hpp"

#include <cmath>

namespace qdyne {

namespace {

constexpr double kPositivityTol = 1e-6;

std::vector<Matrix> tomography_states() {
    const Matrix id = qubit_identity();
    return {0.5 * id, 0.5 * (id + sigma_x()), 0.5 * (id + sigma_y()), 0.5 * (id + sigma_z())};
}

}  // namespace

Matrix povm_matrix(const QubitFourVector& v) {
    Matrix f = 0.5 * v.mu * qubit_identity();
    f += 0.5 * (v.bloch.x() * sigma_x() + v.bloch.y() * sigma_y() + v.bloch.z() * sigma_z());
    return f;
}

void PovmDiagnostics::absorb(const QubitFourVector& v) {
    const double a = v.bloch_norm();
    const double lambda_min = 0.5 * (v.mu - a);
    const double excess = v.mu + a - 2.0;
    min_eigenvalue = std::min(min_eigenvalue, lambda_min);
    max_window_excess = std::max(max_window_excess, excess);
    if (lambda_min < -kPositivityTol) ++positivity_violations;
    if (excess > kPositivityTol) ++window_violations;
}

void PovmDiagnostics::merge(const PovmDiagnostics& other) {
    positivity_violations += other.positivity_violations;
    window_violations += other.window_violations;
    min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
    max_window_excess = std::max(max_window_excess, other.max_window_excess);
}

PovmTrajectory reconstruct_povm(const SchemeSpec& spec, const CavityState& cavity,
                                const ComplexNoisePath& noise, const IntegratorConfig& cfg,
                                std::uint64_t stream_id) {
    spec.validate();
    if (spec.kind == SchemeKind::GkslReference)
        throw std::invalid_argument("reconstruct_povm: needs a stochastic scheme");
    if (spec.kind == SchemeKind::Hierarchy && cavity.kind != CavityState::Kind::Vacuum)
        throw std::invalid_argument("reconstruct_povm: hierarchy assumes a vacuum cavity");

    const auto states = tomography_states();
    auto rhs = make_rhs(spec);
    const int w = rhs->cols();

    Matrix initial(rhs->rows(), 4 * w);
    if (scheme_is_composite(spec.kind)) {
        CavityState cav = cavity;
        cav.n_fock = spec.n_fock;
        const Vector psi = cav.state_vector();
        const Matrix proj = psi * psi.adjoint();
        for (int b = 0; b < 4; ++b) initial.middleCols(b * w, w) = kron(states[b], proj);
    } else if (scheme_is_adiabatic(spec.kind)) {
        for (int b = 0; b < 4; ++b) initial.middleCols(b * w, w) = states[b];
    } else {
        for (int b = 0; b < 4; ++b)
            initial.middleCols(b * w, w) = hierarchy_initial_state(states[b], spec.hierarchy_order);
    }

    PovmTrajectory traj;
    traj.scheme = spec.kind;
    traj.stream_id = stream_id;

    // For composite and adiabatic blocks the full block trace is the record
    // weight; the hierarchy carries it on the (0,0) sub-block, stored first.
    const bool hierarchy = spec.kind == SchemeKind::Hierarchy;
    integrate_observe(*rhs, initial, &noise, cfg, [&](int, double t, const Matrix& s) {
        double q[4];
        for (int b = 0; b < 4; ++b) {
            if (hierarchy)
                q[b] = s.block(0, b * w, 2, 2).trace().real();
            else
                q[b] = s.middleCols(b * w, w).trace().real();
        }
        QubitFourVector v;
        v.mu = q[0];
        v.bloch = Eigen::Vector3d(q[1] - q[0], q[2] - q[0], q[3] - q[0]);
        traj.diag.absorb(v);
        traj.times.push_back(t);
        traj.fourvectors.push_back(v);
    });
    return traj;
}

NormalizationReport mc_normalization_check(const SchemeSpec& spec, const CavityState& cavity,
                                           const EnsembleConfig& ens, const NoiseParams& noise_base,
                                           const IntegratorConfig& cfg) {
    if (ens.trajectories < 1)
        throw std::invalid_argument("mc_normalization_check: trajectories must be >= 1");

    struct Welford4 {
        long count = 0;
        Eigen::Vector4d mean = Eigen::Vector4d::Zero();
        Eigen::Vector4d m2 = Eigen::Vector4d::Zero();
        void add(const Eigen::Vector4d& x) {
            ++count;
            const Eigen::Vector4d delta = x - mean;
            mean += delta / static_cast<double>(count);
            m2 += delta.cwiseProduct(x - mean);
        }
        void merge(const Welford4& o) {
            if (o.count == 0) return;
            if (count == 0) {
                *this = o;
                return;
            }
            const double na = count, nb = o.count;
            const Eigen::Vector4d delta = o.mean - mean;
            mean = (na * mean + nb * o.mean) / (na + nb);
            m2 += o.m2 + delta.cwiseAbs2() * (na * nb / (na + nb));
            count += o.count;
        }
        Eigen::Vector4d sem() const {
            const double n = count;
            if (n < 2) return Eigen::Vector4d::Zero();
            return (m2 / (n * (n - 1.0))).cwiseSqrt();
        }
    };

    constexpr int kChunk = 8;
    const int n_chunks = (ens.trajectories + kChunk - 1) / kChunk;
    std::vector<std::vector<Welford4>> partials(static_cast<std::size_t>(n_chunks));
    std::vector<std::vector<double>> chunk_times(static_cast<std::size_t>(n_chunks));

    parallel_chunks(ens.trajectories, kChunk, ens.workers, [&](int chunk, int begin, int end) {
        auto& acc = partials[static_cast<std::size_t>(chunk)];
        auto& times = chunk_times[static_cast<std::size_t>(chunk)];
        for (int i = begin; i < end; ++i) {
            NoiseParams np = noise_base;
            np.dt = cfg.dt;
            np.t_end = cfg.t_end;
            np.seed = ens.seed;
            np.stream_id = static_cast<std::uint64_t>(i);
            const ComplexNoisePath path = generate_complex_path(np);
            const PovmTrajectory traj =
                reconstruct_povm(spec, cavity, path, cfg, np.stream_id);
            if (acc.empty()) {
                acc.resize(traj.times.size());
                times = traj.times;
            }
            for (std::size_t k = 0; k < traj.times.size(); ++k) {
                const auto& v = traj.fourvectors[k];
                acc[k].add(Eigen::Vector4d(v.mu, v.bloch.x(), v.bloch.y(), v.bloch.z()));
            }
        }
    });

    std::vector<Welford4> total;
    for (int c = 0; c < n_chunks; ++c) {
        if (partials[static_cast<std::size_t>(c)].empty()) continue;
        if (total.empty()) total.resize(partials[static_cast<std::size_t>(c)].size());
        for (std::size_t k = 0; k < total.size(); ++k)
            total[k].merge(partials[static_cast<std::size_t>(c)][k]);
    }

    NormalizationReport report;
    report.trajectories = ens.trajectories;
    report.times = chunk_times[0];
    const Eigen::Vector4d target(1.0, 0.0, 0.0, 0.0);
    for (auto& w : total) {
        QubitFourVector v;
        v.mu = w.mean(0);
        v.bloch = w.mean.tail<3>();
        report.mean.push_back(v);
        report.sem.push_back(w.sem());
        const Eigen::Vector4d dev = w.mean - target;
        // Operator norm of the mean-effect deviation from I/2.
        const double opnorm = 0.5 * (std::abs(dev(0)) + dev.tail<3>().norm());
        report.max_abs_deviation = std::max(report.max_abs_deviation, opnorm);
        for (int i = 0; i < 4; ++i) {
            const double sem = w.sem()(i);
            if (std::abs(dev(i)) < 1e-14) continue;  // exact entries (e.g. t = 0)
            const double z = sem > 0 ? std::abs(dev(i)) / sem : 1e30;
            report.max_dev_over_sem = std::max(report.max_dev_over_sem, z);
        }
    }
    return report;
}

}  // namespace qdyne
