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

#include "qdyne/integrate.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace qdyne {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("IntegratorConfig: dt must be > 0");
    if (!(t_end > 0.0)) throw std::invalid_argument("IntegratorConfig: t_end must be > 0");
    if (record_stride < 1) throw std::invalid_argument("IntegratorConfig: record_stride >= 1");
    const double steps = t_end / dt;
    if (std::abs(steps - std::round(steps)) > 1e-6)
        throw std::invalid_argument("IntegratorConfig: t_end must be an integer multiple of dt");
}

long IntegratorConfig::step_count() const { return std::lround(t_end / dt); }

void integrate_observe(Rhs& rhs, const Matrix& initial, const ComplexNoisePath* noise,
                       const IntegratorConfig& cfg, const StateObserver& observer) {
    cfg.validate();
    if (initial.rows() != rhs.rows() || initial.cols() % rhs.cols() != 0)
        throw std::invalid_argument("integrate: state shape does not match the scheme");
    if (rhs.uses_noise()) {
        if (noise == nullptr) throw std::invalid_argument("integrate: scheme requires a noise path");
        if (noise->t_end() + 1e-9 < cfg.t_end)
            throw std::invalid_argument("integrate: noise path does not cover [0, t_end]");
    }
    const bool stacked = initial.cols() != rhs.cols();
    const long steps = cfg.step_count();
    const double dt = cfg.dt;

    Matrix y = initial;
    Matrix k1, k2, k3, k4, stage;
    const double trace0 = initial.trace().real();

    auto xi_at = [&](double t) -> Complex {
        return noise != nullptr ? noise->value_at(t) : Complex{0.0, 0.0};
    };
    auto eval = [&](const Matrix& s, Complex xi, Matrix& out) {
        if (stacked)
            rhs.apply_blocks(s, xi, out);
        else
            rhs.apply(s, xi, out);
    };

    int record_index = 0;
    observer(record_index++, 0.0, y);
    for (long step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        const Complex xi0 = xi_at(t);
        const Complex xih = xi_at(t + 0.5 * dt);
        const Complex xi1 = xi_at(t + dt);

        eval(y, xi0, k1);
        stage = y + (0.5 * dt) * k1;
        eval(stage, xih, k2);
        stage = y + (0.5 * dt) * k2;
        eval(stage, xih, k3);
        stage = y + dt * k3;
        eval(stage, xi1, k4);
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if ((step + 1) % cfg.record_stride == 0 || step + 1 == steps) {
            if (rhs.trace_preserving() && std::abs(y.trace().real() - trace0) > 1e-8)
                throw NumericError("integrate: trace drift above 1e-8 in a trace-preserving run");
            observer(record_index++, static_cast<double>(step + 1) * dt, y);
        }
    }
}

TrajectoryResult integrate(Rhs& rhs, const Matrix& initial, const ComplexNoisePath* noise,
                           const IntegratorConfig& cfg) {
    TrajectoryResult result;
    integrate_observe(rhs, initial, noise, cfg, [&](int, double t, const Matrix& state) {
        result.times.push_back(t);
        result.states.push_back(state);
    });
    return result;
}

void parallel_chunks(int n, int chunk_size, int workers,
                     const std::function<void(int, int, int)>& fn) {
    if (n <= 0) return;
    if (chunk_size < 1) chunk_size = 1;
    const int n_chunks = (n + chunk_size - 1) / chunk_size;
    int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;
    if (n_workers > n_chunks) n_workers = n_chunks;

    if (n_workers == 1) {
        for (int c = 0; c < n_chunks; ++c)
            fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const int c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

// Entrywise Welford accumulator for complex matrices.
struct MatrixWelford {
    long count = 0;
    Matrix mean;
    Eigen::ArrayXXd m2;

    void init(Eigen::Index r, Eigen::Index c) {
        count = 0;
        mean = Matrix::Zero(r, c);
        m2 = Eigen::ArrayXXd::Zero(r, c);
    }
    void add(const Matrix& x) {
        ++count;
        const Matrix delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += (delta.array().conjugate() * (x - mean).array()).real();
    }
    // Chan combination; applied in fixed chunk order for determinism.
    void merge(const MatrixWelford& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const Matrix delta = other.mean - mean;
        mean = (na * mean + nb * other.mean) / (na + nb);
        m2 += other.m2 + delta.array().abs2() * (na * nb / (na + nb));
        count += other.count;
    }
    Eigen::ArrayXXd sem() const {
        const double n = static_cast<double>(count);
        if (n < 2) return Eigen::ArrayXXd::Zero(m2.rows(), m2.cols());
        return (m2 / (n * (n - 1.0))).sqrt();
    }
};

}  // namespace

EnsembleSummary run_ensemble(const SchemeSpec& spec, const Matrix& initial,
                             const EnsembleConfig& ens, const NoiseParams& noise_base,
                             const IntegratorConfig& cfg) {
    if (ens.trajectories < 1) throw std::invalid_argument("run_ensemble: trajectories must be >= 1");
    cfg.validate();
    spec.validate();

    const long steps = cfg.step_count();
    const int n_records = static_cast<int>(steps / cfg.record_stride) +
                          ((steps % cfg.record_stride) ? 2 : 1);

    constexpr int kChunk = 8;
    const int n_chunks = (ens.trajectories + kChunk - 1) / kChunk;
    std::vector<std::vector<MatrixWelford>> partials(static_cast<std::size_t>(n_chunks));
    std::vector<std::vector<double>> chunk_times(static_cast<std::size_t>(n_chunks));

    parallel_chunks(ens.trajectories, kChunk, ens.workers, [&](int chunk, int begin, int end) {
        auto rhs = make_rhs(spec);
        auto& acc = partials[static_cast<std::size_t>(chunk)];
        acc.resize(static_cast<std::size_t>(n_records));
        for (auto& w : acc) w.init(initial.rows(), initial.cols());
        auto& times = chunk_times[static_cast<std::size_t>(chunk)];
        times.assign(static_cast<std::size_t>(n_records), 0.0);
        for (int i = begin; i < end; ++i) {
            NoiseParams np = noise_base;
            np.dt = cfg.dt;
            np.t_end = cfg.t_end;
            np.seed = ens.seed;
            np.stream_id = static_cast<std::uint64_t>(i);
            ComplexNoisePath path;
            const bool needs_noise = rhs->uses_noise();
            if (needs_noise) path = generate_complex_path(np);
            integrate_observe(*rhs, initial, needs_noise ? &path : nullptr, cfg,
                              [&](int rec, double t, const Matrix& state) {
                                  times[static_cast<std::size_t>(rec)] = t;
                                  acc[static_cast<std::size_t>(rec)].add(state);
                              });
        }
    });

    EnsembleSummary summary;
    summary.trajectories = ens.trajectories;
    std::vector<MatrixWelford> total(static_cast<std::size_t>(n_records));
    for (auto& w : total) w.init(initial.rows(), initial.cols());
    for (int c = 0; c < n_chunks; ++c)
        for (int r = 0; r < n_records; ++r)
            total[static_cast<std::size_t>(r)].merge(partials[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)]);

    summary.times = chunk_times[0];
    summary.mean.reserve(static_cast<std::size_t>(n_records));
    summary.sem.reserve(static_cast<std::size_t>(n_records));
    for (auto& w : total) {
        summary.mean.push_back(w.mean);
        summary.sem.push_back(w.sem());
    }
    return summary;
}

}  // namespace qdyne
