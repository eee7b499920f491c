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

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qdyne/dynamics.hpp"
#include "qdyne/noise.hpp"

// Fixed-step classical RK4 along a (linearly interpolated) noise record, plus
// a seed-deterministic ensemble runner. Summaries are reduced over fixed-size
// chunks combined in stream order, so results do not depend on the worker
// count.

namespace qdyne {

struct IntegratorConfig {
    double dt = 1.0 / 160.0;
    double t_end = 1.0;
    int record_stride = 1;  // store every k-th step (t = 0 always recorded)

    void validate() const;
    long step_count() const;
};

struct TrajectoryResult {
    std::vector<double> times;
    std::vector<Matrix> states;
};

using StateObserver = std::function<void(int record_index, double t, const Matrix& state)>;

/// RK4 integration of d state/dt = rhs(state, xi(t)); noise may be null for
/// deterministic schemes. States whose column count is a multiple of the rhs
/// block width are treated as stacked Hermitian blocks (the fast path).
void integrate_observe(Rhs& rhs, const Matrix& initial, const ComplexNoisePath* noise,
                       const IntegratorConfig& cfg, const StateObserver& observer);

TrajectoryResult integrate(Rhs& rhs, const Matrix& initial, const ComplexNoisePath* noise,
                           const IntegratorConfig& cfg);

struct EnsembleConfig {
    int trajectories = 1;
    std::uint64_t seed = 1;
    int workers = 0;  // hint only; <= 0 means hardware concurrency
};

struct EnsembleSummary {
    std::vector<double> times;
    std::vector<Matrix> mean;              // entrywise mean state
    std::vector<Eigen::ArrayXXd> sem;      // entrywise standard error |.|
    int trajectories = 0;
};

/// Trajectory i runs on substream stream_id = i of the base noise parameters
/// (dt and t_end are taken from cfg). Reduction is bit-stable for any worker
/// count.
EnsembleSummary run_ensemble(const SchemeSpec& spec, const Matrix& initial,
                             const EnsembleConfig& ens, const NoiseParams& noise_base,
                             const IntegratorConfig& cfg);

/// Fixed-chunk parallel loop: fn(chunk_index, begin, end) over [0, n).
/// Chunk boundaries depend only on n and chunk_size, never on workers.
void parallel_chunks(int n, int chunk_size, int workers,
                     const std::function<void(int, int, int)>& fn);

}  // namespace qdyne
