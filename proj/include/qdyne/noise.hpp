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
#include <vector>

#include "qdyne/common.hpp"

// Seeded Ornstein-Uhlenbeck records standing in for Gaussian white noise.
//
// The process is initialized at zero and discretized exactly:
//   x_{k+1} = x_k e^{-gamma dt} + eta_k sigma_step,
// with the stationary variance kappa*gamma/4 chosen so that the wide-band
// limit reproduces <x_t x_s> -> (kappa/2) delta(t-s). Two independent
// substreams combine into the complex record xi_t = x_t + i y_t with
// <xi_t xi_s^*> -> kappa delta(t-s).

namespace qdyne {

struct NoiseParams {
    double kappa = 1.0;      // decay rate feeding the white-noise strength
    double gamma_ou = 15.0;  // OU bandwidth
    double dt = 1.0 / 160.0;
    double t_end = 1.0;
    std::uint64_t seed = 1;
    std::uint64_t stream_id = 0;

    void validate() const;
};

struct NoisePath {
    double dt = 0.0;
    std::vector<double> values;  // uniform grid 0 .. t_end, values[0] == 0

    double t_end() const { return dt * static_cast<double>(values.size() - 1); }

    /// Linear interpolation between grid samples; t must lie in [0, t_end].
    double value_at(double t) const;
};

struct ComplexNoisePath {
    NoisePath x;
    NoisePath y;

    double dt() const { return x.dt; }
    double t_end() const { return x.t_end(); }
    Complex value_at(double t) const { return {x.value_at(t), y.value_at(t)}; }
};

/// One OU realization; fully determined by (seed, stream_id, channel).
NoisePath generate_ou_path(const NoiseParams& params, std::uint64_t channel = 0);

/// Independent x (channel 0) and y (channel 1) substreams.
ComplexNoisePath generate_complex_path(const NoiseParams& params);

}  // namespace qdyne
