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

#include "qdyne/noise.hpp"

#include <cmath>
#include <random>

namespace qdyne {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Counter-style substream key: the generator for a trajectory depends only on
// (seed, stream_id, channel), never on how many paths were drawn before it.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t channel) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ (0x632be59bd9b4e019ull + stream));
    k = splitmix64(k ^ (0x9e3779b97f4a7c15ull * (channel + 1)));
    return k;
}

}  // namespace

void NoiseParams::validate() const {
    if (!(kappa >= 0.0)) throw std::invalid_argument("NoiseParams: kappa must be >= 0");
    if (!(gamma_ou > 0.0)) throw std::invalid_argument("NoiseParams: gamma_ou must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("NoiseParams: dt must be > 0");
    if (!(t_end > 0.0)) throw std::invalid_argument("NoiseParams: t_end must be > 0");
    if (gamma_ou * dt > 0.2 + 1e-12)
        throw std::invalid_argument("NoiseParams: gamma_ou * dt must be <= 0.2");
}

double NoisePath::value_at(double t) const {
    const auto n = static_cast<long>(values.size());
    if (n < 2) throw std::invalid_argument("NoisePath: empty path");
    if (t < -1e-12 || t > t_end() + 1e-9) throw std::invalid_argument("NoisePath: t out of range");
    double pos = t / dt;
    long k = static_cast<long>(pos);
    if (k > n - 2) k = n - 2;
    if (k < 0) k = 0;
    const double frac = pos - static_cast<double>(k);
    return values[k] + (values[k + 1] - values[k]) * frac;
}

NoisePath generate_ou_path(const NoiseParams& params, std::uint64_t channel) {
    params.validate();
    const auto steps = static_cast<std::size_t>(std::llround(params.t_end / params.dt));
    const double decay = std::exp(-params.gamma_ou * params.dt);
    const double stat_var = params.kappa * params.gamma_ou / 4.0;
    const double sigma_step = std::sqrt(stat_var * (1.0 - decay * decay));

    std::mt19937_64 rng(stream_key(params.seed, params.stream_id, channel));
    std::normal_distribution<double> normal(0.0, 1.0);

    NoisePath path;
    path.dt = params.dt;
    path.values.resize(steps + 1);
    path.values[0] = 0.0;
    for (std::size_t k = 0; k < steps; ++k)
        path.values[k + 1] = path.values[k] * decay + sigma_step * normal(rng);
    return path;
}

ComplexNoisePath generate_complex_path(const NoiseParams& params) {
    return {generate_ou_path(params, 0), generate_ou_path(params, 1)};
}

}  // namespace qdyne
