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

#include <optional>
#include <string>
#include <vector>

#include "qdyne/phasespace.hpp"
#include "qdyne/povm.hpp"

// Declarative experiment configs (JSON), named presets reproducing the stock
// analyses, artifact emission (CSV + SVG + manifest) and the post-hoc report.
//
// Run layout, all floats at 17 significant digits for bit-exact reparsing:
//   manifest.json                 config + seed + version + file list
//   povm_<scheme>_s<tag>.csv      t, mu, ax, ay, az, scheme, stream_id
//   summary.csv                   per scheme/squeezing: mean/sem of mu, |a|,
//                                 sharpness and the lower-bound gap
//   pairs.csv                     per X/Y pair: mean/sem of the compatibility
//   *.svg                         bias, sharpness and compatibility plots

namespace qdyne {

struct ExperimentConfig {
    std::string kind = "run";  // "run" | "phasespace" | "noise"

    // run
    PhysicsParams physics;
    double gamma_ou = 15.0;
    double dt = 1.0 / 160.0;
    double t_end = 8.0;
    std::uint64_t seed = 1;
    CavityState::Kind cavity_kind = CavityState::Kind::Vacuum;
    std::vector<double> squeezings = {0.0};
    int n_fock = 15;
    std::vector<SchemeKind> schemes;
    InteractionConvention convention = InteractionConvention::MainText;
    int trajectories = 200;
    int record_points = 200;
    int csv_trajectories = -1;  // -1: all

    // phasespace
    std::string state_kind = "fock";  // "fock" | "vacuum" | "squeezed"
    int fock_n = 4;
    double state_s = 0.25;
    PhaseGrid grid;

    // noise
    int noise_paths = 3;

    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
    void validate() const;

    IntegratorConfig integrator() const;
    NoiseParams noise_base() const;
};

std::vector<std::string> preset_names();
std::string preset_config_text(const std::string& name);

/// Runs the experiment and writes the artifact bundle; partial outputs are
/// removed when a failure occurs.
void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int workers);

/// Markdown report over an existing run directory.
std::string generate_report(const std::string& run_dir);

}  // namespace qdyne
