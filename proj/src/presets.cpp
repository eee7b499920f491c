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

#include "qdyne/experiment.hpp"

#include <nlohmann/json.hpp>

// Stock experiment presets. The dyne runs share the resonant parameter set
// (omega_c = kappa = g = 1 in qubit-frequency units, OU bandwidth 15); the
// adiabatic comparison uses the bad-cavity point kappa = 2.

namespace qdyne {

namespace {

using nlohmann::json;

json base_run() {
    return json{
        {"kind", "run"},
        {"physics", {{"omega_a", 1.0}, {"omega_c", 1.0}, {"kappa", 1.0}, {"g", 1.0}}},
        {"noise", {{"gamma_ou", 15.0}, {"dt", 0.00625}, {"seed", 1}}},
        {"cavity", {{"kind", "squeezed"}, {"s", json::array({0.0, 0.1, 0.25})}, {"n_fock", 15}}},
        {"schemes", json::array({"heterodyne_x", "heterodyne_y", "homodyne_x", "homodyne_y"})},
        {"interaction_convention", "main_text"},
        {"ensemble", {{"trajectories", 200}}},
        {"t_end", 8.0},
        {"record_points", 200},
        {"csv_trajectories", 25},
    };
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig1", "fig3", "fig4", "fig5", "fig6", "noise-fig", "smoke"};
}

std::string preset_config_text(const std::string& name) {
    json j;
    if (name == "fig1") {
        j = json{
            {"kind", "phasespace"},
            {"state", {{"kind", "fock"}, {"n", 4}}},
            {"grid",
             {{"q_min", -6.0}, {"q_max", 6.0}, {"p_min", -6.0}, {"p_max", 6.0}, {"n_q", 201},
              {"n_p", 201}}},
        };
    } else if (name == "fig3") {
        j = base_run();
    } else if (name == "fig4" || name == "fig6") {
        // Same data as fig3 plus the adiabatic marginals; fig4 reads the
        // sharpness columns, fig6 the pair compatibility.
        j = base_run();
        j["schemes"] = json::array({"heterodyne_x", "heterodyne_y", "homodyne_x", "homodyne_y",
                                    "adiabatic_x", "adiabatic_y"});
    } else if (name == "fig5") {
        j = base_run();
        j["physics"]["kappa"] = 2.0;
        j["cavity"]["s"] = json::array({0.0});
        j["schemes"] = json::array({"homodyne_x", "heterodyne_x", "adiabatic_x"});
        j["interaction_convention"] = "appendix";
    } else if (name == "noise-fig") {
        j = json{
            {"kind", "noise"},
            {"noise",
             {{"kappa", 2.0}, {"gamma_ou", 15.0}, {"dt", 0.00625}, {"seed", 1}}},
            {"t_end", 2.0},
            {"paths", 3},
        };
    } else if (name == "smoke") {
        j = base_run();
        j["cavity"]["s"] = json::array({0.0, 0.1});
        j["cavity"]["n_fock"] = 12;
        j["ensemble"]["trajectories"] = 4;
        j["t_end"] = 0.5;
        j["record_points"] = 16;
        j["schemes"] = json::array({"heterodyne_x", "heterodyne_y", "adiabatic_x", "adiabatic_y"});
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    return j.dump(2);
}

}  // namespace qdyne
