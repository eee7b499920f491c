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

// Command-line front end; talks to the engine exclusively through the
// shared-library C interface.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-tolerance
// failure, 1 anything else.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qdyne/qdyne.h"

namespace {

int exit_code(qdyne_status status) {
    switch (status) {
        case QDYNE_OK: return 0;
        case QDYNE_ERR_CONFIG: return 2;
        case QDYNE_ERR_NUMERIC: return 3;
        default: return 1;
    }
}

int fail(qdyne_status status) {
    std::cerr << "error: " << qdyne_last_error() << "\n";
    return exit_code(status);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ExperimentHandle {
    qdyne_experiment* ptr = nullptr;
    ~ExperimentHandle() { qdyne_experiment_destroy(ptr); }
};

int make_experiment(const std::string& config_path, const std::string& preset,
                    ExperimentHandle& handle) {
    if (config_path.empty() == preset.empty()) {
        std::cerr << "error: provide exactly one of --config or --preset\n";
        return 2;
    }
    qdyne_status status;
    if (!preset.empty()) {
        status = qdyne_experiment_create_preset(preset.c_str(), &handle.ptr);
    } else {
        std::string text;
        try {
            text = read_file(config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        status = qdyne_experiment_create(text.c_str(), &handle.ptr);
    }
    return status == QDYNE_OK ? 0 : fail(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qdyne: continuous qubit measurement simulator"};
    app.require_subcommand(1);

    std::string config_path, preset, out_dir = "qdyne-out", run_dir, report_out, preset_name;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;

    auto* run = app.add_subcommand("run", "run a measurement experiment and emit CSV/SVG data");
    run->add_option("--config", config_path, "experiment config JSON file");
    run->add_option("--preset", preset, "named preset (see 'presets')");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
        seed_set = true;
    });
    run->add_option("--workers", workers, "worker thread hint (0 = hardware)");

    auto* phase = app.add_subcommand("phasespace", "phase-space functions of a cavity state");
    phase->add_option("--config", config_path, "phase-space config JSON file");
    phase->add_option("--preset", preset, "named preset (fig1)");
    phase->add_option("--out", out_dir, "output directory");

    auto* report = app.add_subcommand("report", "summarize a finished run directory");
    report->add_option("--run", run_dir, "run directory")->required();
    report->add_option("--out", report_out, "write the markdown here instead of stdout");

    auto* presets = app.add_subcommand("presets", "list presets or print one as JSON");
    presets->add_option("name", preset_name, "preset to print");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        ExperimentHandle handle;
        if (int rc = make_experiment(config_path, preset, handle); rc != 0) return rc;
        if (seed_set) {
            if (auto status = qdyne_experiment_set_seed(handle.ptr, seed); status != QDYNE_OK)
                return fail(status);
        }
        if (auto status = qdyne_experiment_run(handle.ptr, out_dir.c_str(), workers);
            status != QDYNE_OK)
            return fail(status);
        std::cout << "run complete: " << out_dir << "\n";
        return 0;
    }

    if (phase->parsed()) {
        std::string text;
        if (!preset.empty()) {
            char* json = nullptr;
            if (auto status = qdyne_preset_config(preset.c_str(), &json); status != QDYNE_OK)
                return fail(status);
            text = json;
            qdyne_string_free(json);
        } else if (!config_path.empty()) {
            try {
                text = read_file(config_path);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        } else {
            std::cerr << "error: provide --config or --preset\n";
            return 2;
        }
        if (auto status = qdyne_phasespace_run(text.c_str(), out_dir.c_str()); status != QDYNE_OK)
            return fail(status);
        std::cout << "phase-space data written to " << out_dir << "\n";
        return 0;
    }

    if (report->parsed()) {
        char* markdown = nullptr;
        if (auto status = qdyne_report(run_dir.c_str(), &markdown); status != QDYNE_OK)
            return fail(status);
        if (report_out.empty()) {
            std::cout << markdown;
        } else {
            std::ofstream out(report_out, std::ios::binary);
            out << markdown;
        }
        qdyne_string_free(markdown);
        return 0;
    }

    if (presets->parsed()) {
        if (preset_name.empty()) {
            char* names = nullptr;
            if (auto status = qdyne_preset_list(&names); status != QDYNE_OK) return fail(status);
            std::string list = names;
            qdyne_string_free(names);
            for (std::size_t pos = 0; pos <= list.size();) {
                const auto comma = list.find(',', pos);
                std::cout << list.substr(pos, comma - pos) << "\n";
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        } else {
            char* json = nullptr;
            if (auto status = qdyne_preset_config(preset_name.c_str(), &json);
                status != QDYNE_OK)
                return fail(status);
            std::cout << json << "\n";
            qdyne_string_free(json);
        }
        return 0;
    }
    return 1;
}
