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

#include "qdyne/qdyne.h"

#include <cstring>
#include <filesystem>

#include "qdyne/experiment.hpp"

// extern-C boundary: exceptions from the core map onto status codes, the
// message lands in a thread-local buffer.

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
qdyne_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return QDYNE_OK;
    } catch (const qdyne::ConfigError& e) {
        g_last_error = e.what();
        return QDYNE_ERR_CONFIG;
    } catch (const qdyne::TruncationError& e) {
        g_last_error = e.what();
        return QDYNE_ERR_NUMERIC;
    } catch (const qdyne::NumericError& e) {
        g_last_error = e.what();
        return QDYNE_ERR_NUMERIC;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return QDYNE_ERR_INVALID_ARG;
    } catch (const std::filesystem::filesystem_error& e) {
        g_last_error = e.what();
        return QDYNE_ERR_IO;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QDYNE_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return QDYNE_ERR_INTERNAL;
    }
}

qdyne::QubitFourVector make_fv(double mu, const double* bloch) {
    if (bloch == nullptr) throw std::invalid_argument("bloch pointer is null");
    return {mu, Eigen::Vector3d(bloch[0], bloch[1], bloch[2])};
}

}  // namespace

struct qdyne_experiment {
    qdyne::ExperimentConfig config;
};

struct qdyne_povm_trajectory {
    qdyne::PovmTrajectory traj;
};

extern "C" {

const char* qdyne_version(void) { return qdyne::kVersion; }

const char* qdyne_last_error(void) { return g_last_error.c_str(); }

void qdyne_string_free(char* s) { std::free(s); }

qdyne_status qdyne_minkowski(double mu_a, const double* bloch_a, double mu_b,
                             const double* bloch_b, double* out) {
    return guarded([&] {
        if (out == nullptr) throw std::invalid_argument("out pointer is null");
        *out = qdyne::minkowski(make_fv(mu_a, bloch_a), make_fv(mu_b, bloch_b));
    });
}

qdyne_status qdyne_sharpness(double mu, const double* bloch, double* out) {
    return guarded([&] {
        if (out == nullptr) throw std::invalid_argument("out pointer is null");
        *out = qdyne::sharpness(make_fv(mu, bloch));
    });
}

qdyne_status qdyne_compatibility(double mu_a, const double* bloch_a, double mu_b,
                                 const double* bloch_b, double* out) {
    return guarded([&] {
        if (out == nullptr) throw std::invalid_argument("out pointer is null");
        *out = qdyne::compatibility(make_fv(mu_a, bloch_a), make_fv(mu_b, bloch_b));
    });
}

qdyne_status qdyne_bias_bounds(double mu, const double* bloch, double* lower, double* upper,
                               int* in_window) {
    return guarded([&] {
        if (lower == nullptr || upper == nullptr || in_window == nullptr)
            throw std::invalid_argument("output pointer is null");
        const auto b = qdyne::bias_bounds(make_fv(mu, bloch));
        *lower = b.lower;
        *upper = b.upper;
        *in_window = b.in_window ? 1 : 0;
    });
}

qdyne_status qdyne_experiment_create(const char* config_json, qdyne_experiment** out) {
    return guarded([&] {
        if (config_json == nullptr || out == nullptr)
            throw std::invalid_argument("null argument");
        auto handle = std::make_unique<qdyne_experiment>();
        handle->config = qdyne::ExperimentConfig::from_json_text(config_json);
        *out = handle.release();
    });
}

qdyne_status qdyne_experiment_create_preset(const char* preset_name, qdyne_experiment** out) {
    return guarded([&] {
        if (preset_name == nullptr || out == nullptr)
            throw std::invalid_argument("null argument");
        auto handle = std::make_unique<qdyne_experiment>();
        handle->config =
            qdyne::ExperimentConfig::from_json_text(qdyne::preset_config_text(preset_name));
        *out = handle.release();
    });
}

qdyne_status qdyne_experiment_set_seed(qdyne_experiment* exp, uint64_t seed) {
    return guarded([&] {
        if (exp == nullptr) throw std::invalid_argument("null experiment");
        exp->config.seed = seed;
    });
}

qdyne_status qdyne_experiment_config(const qdyne_experiment* exp, char** json_out) {
    return guarded([&] {
        if (exp == nullptr || json_out == nullptr) throw std::invalid_argument("null argument");
        *json_out = dup_string(exp->config.to_json_text());
    });
}

qdyne_status qdyne_experiment_run(qdyne_experiment* exp, const char* out_dir, int workers) {
    return guarded([&] {
        if (exp == nullptr || out_dir == nullptr) throw std::invalid_argument("null argument");
        qdyne::run_experiment(exp->config, out_dir, workers);
    });
}

void qdyne_experiment_destroy(qdyne_experiment* exp) { delete exp; }

qdyne_status qdyne_povm_reconstruct(const qdyne_experiment* exp, const char* scheme,
                                    double squeezing, uint64_t stream_id,
                                    qdyne_povm_trajectory** out) {
    return guarded([&] {
        if (exp == nullptr || scheme == nullptr || out == nullptr)
            throw std::invalid_argument("null argument");
        const auto& cfg = exp->config;
        qdyne::SchemeSpec spec;
        spec.kind = qdyne::scheme_from_name(scheme);
        spec.physics = cfg.physics;
        spec.convention = cfg.convention;
        spec.n_fock = cfg.n_fock;
        qdyne::CavityState cavity;
        cavity.kind = squeezing == 0.0 ? qdyne::CavityState::Kind::Vacuum
                                       : qdyne::CavityState::Kind::Squeezed;
        cavity.s = squeezing;
        cavity.n_fock = cfg.n_fock;
        qdyne::NoiseParams np = cfg.noise_base();
        np.stream_id = stream_id;
        const qdyne::ComplexNoisePath path = qdyne::generate_complex_path(np);
        auto handle = std::make_unique<qdyne_povm_trajectory>();
        handle->traj = qdyne::reconstruct_povm(spec, cavity, path, cfg.integrator(), stream_id);
        *out = handle.release();
    });
}

size_t qdyne_povm_trajectory_length(const qdyne_povm_trajectory* traj) {
    return traj == nullptr ? 0 : traj->traj.times.size();
}

qdyne_status qdyne_povm_trajectory_point(const qdyne_povm_trajectory* traj, size_t index,
                                         double* t, double* mu, double* bloch3) {
    return guarded([&] {
        if (traj == nullptr || t == nullptr || mu == nullptr || bloch3 == nullptr)
            throw std::invalid_argument("null argument");
        if (index >= traj->traj.times.size()) throw std::invalid_argument("index out of range");
        *t = traj->traj.times[index];
        const auto& v = traj->traj.fourvectors[index];
        *mu = v.mu;
        bloch3[0] = v.bloch.x();
        bloch3[1] = v.bloch.y();
        bloch3[2] = v.bloch.z();
    });
}

void qdyne_povm_trajectory_destroy(qdyne_povm_trajectory* traj) { delete traj; }

qdyne_status qdyne_phasespace_run(const char* config_json, const char* out_dir) {
    return guarded([&] {
        if (config_json == nullptr || out_dir == nullptr)
            throw std::invalid_argument("null argument");
        auto cfg = qdyne::ExperimentConfig::from_json_text(config_json);
        if (cfg.kind != "phasespace")
            throw qdyne::ConfigError("config kind must be phasespace");
        qdyne::run_experiment(cfg, out_dir, 1);
    });
}

qdyne_status qdyne_report(const char* run_dir, char** markdown_out) {
    return guarded([&] {
        if (run_dir == nullptr || markdown_out == nullptr)
            throw std::invalid_argument("null argument");
        *markdown_out = dup_string(qdyne::generate_report(run_dir));
    });
}

qdyne_status qdyne_preset_list(char** names_csv_out) {
    return guarded([&] {
        if (names_csv_out == nullptr) throw std::invalid_argument("null argument");
        std::string joined;
        for (const auto& name : qdyne::preset_names()) {
            if (!joined.empty()) joined += ',';
            joined += name;
        }
        *names_csv_out = dup_string(joined);
    });
}

qdyne_status qdyne_preset_config(const char* name, char** json_out) {
    return guarded([&] {
        if (name == nullptr || json_out == nullptr) throw std::invalid_argument("null argument");
        *json_out = dup_string(qdyne::preset_config_text(name));
    });
}

}  // extern "C"
