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

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qdyne/csvio.hpp"
#include "qdyne/svg.hpp"

namespace qdyne {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config <-> JSON

InteractionConvention convention_from_string(const std::string& s) {
    if (s == "main_text") return InteractionConvention::MainText;
    if (s == "appendix") return InteractionConvention::Appendix;
    throw ConfigError("interaction_convention must be main_text or appendix");
}

const char* convention_to_string(InteractionConvention c) {
    return c == InteractionConvention::MainText ? "main_text" : "appendix";
}

std::string squeeze_tag(double s) {
    std::ostringstream os;
    os << s;
    std::string t = os.str();
    std::replace(t.begin(), t.end(), '.', 'p');
    return t;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        ExperimentConfig cfg;
        cfg.kind = j.value("kind", "run");
        if (j.contains("physics")) {
            const auto& p = j.at("physics");
            cfg.physics.omega_a = p.value("omega_a", 1.0);
            cfg.physics.omega_c = p.value("omega_c", 1.0);
            cfg.physics.kappa = p.value("kappa", 1.0);
            cfg.physics.g = p.value("g", 1.0);
        }
        if (j.contains("noise")) {
            const auto& n = j.at("noise");
            cfg.gamma_ou = n.value("gamma_ou", cfg.gamma_ou);
            cfg.dt = n.value("dt", cfg.dt);
            cfg.seed = n.value("seed", cfg.seed);
            if (cfg.kind == "noise") cfg.physics.kappa = n.value("kappa", cfg.physics.kappa);
        }
        if (j.contains("cavity")) {
            const auto& c = j.at("cavity");
            const std::string kind = c.value("kind", "vacuum");
            if (kind == "vacuum")
                cfg.cavity_kind = CavityState::Kind::Vacuum;
            else if (kind == "squeezed")
                cfg.cavity_kind = CavityState::Kind::Squeezed;
            else
                throw ConfigError("cavity.kind must be vacuum or squeezed");
            cfg.squeezings.clear();
            if (c.contains("s")) {
                if (c.at("s").is_array())
                    for (const auto& v : c.at("s")) cfg.squeezings.push_back(v.get<double>());
                else
                    cfg.squeezings.push_back(c.at("s").get<double>());
            } else {
                cfg.squeezings.push_back(0.0);
            }
            cfg.n_fock = c.value("n_fock", cfg.n_fock);
        }
        if (j.contains("schemes")) {
            for (const auto& s : j.at("schemes"))
                cfg.schemes.push_back(scheme_from_name(s.get<std::string>()));
        }
        cfg.convention =
            convention_from_string(j.value("interaction_convention", "main_text"));
        if (j.contains("ensemble"))
            cfg.trajectories = j.at("ensemble").value("trajectories", cfg.trajectories);
        cfg.t_end = j.value("t_end", cfg.t_end);
        cfg.record_points = j.value("record_points", cfg.record_points);
        cfg.csv_trajectories = j.value("csv_trajectories", cfg.csv_trajectories);
        if (j.contains("state")) {
            const auto& s = j.at("state");
            cfg.state_kind = s.value("kind", "fock");
            cfg.fock_n = s.value("n", 4);
            cfg.state_s = s.value("s", 0.25);
        }
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            cfg.grid.q_min = g.value("q_min", cfg.grid.q_min);
            cfg.grid.q_max = g.value("q_max", cfg.grid.q_max);
            cfg.grid.p_min = g.value("p_min", cfg.grid.p_min);
            cfg.grid.p_max = g.value("p_max", cfg.grid.p_max);
            cfg.grid.n_q = g.value("n_q", cfg.grid.n_q);
            cfg.grid.n_p = g.value("n_p", cfg.grid.n_p);
        }
        cfg.noise_paths = j.value("paths", cfg.noise_paths);
        cfg.validate();
        return cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["kind"] = kind;
    if (kind == "run") {
        j["physics"] = {{"omega_a", physics.omega_a},
                        {"omega_c", physics.omega_c},
                        {"kappa", physics.kappa},
                        {"g", physics.g}};
        j["noise"] = {{"gamma_ou", gamma_ou}, {"dt", dt}, {"seed", seed}};
        j["cavity"] = {{"kind", cavity_kind == CavityState::Kind::Vacuum ? "vacuum" : "squeezed"},
                       {"s", squeezings},
                       {"n_fock", n_fock}};
        json names = json::array();
        for (auto s : schemes) names.push_back(scheme_name(s));
        j["schemes"] = names;
        j["interaction_convention"] = convention_to_string(convention);
        j["ensemble"] = {{"trajectories", trajectories}};
        j["t_end"] = t_end;
        j["record_points"] = record_points;
        j["csv_trajectories"] = csv_trajectories;
    } else if (kind == "phasespace") {
        j["state"] = {{"kind", state_kind}, {"n", fock_n}, {"s", state_s}};
        j["grid"] = {{"q_min", grid.q_min}, {"q_max", grid.q_max}, {"p_min", grid.p_min},
                     {"p_max", grid.p_max}, {"n_q", grid.n_q}, {"n_p", grid.n_p}};
    } else {
        j["noise"] = {{"kappa", physics.kappa}, {"gamma_ou", gamma_ou}, {"dt", dt}, {"seed", seed}};
        j["t_end"] = t_end;
        j["paths"] = noise_paths;
    }
    return j.dump(2);
}

void ExperimentConfig::validate() const {
    if (kind == "phasespace") {
        grid.validate();
        if (state_kind != "fock" && state_kind != "vacuum" && state_kind != "squeezed")
            throw ConfigError("state.kind must be fock, vacuum or squeezed");
        if (state_kind == "fock" && (fock_n < 0 || fock_n > 20))
            throw ConfigError("state.n must be in [0, 20]");
        if (state_kind == "squeezed" && std::abs(state_s) > 0.5)
            throw ConfigError("state.s must satisfy |s| <= 0.5");
        return;
    }
    if (kind == "noise") {
        try {
            noise_base().validate();
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        if (noise_paths < 1) throw ConfigError("paths must be >= 1");
        if (!(t_end > 0)) throw ConfigError("t_end must be > 0");
        return;
    }
    if (kind != "run") throw ConfigError("kind must be run, phasespace or noise");

    try {
        physics.validate();
        noise_base().validate();
        integrator().validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const double fastest =
        std::max({gamma_ou, physics.kappa, physics.g, physics.omega_a, physics.omega_c});
    if (dt > 0.1 / fastest + 1e-12)
        throw ConfigError("dt must resolve the fastest rate: dt <= 0.1/max(rates)");
    if (schemes.empty()) throw ConfigError("schemes must not be empty");
    if (squeezings.empty()) throw ConfigError("cavity.s must not be empty");
    for (double s : squeezings) {
        if (std::abs(s) > 0.5) throw ConfigError("|s| must be <= 0.5");
        if (cavity_kind == CavityState::Kind::Vacuum && s != 0.0)
            throw ConfigError("vacuum cavity requires s = 0");
    }
    if (n_fock < 2) throw ConfigError("n_fock must be >= 2");
    if (trajectories < 1) throw ConfigError("ensemble.trajectories must be >= 1");
    if (record_points < 2) throw ConfigError("record_points must be >= 2");
    for (auto scheme : schemes) {
        if (scheme == SchemeKind::GkslReference)
            throw ConfigError("gksl is a reference solution, not a measurement scheme");
        if (scheme_is_adiabatic(scheme) && !(physics.kappa > 0))
            throw ConfigError("adiabatic schemes require kappa > 0");
        if (scheme == SchemeKind::Hierarchy)
            for (double s : squeezings)
                if (s != 0.0) throw ConfigError("hierarchy runs require a vacuum cavity (s = 0)");
    }
}

IntegratorConfig ExperimentConfig::integrator() const {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    const long steps = std::lround(t_end / dt);
    cfg.record_stride = std::max(1L, steps / std::max(1, record_points));
    return cfg;
}

NoiseParams ExperimentConfig::noise_base() const {
    NoiseParams np;
    np.kappa = physics.kappa;
    np.gamma_ou = gamma_ou;
    np.dt = dt;
    np.t_end = t_end;
    np.seed = seed;
    return np;
}

// ---------------------------------------------------------------------------
// Run machinery

namespace {

struct ScalarWelford {
    long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
    void merge(const ScalarWelford& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(count), nb = static_cast<double>(o.count);
        const double d = o.mean - mean;
        mean = (na * mean + nb * o.mean) / (na + nb);
        m2 += o.m2 + d * d * na * nb / (na + nb);
        count += o.count;
    }
    double sem() const {
        return count > 1 ? std::sqrt(m2 / (static_cast<double>(count) *
                                           (static_cast<double>(count) - 1.0)))
                         : 0.0;
    }
};

// Project a reconstructed four-vector into the positivity window before
// evaluating sharpness/compatibility; integration noise can leave it a hair
// outside where the Minkowski radicands turn negative.
QubitFourVector window_clamped(const QubitFourVector& v) {
    QubitFourVector w = v;
    const double a = w.bloch_norm();
    if (a > w.mu && a > 0.0) w.bloch *= (w.mu / a);
    const double total = w.mu + w.bloch_norm();
    if (total > 2.0 && total > 0.0) {
        const double lambda = 2.0 / total;
        w.mu *= lambda;
        w.bloch *= lambda;
    }
    return w;
}

struct PairDef {
    std::string name;
    SchemeKind x;
    SchemeKind y;
};

std::vector<PairDef> pairs_in(const std::vector<SchemeKind>& schemes) {
    auto has = [&](SchemeKind k) {
        return std::find(schemes.begin(), schemes.end(), k) != schemes.end();
    };
    std::vector<PairDef> pairs;
    if (has(SchemeKind::HeterodyneMarginalX) && has(SchemeKind::HeterodyneMarginalY))
        pairs.push_back({"heterodyne", SchemeKind::HeterodyneMarginalX,
                         SchemeKind::HeterodyneMarginalY});
    if (has(SchemeKind::HomodyneX) && has(SchemeKind::HomodyneY))
        pairs.push_back({"homodyne", SchemeKind::HomodyneX, SchemeKind::HomodyneY});
    if (has(SchemeKind::AdiabaticX) && has(SchemeKind::AdiabaticY))
        pairs.push_back({"adiabatic", SchemeKind::AdiabaticX, SchemeKind::AdiabaticY});
    return pairs;
}

enum Stat { kMu = 0, kANorm = 1, kSharp = 2, kGap = 3, kNStats = 4 };

struct ChunkAccum {
    // [scheme][time][stat]
    std::vector<std::vector<std::array<ScalarWelford, kNStats>>> scheme_stats;
    std::vector<std::vector<ScalarWelford>> pair_stats;  // [pair][time]
    std::vector<PovmDiagnostics> diagnostics;            // [scheme]
    std::vector<std::string> csv_rows;                   // [scheme] concatenated rows
    std::vector<double> times;
};

class RunWriter {
public:
    explicit RunWriter(const fs::path& dir) : dir_(dir) {}

    std::ofstream open(const std::string& name) {
        const fs::path p = dir_ / name;
        written_.push_back(name);
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        return out;
    }
    void note(const std::string& name) { written_.push_back(name); }
    const std::vector<std::string>& files() const { return written_; }
    void remove_all() {
        for (const auto& name : written_) {
            std::error_code ec;
            fs::remove(dir_ / name, ec);
        }
    }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<std::string> written_;
};

void run_dyne(const ExperimentConfig& cfg, RunWriter& writer, int workers) {
    const IntegratorConfig icfg = cfg.integrator();
    const auto pairs = pairs_in(cfg.schemes);
    const int n_schemes = static_cast<int>(cfg.schemes.size());
    const int csv_limit =
        cfg.csv_trajectories < 0 ? cfg.trajectories : std::min(cfg.csv_trajectories, cfg.trajectories);

    auto summary = writer.open("summary.csv");
    summary << "s,scheme,t,mean_mu,sem_mu,mean_anorm,sem_anorm,mean_sharpness,sem_sharpness,"
               "mean_gap,sem_gap\n";
    auto pair_csv = writer.open("pairs.csv");
    pair_csv << "s,pair,t,mean_c,sem_c\n";
    auto diag_csv = writer.open("diagnostics.csv");
    diag_csv << "s,scheme,positivity_violations,window_violations,min_eigenvalue,"
                "max_window_excess\n";

    for (double s : cfg.squeezings) {
        CavityState cavity;
        cavity.kind = s == 0.0 ? cfg.cavity_kind : CavityState::Kind::Squeezed;
        cavity.s = s;
        cavity.n_fock = cfg.n_fock;
        if (cavity.kind == CavityState::Kind::Squeezed)
            (void)cavity.state_vector();  // fail early on inadequate truncation

        constexpr int kChunk = 4;
        const int n_chunks = (cfg.trajectories + kChunk - 1) / kChunk;
        std::vector<ChunkAccum> chunks(static_cast<std::size_t>(n_chunks));

        parallel_chunks(cfg.trajectories, kChunk, workers, [&](int chunk, int begin, int end) {
            auto& acc = chunks[static_cast<std::size_t>(chunk)];
            acc.scheme_stats.resize(static_cast<std::size_t>(n_schemes));
            acc.pair_stats.resize(pairs.size());
            acc.diagnostics.resize(static_cast<std::size_t>(n_schemes));
            acc.csv_rows.resize(static_cast<std::size_t>(n_schemes));

            for (int traj = begin; traj < end; ++traj) {
                NoiseParams np = cfg.noise_base();
                np.stream_id = static_cast<std::uint64_t>(traj);
                const ComplexNoisePath path = generate_complex_path(np);

                std::map<SchemeKind, PovmTrajectory> results;
                for (int sc = 0; sc < n_schemes; ++sc) {
                    SchemeSpec spec;
                    spec.kind = cfg.schemes[static_cast<std::size_t>(sc)];
                    spec.physics = cfg.physics;
                    spec.convention = cfg.convention;
                    spec.n_fock = cfg.n_fock;
                    PovmTrajectory traj_result =
                        reconstruct_povm(spec, cavity, path, icfg, np.stream_id);

                    auto& stats = acc.scheme_stats[static_cast<std::size_t>(sc)];
                    if (stats.empty()) {
                        stats.resize(traj_result.times.size());
                        if (acc.times.empty()) acc.times = traj_result.times;
                    }
                    for (std::size_t k = 0; k < traj_result.times.size(); ++k) {
                        const auto& v = traj_result.fourvectors[k];
                        const auto w = window_clamped(v);
                        stats[k][kMu].add(v.mu);
                        stats[k][kANorm].add(v.bloch_norm());
                        stats[k][kSharp].add(sharpness(w));
                        stats[k][kGap].add(v.mu > 0 ? (v.mu - v.bloch_norm()) / v.mu : 0.0);
                    }
                    acc.diagnostics[static_cast<std::size_t>(sc)].merge(traj_result.diag);

                    if (traj < csv_limit) {
                        auto& rows = acc.csv_rows[static_cast<std::size_t>(sc)];
                        for (std::size_t k = 0; k < traj_result.times.size(); ++k) {
                            const auto& v = traj_result.fourvectors[k];
                            rows += format_double(traj_result.times[k]);
                            rows += ',';
                            rows += format_double(v.mu);
                            rows += ',';
                            rows += format_double(v.bloch.x());
                            rows += ',';
                            rows += format_double(v.bloch.y());
                            rows += ',';
                            rows += format_double(v.bloch.z());
                            rows += ',';
                            rows += scheme_name(traj_result.scheme);
                            rows += ',';
                            rows += std::to_string(traj);
                            rows += '\n';
                        }
                    }
                    results.emplace(spec.kind, std::move(traj_result));
                }

                for (std::size_t p = 0; p < pairs.size(); ++p) {
                    const auto& vx = results.at(pairs[p].x);
                    const auto& vy = results.at(pairs[p].y);
                    auto& stats = acc.pair_stats[p];
                    if (stats.empty()) stats.resize(vx.times.size());
                    for (std::size_t k = 0; k < vx.times.size(); ++k) {
                        stats[k].add(compatibility(window_clamped(vx.fourvectors[k]),
                                                   window_clamped(vy.fourvectors[k])));
                    }
                }
            }
        });

        // Merge in fixed chunk order.
        ChunkAccum total = std::move(chunks[0]);
        for (int c = 1; c < n_chunks; ++c) {
            auto& other = chunks[static_cast<std::size_t>(c)];
            for (int sc = 0; sc < n_schemes; ++sc) {
                auto& into = total.scheme_stats[static_cast<std::size_t>(sc)];
                auto& from = other.scheme_stats[static_cast<std::size_t>(sc)];
                for (std::size_t k = 0; k < into.size(); ++k)
                    for (int st = 0; st < kNStats; ++st) into[k][static_cast<std::size_t>(st)].merge(from[k][static_cast<std::size_t>(st)]);
                total.diagnostics[static_cast<std::size_t>(sc)].merge(
                    other.diagnostics[static_cast<std::size_t>(sc)]);
                total.csv_rows[static_cast<std::size_t>(sc)] +=
                    other.csv_rows[static_cast<std::size_t>(sc)];
            }
            for (std::size_t p = 0; p < pairs.size(); ++p)
                for (std::size_t k = 0; k < total.pair_stats[p].size(); ++k)
                    total.pair_stats[p][k].merge(other.pair_stats[p][k]);
        }

        const std::string tag = squeeze_tag(s);
        for (int sc = 0; sc < n_schemes; ++sc) {
            const auto kind = cfg.schemes[static_cast<std::size_t>(sc)];
            auto povm_csv =
                writer.open(std::string("povm_") + scheme_name(kind) + "_s" + tag + ".csv");
            povm_csv << "t,mu,ax,ay,az,scheme,stream_id\n";
            povm_csv << total.csv_rows[static_cast<std::size_t>(sc)];

            const auto& stats = total.scheme_stats[static_cast<std::size_t>(sc)];
            for (std::size_t k = 0; k < stats.size(); ++k) {
                summary << format_double(s) << ',' << scheme_name(kind) << ','
                        << format_double(total.times[k]);
                for (int st = 0; st < kNStats; ++st)
                    summary << ',' << format_double(stats[k][static_cast<std::size_t>(st)].mean)
                            << ',' << format_double(stats[k][static_cast<std::size_t>(st)].sem());
                summary << '\n';
            }
            const auto& d = total.diagnostics[static_cast<std::size_t>(sc)];
            diag_csv << format_double(s) << ',' << scheme_name(kind) << ','
                     << d.positivity_violations << ',' << d.window_violations << ','
                     << format_double(d.min_eigenvalue) << ','
                     << format_double(d.max_window_excess) << '\n';
        }
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            for (std::size_t k = 0; k < total.pair_stats[p].size(); ++k)
                pair_csv << format_double(s) << ',' << pairs[p].name << ','
                         << format_double(total.times[k]) << ','
                         << format_double(total.pair_stats[p][k].mean) << ','
                         << format_double(total.pair_stats[p][k].sem()) << '\n';
        }

        // Plots: bias with its positivity window, sharpness, compatibility.
        const std::array<std::string, 6> palette = {"#1f6fb2", "#d1495b", "#3a7d44",
                                                    "#8a5fbf", "#c98a00", "#4b6a88"};
        std::vector<LineSeries> bias_series, sharp_series, compat_series;
        for (int sc = 0; sc < n_schemes; ++sc) {
            const auto& stats = total.scheme_stats[static_cast<std::size_t>(sc)];
            LineSeries mu, lower, upper, sharp;
            mu.label = scheme_name(cfg.schemes[static_cast<std::size_t>(sc)]);
            mu.color = palette[static_cast<std::size_t>(sc) % palette.size()];
            lower.color = upper.color = mu.color;
            lower.dashed = upper.dashed = true;
            sharp.label = mu.label;
            sharp.color = mu.color;
            for (std::size_t k = 0; k < stats.size(); ++k) {
                const double t = total.times[k];
                mu.x.push_back(t);
                mu.y.push_back(stats[k][kMu].mean);
                lower.x.push_back(t);
                lower.y.push_back(stats[k][kANorm].mean);
                upper.x.push_back(t);
                upper.y.push_back(2.0 - stats[k][kANorm].mean);
                sharp.x.push_back(t);
                sharp.y.push_back(stats[k][kSharp].mean);
            }
            bias_series.push_back(mu);
            bias_series.push_back(lower);
            bias_series.push_back(upper);
            sharp_series.push_back(sharp);
        }
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            LineSeries c;
            c.label = pairs[p].name;
            c.color = palette[p % palette.size()];
            for (std::size_t k = 0; k < total.pair_stats[p].size(); ++k) {
                c.x.push_back(total.times[k]);
                c.y.push_back(total.pair_stats[p][k].mean);
            }
            compat_series.push_back(c);
        }
        {
            const std::string name = "bias_s" + tag + ".svg";
            write_line_svg((writer.dir() / name).string(), "Bias and positivity window, s = " +
                                                               format_double(s),
                           "t", "mu", bias_series);
            writer.note(name);
        }
        {
            const std::string name = "sharpness_s" + tag + ".svg";
            write_line_svg((writer.dir() / name).string(), "Sharpness, s = " + format_double(s),
                           "t", "S", sharp_series);
            writer.note(name);
        }
        if (!compat_series.empty()) {
            const std::string name = "compat_s" + tag + ".svg";
            write_line_svg((writer.dir() / name).string(),
                           "Pair compatibility, s = " + format_double(s), "t", "C", compat_series);
            writer.note(name);
        }
    }
}

void run_phasespace(const ExperimentConfig& cfg, RunWriter& writer) {
    Matrix rho;
    std::string label;
    if (cfg.state_kind == "fock") {
        const int dim = std::max(16, cfg.fock_n + 2);
        const Vector psi = fock_state(cfg.fock_n, dim);
        rho = psi * psi.adjoint();
        label = "Fock n = " + std::to_string(cfg.fock_n);
    } else if (cfg.state_kind == "vacuum") {
        const Vector psi = fock_state(0, 16);
        rho = psi * psi.adjoint();
        label = "vacuum";
    } else {
        Vector psi;
        int n_fock = 15;
        for (;; n_fock += 10) {
            try {
                psi = build_squeezed_vacuum(cfg.state_s, n_fock);
                break;
            } catch (const TruncationError&) {
                if (n_fock > 60) throw;
            }
        }
        rho = psi * psi.adjoint();
        label = "squeezed s = " + format_double(cfg.state_s);
    }

    const PhaseFunction w = wigner(rho, cfg.grid);
    const PhaseFunction q = husimi_q(rho, cfg.grid);

    auto wig_csv = writer.open("wigner.csv");
    wig_csv << "q,p,value\n";
    auto hus_csv = writer.open("husimi.csv");
    hus_csv << "q,p,value\n";
    for (int i = 0; i < cfg.grid.n_q; ++i) {
        for (int j = 0; j < cfg.grid.n_p; ++j) {
            wig_csv << format_double(cfg.grid.q(i)) << ',' << format_double(cfg.grid.p(j)) << ','
                    << format_double(w.values(i, j)) << '\n';
            hus_csv << format_double(cfg.grid.q(i)) << ',' << format_double(cfg.grid.p(j)) << ','
                    << format_double(q.values(i, j)) << '\n';
        }
    }

    // Marginals are computed on a widened grid so the smearing kernel loses
    // no mass over the edges, then restricted to the requested window.
    PhaseGrid wide = cfg.grid;
    const int pad = static_cast<int>(std::ceil(5.0 / cfg.grid.dq()));
    wide.q_min -= pad * cfg.grid.dq();
    wide.q_max += pad * cfg.grid.dq();
    wide.n_q += 2 * pad;
    const PhaseFunction w_wide = wigner(rho, wide);
    const PhaseFunction q_wide = husimi_q(rho, wide);
    const auto qs = grid_q_points(wide);
    const auto sharp = marginal_q(w_wide);
    const auto unsharp = marginal_q(q_wide);
    const auto smeared = smeared_marginal(sharp, qs);
    auto marg_csv = writer.open("marginals.csv");
    marg_csv << "q,sharp,husimi,smeared_sharp\n";
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (qs[i] < cfg.grid.q_min - 1e-9 || qs[i] > cfg.grid.q_max + 1e-9) continue;
        marg_csv << format_double(qs[i]) << ',' << format_double(sharp[i]) << ','
                 << format_double(unsharp[i]) << ',' << format_double(smeared[i]) << '\n';
    }

    write_heatmap_svg((writer.dir() / "wigner.svg").string(), "Wigner, " + label, w);
    writer.note("wigner.svg");
    write_heatmap_svg((writer.dir() / "husimi.svg").string(), "Husimi Q, " + label, q);
    writer.note("husimi.svg");
    std::vector<LineSeries> series(3);
    series[0] = {qs, sharp, "sharp", "#1f6fb2", false};
    series[1] = {qs, unsharp, "husimi marginal", "#d1495b", false};
    series[2] = {qs, smeared, "smeared sharp", "#3a7d44", true};
    write_line_svg((writer.dir() / "marginals.svg").string(), "Position marginals, " + label, "q",
                   "density", series);
    writer.note("marginals.svg");
}

void run_noise(const ExperimentConfig& cfg, RunWriter& writer) {
    std::vector<LineSeries> series;
    const std::array<std::string, 3> palette = {"#1f6fb2", "#d1495b", "#3a7d44"};
    for (int k = 0; k < cfg.noise_paths; ++k) {
        NoiseParams np = cfg.noise_base();
        np.stream_id = static_cast<std::uint64_t>(k);
        const ComplexNoisePath path = generate_complex_path(np);
        auto csv = writer.open("noise_path" + std::to_string(k) + ".csv");
        csv << "t,x,y\n";
        LineSeries sx;
        sx.label = "x, stream " + std::to_string(k);
        sx.color = palette[static_cast<std::size_t>(k) % palette.size()];
        for (std::size_t i = 0; i < path.x.values.size(); ++i) {
            const double t = static_cast<double>(i) * path.dt();
            csv << format_double(t) << ',' << format_double(path.x.values[i]) << ','
                << format_double(path.y.values[i]) << '\n';
            sx.x.push_back(t);
            sx.y.push_back(path.x.values[i]);
        }
        series.push_back(sx);
    }
    write_line_svg((writer.dir() / "noise.svg").string(), "Ornstein-Uhlenbeck records", "t", "x",
                   series);
    writer.note("noise.svg");
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int workers) {
    cfg.validate();
    fs::create_directories(out_dir);
    RunWriter writer(out_dir);
    try {
        if (cfg.kind == "run")
            run_dyne(cfg, writer, workers);
        else if (cfg.kind == "phasespace")
            run_phasespace(cfg, writer);
        else
            run_noise(cfg, writer);

        json manifest;
        manifest["tool"] = "qdyne";
        manifest["version"] = kVersion;
        manifest["config"] = json::parse(cfg.to_json_text());
        manifest["outputs"] = writer.files();
        auto out = writer.open("manifest.json");
        out << manifest.dump(2) << '\n';
    } catch (...) {
        writer.remove_all();
        throw;
    }
}

// ---------------------------------------------------------------------------
// Report

namespace {

struct SummaryRow {
    double s, t, mu, sem_mu, anorm, sem_anorm, sharp, sem_sharp, gap, sem_gap;
    std::string scheme;
};

double table_double(const CsvTable& t, std::size_t r, const char* name) {
    return t.as_double(r, t.column(name));
}

}  // namespace

std::string generate_report(const std::string& run_dir) {
    const fs::path dir(run_dir);
    if (!fs::exists(dir / "summary.csv"))
        throw ConfigError("not a run directory (missing summary.csv): " + run_dir);
    const CsvTable summary = read_csv((dir / "summary.csv").string());
    std::vector<SummaryRow> rows;
    for (std::size_t r = 0; r < summary.rows.size(); ++r) {
        SummaryRow row;
        row.s = table_double(summary, r, "s");
        row.t = table_double(summary, r, "t");
        row.mu = table_double(summary, r, "mean_mu");
        row.sem_mu = table_double(summary, r, "sem_mu");
        row.anorm = table_double(summary, r, "mean_anorm");
        row.sem_anorm = table_double(summary, r, "sem_anorm");
        row.sharp = table_double(summary, r, "mean_sharpness");
        row.sem_sharp = table_double(summary, r, "sem_sharpness");
        row.gap = table_double(summary, r, "mean_gap");
        row.sem_gap = table_double(summary, r, "sem_gap");
        row.scheme = summary.rows[r][static_cast<std::size_t>(summary.column("scheme"))];
        rows.push_back(row);
    }

    std::vector<double> s_values;
    std::vector<std::string> schemes;
    double t_final = 0.0;
    for (const auto& r : rows) {
        if (std::find(s_values.begin(), s_values.end(), r.s) == s_values.end())
            s_values.push_back(r.s);
        if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end())
            schemes.push_back(r.scheme);
        t_final = std::max(t_final, r.t);
    }
    auto rows_for = [&](double s, const std::string& scheme) {
        std::vector<SummaryRow> out;
        for (const auto& r : rows)
            if (r.s == s && r.scheme == scheme) out.push_back(r);
        return out;
    };
    auto at_final = [&](double s, const std::string& scheme) -> const SummaryRow* {
        const SummaryRow* best = nullptr;
        for (const auto& r : rows)
            if (r.s == s && r.scheme == scheme && (!best || r.t > best->t)) best = &r;
        return best;
    };

    std::ostringstream md;
    md << "# Run report\n\n";
    md << "Schemes: ";
    for (std::size_t i = 0; i < schemes.size(); ++i) md << (i ? ", " : "") << schemes[i];
    md << "; squeezings: ";
    for (std::size_t i = 0; i < s_values.size(); ++i)
        md << (i ? ", " : "") << format_double(s_values[i]);
    md << "; final time " << format_double(t_final) << ".\n\n";

    md << "## Bias saturation (relative gap to the lower bound at final time)\n\n";
    md << "| s | scheme | (mu - |a|)/mu | sem |\n|---|---|---|---|\n";
    for (double s : s_values)
        for (const auto& scheme : schemes)
            if (const auto* r = at_final(s, scheme))
                md << "| " << format_double(s) << " | " << scheme << " | "
                   << format_double(r->gap) << " | " << format_double(r->sem_gap) << " |\n";
    md << "\n";

    auto ordering_fraction = [&](double s, const std::string& hi, const std::string& lo) {
        const auto a = rows_for(s, hi);
        const auto b = rows_for(s, lo);
        if (a.empty() || a.size() != b.size()) return -1.0;
        int n = 0, ok = 0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k].t < 1.0) continue;
            ++n;
            if (a[k].sharp >= b[k].sharp) ++ok;
        }
        return n ? static_cast<double>(ok) / n : -1.0;
    };

    md << "## Sharpness ordering (fraction of checkpoints t >= 1 with S_first >= S_second)\n\n";
    md << "| s | comparison | fraction |\n|---|---|---|\n";
    for (double s : s_values) {
        for (auto [hi, lo] : std::vector<std::pair<std::string, std::string>>{
                 {"homodyne_x", "heterodyne_x"}, {"homodyne_y", "heterodyne_y"}}) {
            const double f = ordering_fraction(s, hi, lo);
            if (f >= 0)
                md << "| " << format_double(s) << " | " << hi << " vs " << lo << " | "
                   << format_double(f) << " |\n";
        }
    }
    md << "\n";

    md << "## Marginal asymmetry |S_X - S_Y| at final time\n\n";
    md << "| s | pair | asymmetry |\n|---|---|---|\n";
    for (double s : s_values) {
        for (auto [x, y, name] : std::vector<std::tuple<std::string, std::string, std::string>>{
                 {"homodyne_x", "homodyne_y", "homodyne"},
                 {"heterodyne_x", "heterodyne_y", "heterodyne"},
                 {"adiabatic_x", "adiabatic_y", "adiabatic"}}) {
            const auto* rx = at_final(s, x);
            const auto* ry = at_final(s, y);
            if (rx && ry)
                md << "| " << format_double(s) << " | " << name << " | "
                   << format_double(std::abs(rx->sharp - ry->sharp)) << " |\n";
        }
    }
    md << "\n";

    if (fs::exists(dir / "pairs.csv")) {
        const CsvTable pair_table = read_csv((dir / "pairs.csv").string());
        md << "## Compatibility sign summary\n\n";
        md << "| s | pair | min mean C | C at final time |\n|---|---|---|---|\n";
        std::map<std::pair<std::string, double>, std::pair<double, double>> info;
        for (std::size_t r = 0; r < pair_table.rows.size(); ++r) {
            const double s = table_double(pair_table, r, "s");
            const std::string pair =
                pair_table.rows[r][static_cast<std::size_t>(pair_table.column("pair"))];
            const double c = table_double(pair_table, r, "mean_c");
            auto key = std::make_pair(pair, s);
            auto it = info.find(key);
            if (it == info.end())
                info[key] = {c, c};
            else {
                it->second.first = std::min(it->second.first, c);
                it->second.second = c;  // rows are time-ordered
            }
        }
        for (const auto& [key, val] : info)
            md << "| " << format_double(key.second) << " | " << key.first << " | "
               << format_double(val.first) << " | " << format_double(val.second) << " |\n";
        md << "\n";
    }

    // Adiabatic-versus-heterodyne sharpness gap trajectory, when both exist.
    {
        bool have = false;
        std::ostringstream sect;
        sect << "## Adiabatic vs heterodyne sharpness gap\n\n";
        sect << "| s | max |dS| | |dS| at final time |\n|---|---|---|\n";
        for (double s : s_values) {
            const auto a = rows_for(s, "adiabatic_x");
            const auto h = rows_for(s, "heterodyne_x");
            if (a.empty() || a.size() != h.size()) continue;
            have = true;
            double dmax = 0.0, dfinal = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) {
                const double d = std::abs(a[k].sharp - h[k].sharp);
                dmax = std::max(dmax, d);
                dfinal = d;
            }
            sect << "| " << format_double(s) << " | " << format_double(dmax) << " | "
                 << format_double(dfinal) << " |\n";
        }
        if (have) md << sect.str() << "\n";
    }

    if (fs::exists(dir / "diagnostics.csv")) {
        const CsvTable diag = read_csv((dir / "diagnostics.csv").string());
        md << "## Diagnostics\n\n";
        md << "| s | scheme | positivity violations | window violations | min eigenvalue |\n"
           << "|---|---|---|---|---|\n";
        for (std::size_t r = 0; r < diag.rows.size(); ++r)
            md << "| " << diag.rows[r][0] << " | " << diag.rows[r][1] << " | " << diag.rows[r][2]
               << " | " << diag.rows[r][3] << " | " << diag.rows[r][4] << " |\n";
        md << "\n";
    }
    return md.str();
}

}  // namespace qdyne
