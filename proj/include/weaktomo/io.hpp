// Copyright 2026 The weaktomo authors
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

/**
 * @file
 * Experiment configuration (single JSON document, unknown fields rejected)
 * and deterministic result emission: CSV rows with a fixed column order and
 * a JSON summary keyed by config hash. Output bytes depend only on
 * (config, seed, version).
 */

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "weaktomo/harness.hpp"
#include "weaktomo/protocol.hpp"

namespace weaktomo {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Thrown for malformed configs; `where` anchors the offending key.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline SchemeKind scheme_from_string(const std::string& s) {
    if (s == "weak_full") return SchemeKind::WeakFull;
    if (s == "projective_full") return SchemeKind::ProjectiveFull;
    if (s == "weak_disk") return SchemeKind::WeakDisk;
    if (s == "projective_disk") return SchemeKind::ProjectiveDisk;
    throw ConfigError("unknown scheme: " + s);
}

inline EngineKind engine_from_string(const std::string& s) {
    if (s == "trajectory") return EngineKind::Trajectory;
    if (s == "multinomial") return EngineKind::Multinomial;
    throw ConfigError("unknown engine: " + s);
}

inline EstimatorKind estimator_from_string(const std::string& s) {
    if (s == "kept") return EstimatorKind::KeptFrequency;
    if (s == "calibrated") return EstimatorKind::Calibrated;
    throw ConfigError("unknown estimator: " + s);
}

/// Grid given either as an explicit array or a {start, stop, step} triple
/// (stop inclusive up to half a step of rounding slack).
inline std::vector<double> parse_grid(const nlohmann::json& j, const std::string& key) {
    std::vector<double> grid;
    if (j.is_array()) {
        for (const auto& v : j) grid.push_back(v.get<double>());
    } else if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            (void)v;
            if (k != "start" && k != "stop" && k != "step")
                throw ConfigError(key + ": unknown grid field '" + k + "'");
        }
        const double start = j.at("start").get<double>();
        const double stop = j.at("stop").get<double>();
        const double step = j.at("step").get<double>();
        if (!(step > 0.0)) throw ConfigError(key + ": step must be > 0");
        for (double v = start; v <= stop + step / 2.0; v += step) grid.push_back(v);
    } else {
        throw ConfigError(key + ": expected array or {start, stop, step}");
    }
    if (grid.empty()) throw ConfigError(key + ": grid is empty");
    return grid;
}

/// Full experiment description parsed from a JSON config document.
struct ExperimentConfig {
    SchemeKind weak_scheme = SchemeKind::WeakFull;
    SchemeKind baseline_scheme = SchemeKind::ProjectiveFull;
    EngineKind engine = EngineKind::Multinomial;
    EstimatorKind estimator = EstimatorKind::KeptFrequency;
    std::vector<NamedState> states;
    std::vector<double> eps_grid;
    std::vector<double> a_grid{0.0};
    std::vector<long> n_list{30};
    long runs = 1000;
    std::uint64_t seed = 0;
    int workers = 1;
    bool best_over_eps = true;
    std::string config_hash;  // FNV-1a of the canonical config dump

    bool is_disk() const {
        return weak_scheme == SchemeKind::WeakDisk || baseline_scheme == SchemeKind::ProjectiveDisk;
    }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Shortest round-trip representation; output bytes are stable across runs.
inline std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void expect_keys(const nlohmann::json& j, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (!allowed.count(k)) throw ConfigError("unknown config field '" + k + "'");
    }
}

}  // namespace detail

inline const std::vector<NamedState>& builtin_states() {
    static const std::vector<NamedState> states = {
        {"rho1", {-0.385, -0.042, 0.397}},
        {"rho2", {-0.601, 0.398, 0.055}},
    };
    return states;
}

inline NamedState builtin_state(const std::string& id) {
    for (const auto& ns : builtin_states())
        if (ns.id == id) return ns;
    throw ConfigError("unknown built-in state: " + id);
}

/// Parses and validates a config document. The `states` field is one of
/// {"list": [[x,y,z], ...]}, {"named": ["rho1", ...]}, {"ball": count} or
/// {"disk": count}; sampled states derive from the master seed.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
    detail::expect_keys(j, {"scheme", "baseline", "engine", "estimator", "states", "eps_grid",
                            "a_grid", "n_list", "runs", "seed", "workers", "best_over_eps"});
    ExperimentConfig cfg;
    if (j.contains("scheme")) cfg.weak_scheme = scheme_from_string(j.at("scheme").get<std::string>());
    cfg.baseline_scheme = cfg.weak_scheme == SchemeKind::WeakDisk ? SchemeKind::ProjectiveDisk
                                                                  : SchemeKind::ProjectiveFull;
    if (j.contains("baseline"))
        cfg.baseline_scheme = scheme_from_string(j.at("baseline").get<std::string>());
    if (j.contains("engine")) cfg.engine = engine_from_string(j.at("engine").get<std::string>());
    if (j.contains("estimator"))
        cfg.estimator = estimator_from_string(j.at("estimator").get<std::string>());
    if (j.contains("runs")) cfg.runs = j.at("runs").get<long>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("best_over_eps")) cfg.best_over_eps = j.at("best_over_eps").get<bool>();
    if (j.contains("eps_grid")) cfg.eps_grid = parse_grid(j.at("eps_grid"), "eps_grid");
    if (j.contains("a_grid")) cfg.a_grid = parse_grid(j.at("a_grid"), "a_grid");
    if (j.contains("n_list")) {
        cfg.n_list.clear();
        for (const auto& v : j.at("n_list")) cfg.n_list.push_back(v.get<long>());
        if (cfg.n_list.empty()) throw ConfigError("n_list: empty");
    }

    if (!j.contains("states")) throw ConfigError("missing required field 'states'");
    const auto& js = j.at("states");
    detail::expect_keys(js, {"list", "named", "ball", "disk"});
    if (js.contains("list")) {
        int idx = 0;
        for (const auto& v : js.at("list")) {
            if (!v.is_array() || v.size() != 3) throw ConfigError("states.list: expected [x,y,z]");
            cfg.states.push_back({"state" + std::to_string(idx++),
                                  BlochVector{v[0].get<double>(), v[1].get<double>(),
                                              v[2].get<double>()}});
        }
    }
    if (js.contains("named"))
        for (const auto& v : js.at("named")) cfg.states.push_back(builtin_state(v.get<std::string>()));
    if (js.contains("ball")) {
        const long count = js.at("ball").get<long>();
        Rng rng(derive_seed(cfg.seed, {0xba11}));
        for (long i = 0; i < count; ++i)
            cfg.states.push_back({"ball" + std::to_string(i), random_ball_state(rng)});
    }
    if (js.contains("disk")) {
        const long count = js.at("disk").get<long>();
        Rng rng(derive_seed(cfg.seed, {0xd15c}));
        for (long i = 0; i < count; ++i)
            cfg.states.push_back({"disk" + std::to_string(i), random_disk_state(rng)});
    }
    if (cfg.states.empty()) throw ConfigError("states: no states specified");

    if (cfg.eps_grid.empty()) throw ConfigError("missing required field 'eps_grid'");

    // validate every (scheme, n) combination up front, before any computation
    for (long n : cfg.n_list) {
        SchemeConfig probe;
        probe.scheme = cfg.weak_scheme;
        probe.ensemble_n = n;
        probe.eps1 = probe.eps2 = cfg.eps_grid.front();
        probe.discard_a = cfg.a_grid.front();
        probe.runs = cfg.runs;
        probe.validate();
        probe.scheme = cfg.baseline_scheme;
        probe.validate();
    }

    cfg.config_hash = detail::hex64(detail::fnv1a(j.dump()));
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

inline const char* kSweepCsvHeader =
    "state_id,x,y,z,scheme,engine,n,eps1,eps2,a,runs,mean_fidelity,std_fidelity,"
    "degenerate_runs,seed";

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << kSweepCsvHeader << "\n";
    for (const auto& r : rows) {
        out << r.state_id << ',' << detail::fmt_double(r.state.x) << ','
            << detail::fmt_double(r.state.y) << ',' << detail::fmt_double(r.state.z) << ','
            << to_string(r.scheme) << ',' << to_string(r.engine) << ',' << r.ensemble_n << ','
            << detail::fmt_double(r.eps1) << ',' << detail::fmt_double(r.eps2) << ','
            << detail::fmt_double(r.discard_a) << ',' << r.runs << ','
            << detail::fmt_double(r.mean_fidelity) << ',' << detail::fmt_double(r.std_fidelity)
            << ',' << r.degenerate_runs << ',' << r.seed << "\n";
    }
    return out.str();
}

inline std::string score_csv(const std::vector<ScoreRow>& rows) {
    std::ostringstream out;
    out << "n,a,wins,total,fraction\n";
    for (const auto& r : rows) {
        out << r.ensemble_n << ',' << detail::fmt_double(r.discard_a) << ',' << r.wins << ','
            << r.total << ','
            << detail::fmt_double(static_cast<double>(r.wins) / static_cast<double>(r.total))
            << "\n";
    }
    return out.str();
}

inline nlohmann::json summary_json(const ExperimentConfig& cfg, const std::string& command) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config_hash"] = cfg.config_hash;
    j["seed"] = cfg.seed;
    j["engine"] = to_string(cfg.engine);
    j["estimator"] = to_string(cfg.estimator);
    j["scheme"] = to_string(cfg.weak_scheme);
    j["baseline"] = to_string(cfg.baseline_scheme);
    j["runs"] = cfg.runs;
    j["states"] = cfg.states.size();
    j["std_definition"] = "population";
    return j;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace weaktomo
