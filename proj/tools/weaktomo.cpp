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

// Command-line front end: canned demos for the built-in states, config-driven
// sweep/score/disk experiments, and the validation suite.
//
// Exit codes: 0 success, 1 usage/config error, 2 validation failure,
// 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weaktomo/weaktomo.hpp"

using namespace weaktomo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

void warn_large_eps(const std::vector<double>& grid) {
    for (double e : grid) {
        if (e > 2.0) {
            std::fprintf(stderr,
                         "warning: eps > 2 amplifies estimator variance by e^eps; "
                         "results are statistically weak\n");
            return;
        }
    }
}

std::string a_label(double a) {
    std::string s = detail::fmt_double(a);
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

// Applies command-line overrides shared by the config-driven subcommands.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> engine;
    std::optional<std::string> estimator;
    std::optional<int> workers;
    std::optional<long> runs;

    void apply(ExperimentConfig& cfg) const {
        if (seed) cfg.seed = *seed;
        if (engine) cfg.engine = engine_from_string(*engine);
        if (estimator) cfg.estimator = estimator_from_string(*estimator);
        if (workers) cfg.workers = *workers;
        if (runs) cfg.runs = *runs;
    }
};

void add_overrides(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--seed", ov.seed, "Master seed override");
    cmd->add_option("--engine", ov.engine, "trajectory or multinomial")
        ->check(CLI::IsMember({"trajectory", "multinomial"}));
    cmd->add_option("--estimator", ov.estimator, "kept or calibrated")
        ->check(CLI::IsMember({"kept", "calibrated"}));
    cmd->add_option("--workers", ov.workers, "Worker thread count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--runs", ov.runs, "Runs per cell override")->check(CLI::PositiveNumber);
}

void write_outputs(const std::string& out_dir, const std::string& stem,
                   const std::string& csv, const nlohmann::json& summary) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/" + stem + ".csv", csv);
    write_file(out_dir + "/" + stem + "_summary.json", summary.dump(2) + "\n");
}

// One plot series per a: x = eps, weak mean/std plus the baseline constants.
void write_series(const std::string& out_dir, const std::string& stem,
                  const std::vector<SweepRow>& rows) {
    // baselines keyed by (state_id, n)
    auto baseline = [&](const std::string& id, long n) -> const SweepRow* {
        for (const auto& r : rows)
            if ((r.scheme == SchemeKind::ProjectiveFull || r.scheme == SchemeKind::ProjectiveDisk) &&
                r.state_id == id && r.ensemble_n == n)
                return &r;
        return nullptr;
    };
    std::set<std::string> written;
    for (const auto& r : rows) {
        if (r.scheme == SchemeKind::ProjectiveFull || r.scheme == SchemeKind::ProjectiveDisk)
            continue;
        const std::string path = out_dir + "/" + stem + "_" + r.state_id + "_n" +
                                 std::to_string(r.ensemble_n) + "_a" + a_label(r.discard_a) +
                                 ".csv";
        const bool fresh = written.insert(path).second;
        std::ofstream out(path, fresh ? std::ios::trunc : std::ios::app);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        if (fresh) out << "eps,weak_mean_fidelity,weak_std_fidelity,baseline_mean_fidelity,baseline_std_fidelity\n";
        const SweepRow* b = baseline(r.state_id, r.ensemble_n);
        out << detail::fmt_double(r.eps1) << ',' << detail::fmt_double(r.mean_fidelity) << ','
            << detail::fmt_double(r.std_fidelity) << ','
            << (b ? detail::fmt_double(b->mean_fidelity) : "") << ','
            << (b ? detail::fmt_double(b->std_fidelity) : "") << "\n";
    }
}

int run_sweep_like(const ExperimentConfig& cfg, const std::string& out_dir,
                   const std::string& stem, bool series, const std::string& command) {
    warn_large_eps(cfg.eps_grid);
    SweepSpec spec;
    spec.states = cfg.states;
    spec.weak_scheme = cfg.weak_scheme;
    spec.baseline_scheme = cfg.baseline_scheme;
    spec.engine = cfg.engine;
    spec.estimator = cfg.estimator;
    spec.eps_grid = cfg.eps_grid;
    spec.a_grid = cfg.a_grid;
    spec.n_list = cfg.n_list;
    spec.runs = cfg.runs;
    spec.seed = cfg.seed;
    spec.workers = cfg.workers;
    const std::vector<SweepRow> rows = sweep(spec);
    write_outputs(out_dir, stem, sweep_csv(rows), summary_json(cfg, command));
    if (series) write_series(out_dir, stem, rows);
    std::printf("%s: %zu rows -> %s/%s.csv\n", command.c_str(), rows.size(), out_dir.c_str(),
                stem.c_str());
    return kExitOk;
}

int run_score_like(const ExperimentConfig& cfg, const std::string& out_dir,
                   const std::string& stem, const std::string& command) {
    warn_large_eps(cfg.eps_grid);
    std::vector<ScoreRow> all_rows;
    for (long n : cfg.n_list) {
        ScoreSpec spec;
        spec.states = cfg.states;
        spec.weak_scheme = cfg.weak_scheme;
        spec.baseline_scheme = cfg.baseline_scheme;
        spec.engine = cfg.engine;
        spec.estimator = cfg.estimator;
        spec.eps_grid = cfg.eps_grid;
        spec.a_grid = cfg.a_grid;
        spec.ensemble_n = n;
        spec.runs = cfg.runs;
        spec.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(n)});
        spec.workers = cfg.workers;
        spec.best_over_eps = cfg.best_over_eps;
        for (const ScoreRow& r : score(spec)) all_rows.push_back(r);
    }

    nlohmann::json summary = summary_json(cfg, command);
    summary["threshold_a"] = nullptr;
    for (long n : cfg.n_list) {
        for (const ScoreRow& r : all_rows) {
            if (r.ensemble_n != n) continue;
            if (2 * r.wins > r.total) {
                if (summary["threshold_a"].is_null()) summary["threshold_a"] = r.discard_a;
                std::printf("%s: n=%ld smallest a with win fraction > 0.5: %s\n", command.c_str(),
                            n, detail::fmt_double(r.discard_a).c_str());
                break;
            }
        }
    }
    write_outputs(out_dir, stem, score_csv(all_rows), summary);
    std::printf("%s: %zu rows -> %s/%s.csv\n", command.c_str(), all_rows.size(), out_dir.c_str(),
                stem.c_str());
    return kExitOk;
}

int run_demo(const std::string& state_name, const std::string& out_dir, long runs,
             const Overrides& ov) {
    const NamedState ns = builtin_state(state_name);
    // rho1 is the no-discard demo; rho2 sweeps the discard grid up to 0.8
    nlohmann::json doc;
    doc["states"] = {{"named", {state_name}}};
    doc["eps_grid"] = {{"start", 0.1}, {"stop", 2.0}, {"step", 0.1}};
    doc["a_grid"] = state_name == "rho1" ? nlohmann::json::array({0.0})
                                         : nlohmann::json::array({0.0, 0.2, 0.4, 0.6, 0.8});
    doc["n_list"] = {30};
    doc["runs"] = runs;
    ExperimentConfig cfg = parse_config(doc);
    ov.apply(cfg);
    return run_sweep_like(cfg, out_dir, "demo_" + state_name, true, "demo");
}

int run_validate(std::uint64_t seed, double erf_bias, const std::string& json_path) {
    const ValidationReport report = run_validation(ValidateOptions{seed, erf_bias});
    for (const CheckResult& c : report.checks)
        std::printf("[%s] %s: deviation %.3g (bound %.3g) - %s\n", c.passed ? "PASS" : "FAIL",
                    c.name.c_str(), c.deviation, c.bound, c.detail.c_str());
    if (!json_path.empty()) write_file(json_path, report.to_json().dump(2) + "\n");
    if (!report.all_passed()) {
        std::fprintf(stderr, "validation failed\n");
        return kExitValidation;
    }
    std::printf("all checks passed\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit tomography by sequential weak measurements with state recycling"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();

    // demo
    auto* demo = app.add_subcommand("demo", "Canned eps sweep for a built-in state (N=30)");
    std::string demo_state;
    long demo_runs = 10000;
    Overrides demo_ov;
    demo->add_option("state", demo_state, "rho1 or rho2")
        ->required()
        ->check(CLI::IsMember({"rho1", "rho2"}));
    demo->add_option("--runs", demo_runs, "Runs per cell")->check(CLI::PositiveNumber);
    demo->add_option("--seed", demo_ov.seed, "Master seed override");
    demo->add_option("--engine", demo_ov.engine, "trajectory or multinomial")
        ->check(CLI::IsMember({"trajectory", "multinomial"}));
    demo->add_option("--estimator", demo_ov.estimator, "kept or calibrated")
        ->check(CLI::IsMember({"kept", "calibrated"}));
    demo->add_option("--workers", demo_ov.workers, "Worker thread count")
        ->check(CLI::PositiveNumber);

    // sweep / score / disk share the config-driven shape
    std::string sweep_config, score_config, disk_config;
    bool sweep_series = false;
    Overrides sweep_ov, score_ov, disk_ov;
    auto* sweep_cmd = app.add_subcommand("sweep", "Fidelity sweep over (state, N, a, eps)");
    sweep_cmd->add_option("--config", sweep_config, "JSON config path")->required();
    sweep_cmd->add_flag("--series", sweep_series, "Also emit per-figure plot series files");
    add_overrides(sweep_cmd, sweep_ov);

    auto* score_cmd = app.add_subcommand("score", "Win/loss scoring against the baseline");
    score_cmd->add_option("--config", score_config, "JSON config path")->required();
    add_overrides(score_cmd, score_ov);

    auto* disk_cmd = app.add_subcommand("disk", "Disk-state scoring (y = 0 schemes)");
    disk_cmd->add_option("--config", disk_config, "JSON config path")->required();
    add_overrides(disk_cmd, disk_ov);

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Run the cross-module invariant suite");
    std::uint64_t validate_seed = 2026;
    double erf_bias = 0.0;
    std::string validate_json;
    validate_cmd->add_option("--seed", validate_seed, "Suite seed");
    validate_cmd->add_option("--erf-bias", erf_bias,
                             "Inject a constant erf error (fault-injection test hook)");
    validate_cmd->add_option("--json", validate_json, "Write the machine-readable report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // single usage-error exit code regardless of CLI11's internal codes
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (demo->parsed()) return run_demo(demo_state, out_dir, demo_runs, demo_ov);
        if (sweep_cmd->parsed()) {
            ExperimentConfig cfg = load_config(sweep_config);
            sweep_ov.apply(cfg);
            return run_sweep_like(cfg, out_dir, "sweep", sweep_series, "sweep");
        }
        if (score_cmd->parsed()) {
            ExperimentConfig cfg = load_config(score_config);
            score_ov.apply(cfg);
            return run_score_like(cfg, out_dir, "score", "score");
        }
        if (disk_cmd->parsed()) {
            ExperimentConfig cfg = load_config(disk_config);
            if (cfg.weak_scheme == SchemeKind::WeakFull) {
                cfg.weak_scheme = SchemeKind::WeakDisk;
                cfg.baseline_scheme = SchemeKind::ProjectiveDisk;
            }
            disk_ov.apply(cfg);
            return run_score_like(cfg, out_dir, "disk", "disk");
        }
        if (validate_cmd->parsed()) return run_validate(validate_seed, erf_bias, validate_json);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    }
    return kExitUsage;
}
