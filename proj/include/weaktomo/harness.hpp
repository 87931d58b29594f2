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
 * Monte Carlo experiment runner: random-state generation, fidelity
 * statistics over runs, (eps, a, N) sweeps, and win/loss scoring against
 * the projective baseline.
 *
 * Every run, sweep cell, and score cell derives its random stream from the
 * master seed plus its coordinates, so entire experiments are
 * bit-reproducible for any worker count.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "weaktomo/bloch.hpp"
#include "weaktomo/protocol.hpp"
#include "weaktomo/rng.hpp"

namespace weaktomo {

/// Uniform over the closed unit ball (direction uniform on the sphere,
/// radius = u^(1/3)).
inline BlochVector random_ball_state(Rng& rng) {
    double x, y, z, n2;
    do {
        x = rng.normal();
        y = rng.normal();
        z = rng.normal();
        n2 = x * x + y * y + z * z;
    } while (n2 < 1e-24);
    const double r = std::cbrt(rng.uniform01()) / std::sqrt(n2);
    return BlochVector{x * r, y * r, z * r};
}

/// Uniform over the closed unit disk with <sy> = 0 (angle uniform,
/// radius = sqrt(u)).
inline BlochVector random_disk_state(Rng& rng) {
    const double theta = 2.0 * 3.14159265358979323846 * rng.uniform01();
    const double r = std::sqrt(rng.uniform01());
    return BlochVector{r * std::cos(theta), 0.0, r * std::sin(theta)};
}

struct RunStatistics {
    double mean_fidelity = 0.0;
    double std_fidelity = 0.0;  // population standard deviation
    long runs = 0;
    long degenerate_runs = 0;
};

/// Executes cfg.runs independent runs, each on a stream derived from
/// (cfg.seed, run index). Identical inputs give bit-identical statistics.
inline RunStatistics monte_carlo(const BlochVector& state, const SchemeConfig& cfg) {
    cfg.validate();
    double sum = 0.0, sum_sq = 0.0;
    long degenerate = 0;
    for (long i = 0; i < cfg.runs; ++i) {
        Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(i)}));
        const RunResult r = run_scheme(state, cfg, rng);
        const double f = fidelity(state, r.estimate);
        sum += f;
        sum_sq += f * f;
        if (r.estimate.any_degenerate()) ++degenerate;
    }
    const double mean = sum / static_cast<double>(cfg.runs);
    const double var = std::max(0.0, sum_sq / static_cast<double>(cfg.runs) - mean * mean);
    return RunStatistics{mean, std::sqrt(var), cfg.runs, degenerate};
}

/// One sweep cell: a (state, scheme, N, a, eps) point with its statistics.
struct SweepRow {
    std::string state_id;
    BlochVector state;
    SchemeKind scheme;
    EngineKind engine;
    EstimatorKind estimator;
    long ensemble_n;
    double eps1;
    double eps2;
    double discard_a;
    long runs;
    double mean_fidelity;
    double std_fidelity;
    long degenerate_runs;
    std::uint64_t seed;
};

struct ScoreRow {
    long ensemble_n;
    double discard_a;
    long wins;
    long total;
};

/// A labelled input state.
struct NamedState {
    std::string id;
    BlochVector state;
};

struct SweepSpec {
    std::vector<NamedState> states;
    SchemeKind weak_scheme = SchemeKind::WeakFull;
    SchemeKind baseline_scheme = SchemeKind::ProjectiveFull;
    EngineKind engine = EngineKind::Multinomial;
    EstimatorKind estimator = EstimatorKind::KeptFrequency;
    std::vector<double> eps_grid;
    std::vector<double> a_grid;
    std::vector<long> n_list;
    long runs = 1000;
    std::uint64_t seed = 0;
    int workers = 1;
};

namespace detail {

/// Runs `count` independent jobs on `workers` threads. Results land in a
/// vector indexed by job id; aggregation never depends on execution order.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    const int n_threads = std::max(1, workers);
    if (n_threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = static_cast<std::size_t>(t); i < count;
                 i += static_cast<std::size_t>(n_threads))
                fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Cell seed tags keep weak and baseline streams disjoint.
constexpr std::uint64_t kWeakTag = 1;
constexpr std::uint64_t kBaselineTag = 2;

}  // namespace detail

/// Full Cartesian product (state, N, a, eps) for the weak scheme plus one
/// baseline row per (state, N). Rows are emitted in deterministic order and
/// each cell's seed derives from the master seed and cell coordinates.
inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
    const std::size_t n_states = spec.states.size();
    const std::size_t n_n = spec.n_list.size();
    const std::size_t n_a = spec.a_grid.size();
    const std::size_t n_eps = spec.eps_grid.size();
    const std::size_t weak_cells = n_states * n_n * n_a * n_eps;
    const std::size_t total = weak_cells + n_states * n_n;

    std::vector<SweepRow> rows(total);
    detail::parallel_for(total, spec.workers, [&](std::size_t job) {
        SweepRow row;
        row.engine = spec.engine;
        row.estimator = spec.estimator;
        row.runs = spec.runs;
        SchemeConfig cfg;
        cfg.engine = spec.engine;
        cfg.estimator = spec.estimator;
        cfg.runs = spec.runs;

        if (job < weak_cells) {
            // order: (state, N, a, eps), eps fastest
            std::size_t rest = job;
            const std::size_t ie = rest % n_eps; rest /= n_eps;
            const std::size_t ia = rest % n_a;   rest /= n_a;
            const std::size_t in = rest % n_n;   rest /= n_n;
            const std::size_t is = rest;

            const NamedState& ns = spec.states[is];
            cfg.scheme = spec.weak_scheme;
            cfg.ensemble_n = spec.n_list[in];
            cfg.eps1 = cfg.eps2 = spec.eps_grid[ie];
            cfg.discard_a = spec.a_grid[ia];
            cfg.seed = derive_seed(spec.seed, {detail::kWeakTag, is, in, ia, ie});

            const RunStatistics st = monte_carlo(ns.state, cfg);
            row.state_id = ns.id;
            row.state = ns.state;
            row.scheme = cfg.scheme;
            row.ensemble_n = cfg.ensemble_n;
            row.eps1 = cfg.eps1;
            row.eps2 = cfg.eps2;
            row.discard_a = cfg.discard_a;
            row.mean_fidelity = st.mean_fidelity;
            row.std_fidelity = st.std_fidelity;
            row.degenerate_runs = st.degenerate_runs;
            row.seed = cfg.seed;
        } else {
            const std::size_t b = job - weak_cells;
            const std::size_t in = b % n_n;
            const std::size_t is = b / n_n;

            const NamedState& ns = spec.states[is];
            cfg.scheme = spec.baseline_scheme;
            cfg.ensemble_n = spec.n_list[in];
            cfg.discard_a = 0.0;
            cfg.seed = derive_seed(spec.seed, {detail::kBaselineTag, is, in});

            const RunStatistics st = monte_carlo(ns.state, cfg);
            row.state_id = ns.id;
            row.state = ns.state;
            row.scheme = cfg.scheme;
            row.ensemble_n = cfg.ensemble_n;
            row.eps1 = cfg.eps1;
            row.eps2 = cfg.eps2;
            row.discard_a = 0.0;
            row.mean_fidelity = st.mean_fidelity;
            row.std_fidelity = st.std_fidelity;
            row.degenerate_runs = st.degenerate_runs;
            row.seed = cfg.seed;
        }
        rows[job] = std::move(row);
    });
    return rows;
}

struct ScoreSpec {
    std::vector<NamedState> states;
    SchemeKind weak_scheme = SchemeKind::WeakFull;
    SchemeKind baseline_scheme = SchemeKind::ProjectiveFull;
    EngineKind engine = EngineKind::Multinomial;
    EstimatorKind estimator = EstimatorKind::KeptFrequency;
    std::vector<double> eps_grid;
    std::vector<double> a_grid;
    long ensemble_n = 30;
    long runs = 1000;
    std::uint64_t seed = 0;
    int workers = 1;
    // When false, wins are counted at each eps separately and a state wins
    // if it wins at the first grid eps (plain two-scheme comparison).
    bool best_over_eps = true;
};

/// Counts, per discard value, the states whose weak-scheme mean fidelity
/// (maximised over the eps grid) strictly exceeds the projective baseline's
/// mean fidelity. The baseline is computed once per state with matched runs.
inline std::vector<ScoreRow> score(const ScoreSpec& spec) {
    const std::size_t n_states = spec.states.size();
    const std::size_t n_a = spec.a_grid.size();
    const std::size_t n_eps = spec.best_over_eps ? spec.eps_grid.size() : 1;

    // wins[state][a] computed in parallel over states, reduced afterwards.
    std::vector<std::vector<char>> wins(n_states, std::vector<char>(n_a, 0));
    detail::parallel_for(n_states, spec.workers, [&](std::size_t is) {
        const NamedState& ns = spec.states[is];
        SchemeConfig base;
        base.scheme = spec.baseline_scheme;
        base.engine = spec.engine;
        base.estimator = spec.estimator;
        base.ensemble_n = spec.ensemble_n;
        base.runs = spec.runs;
        base.seed = derive_seed(spec.seed, {detail::kBaselineTag, is});
        const double base_mean = monte_carlo(ns.state, base).mean_fidelity;

        for (std::size_t ia = 0; ia < n_a; ++ia) {
            double best = -1e300;
            for (std::size_t ie = 0; ie < n_eps; ++ie) {
                SchemeConfig cfg = base;
                cfg.scheme = spec.weak_scheme;
                cfg.eps1 = cfg.eps2 = spec.eps_grid[ie];
                cfg.discard_a = spec.a_grid[ia];
                cfg.seed = derive_seed(spec.seed, {detail::kWeakTag, is, 0, ia, ie});
                best = std::max(best, monte_carlo(ns.state, cfg).mean_fidelity);
            }
            wins[is][ia] = best > base_mean ? 1 : 0;
        }
    });

    std::vector<ScoreRow> rows(n_a);
    for (std::size_t ia = 0; ia < n_a; ++ia) {
        long w = 0;
        for (std::size_t is = 0; is < n_states; ++is) w += wins[is][ia];
        rows[ia] = ScoreRow{spec.ensemble_n, spec.a_grid[ia], w,
                            static_cast<long>(n_states)};
    }
    return rows;
}

}  // namespace weaktomo
