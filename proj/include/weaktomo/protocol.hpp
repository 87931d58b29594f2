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
 * The tomography schemes as ensemble-level procedures.
 *
 *  - WeakFull: weak sigma_z, weak sigma_x (state recycled through both),
 *    projective sigma_y; all N copies flow through every stage, discarded
 *    readings drop the reading but never the copy.
 *  - ProjectiveFull: the baseline; thirds of the ensemble measured
 *    projectively along x, y, z.
 *  - WeakDisk / ProjectiveDisk: two-half schemes for states with <sy> = 0.
 *
 * Each scheme runs under two engines. Trajectory samples a pointer reading
 * per copy and applies the conditional Kraus update (the physical chain);
 * Multinomial draws stage counts directly from the closed-form outcome
 * probabilities, which are exactly the trajectory marginals (~50x faster;
 * higher moments differ, expectations agree).
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "weaktomo/bloch.hpp"
#include "weaktomo/estimator.hpp"
#include "weaktomo/pointer.hpp"
#include "weaktomo/rng.hpp"

namespace weaktomo {

enum class SchemeKind { WeakFull, ProjectiveFull, WeakDisk, ProjectiveDisk };
enum class EngineKind { Trajectory, Multinomial };
enum class EstimatorKind { KeptFrequency, Calibrated };

inline std::string to_string(SchemeKind s) {
    switch (s) {
        case SchemeKind::WeakFull: return "weak_full";
        case SchemeKind::ProjectiveFull: return "projective_full";
        case SchemeKind::WeakDisk: return "weak_disk";
        case SchemeKind::ProjectiveDisk: return "projective_disk";
    }
    return "?";
}

inline std::string to_string(EngineKind e) {
    return e == EngineKind::Trajectory ? "trajectory" : "multinomial";
}

inline std::string to_string(EstimatorKind e) {
    return e == EstimatorKind::Calibrated ? "calibrated" : "kept";
}

/// Full experiment description for one scheme execution.
struct SchemeConfig {
    SchemeKind scheme = SchemeKind::WeakFull;
    EngineKind engine = EngineKind::Multinomial;
    EstimatorKind estimator = EstimatorKind::KeptFrequency;
    long ensemble_n = 30;
    double eps1 = 0.5;
    double eps2 = 0.5;
    double discard_a = 0.0;
    long runs = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (ensemble_n < 3) throw std::invalid_argument("SchemeConfig: ensemble_n must be >= 3");
        if (scheme == SchemeKind::ProjectiveFull && ensemble_n % 3 != 0)
            throw std::invalid_argument("SchemeConfig: projective_full needs ensemble_n divisible by 3");
        if ((scheme == SchemeKind::WeakDisk || scheme == SchemeKind::ProjectiveDisk) &&
            ensemble_n % 2 != 0)
            throw std::invalid_argument("SchemeConfig: disk schemes need an even ensemble_n");
        if (!(eps1 > 0.0) || !(eps2 > 0.0))
            throw std::invalid_argument("SchemeConfig: eps1 and eps2 must be > 0");
        if (!(discard_a >= 0.0))
            throw std::invalid_argument("SchemeConfig: discard_a must be >= 0");
        if (runs < 1) throw std::invalid_argument("SchemeConfig: runs must be >= 1");
    }
};

/// One run's estimate plus per-stage tallies (at most four stages; disk
/// schemes use all four, full schemes the first three).
struct RunResult {
    EstimateVector estimate;
    std::array<OutcomeCounts, 4> stage_counts{};
    int stage_count = 0;
};

namespace detail {

inline Outcome draw_three_way(const StageProbabilities& p, Rng& rng) {
    const double u = rng.uniform01();
    if (u < p.p_plus) return Outcome::Plus;
    if (u < p.p_plus + p.p_minus) return Outcome::Minus;
    return Outcome::Discard;
}

inline OutcomeCounts draw_stage_counts(const StageProbabilities& p, long n, Rng& rng) {
    OutcomeCounts c;
    for (long i = 0; i < n; ++i) c.add(draw_three_way(p, rng));
    return c;
}

inline OutcomeCounts draw_projective_counts(double p_plus, long n, Rng& rng) {
    OutcomeCounts c;
    for (long i = 0; i < n; ++i) c.add(rng.bernoulli(p_plus) ? Outcome::Plus : Outcome::Minus);
    return c;
}

}  // namespace detail

/// Weak sigma_z, weak sigma_x, projective sigma_y on all N copies.
inline RunResult run_weak_full(const BlochVector& state, const SchemeConfig& cfg, Rng& rng) {
    const long n = cfg.ensemble_n;
    OutcomeCounts cz, cx, cy;

    if (cfg.engine == EngineKind::Trajectory) {
        const PointerConfig pz{cfg.eps1, cfg.discard_a};
        const PointerConfig px{cfg.eps2, cfg.discard_a};
        for (long i = 0; i < n; ++i) {
            BlochVector copy = state;
            const double q1 = sample_pointer_reading(copy, PauliAxis::Z, pz, rng);
            cz.add(classify(q1, pz));
            copy = kraus_update(copy, PauliAxis::Z, cfg.eps1, q1);

            const double q2 = sample_pointer_reading(copy, PauliAxis::X, px, rng);
            cx.add(classify(q2, px));
            copy = kraus_update(copy, PauliAxis::X, cfg.eps2, q2);

            cy.add(rng.bernoulli((1.0 + copy.y) / 2.0) ? Outcome::Plus : Outcome::Minus);
        }
    } else {
        cz = detail::draw_stage_counts(stage_probs_weak_z(state.z, cfg.eps1, cfg.discard_a), n, rng);
        cx = detail::draw_stage_counts(
            stage_probs_weak_x(state.x, cfg.eps1, cfg.eps2, cfg.discard_a), n, rng);
        cy = detail::draw_projective_counts(
            stage_probs_projective_y(state.y, cfg.eps1, cfg.eps2).p_plus, n, rng);
    }

    RunResult r;
    r.estimate = cfg.estimator == EstimatorKind::Calibrated
                     ? assemble_full_estimate(cz, cx, cy, cfg.eps1, cfg.eps2, cfg.discard_a)
                     : assemble_full_estimate_kept(cz, cx, cy, cfg.eps1, cfg.eps2);
    r.stage_counts = {cz, cx, cy, OutcomeCounts{}};
    r.stage_count = 3;
    return r;
}

/// Baseline: thirds measured projectively along x, y, z; plain frequencies.
inline RunResult run_projective_full(const BlochVector& state, const SchemeConfig& cfg, Rng& rng) {
    const long third = cfg.ensemble_n / 3;
    const OutcomeCounts cx = detail::draw_projective_counts((1.0 + state.x) / 2.0, third, rng);
    const OutcomeCounts cy = detail::draw_projective_counts((1.0 + state.y) / 2.0, third, rng);
    const OutcomeCounts cz = detail::draw_projective_counts((1.0 + state.z) / 2.0, third, rng);

    RunResult r;
    const ComponentEstimate ex = estimate_projective_component(cx, 1.0);
    const ComponentEstimate ey = estimate_projective_component(cy, 1.0);
    const ComponentEstimate ez = estimate_projective_component(cz, 1.0);
    r.estimate = EstimateVector{ex.value, ey.value, ez.value, ex.degenerate, ey.degenerate,
                                ez.degenerate};
    r.stage_counts = {cx, cy, cz, OutcomeCounts{}};
    r.stage_count = 3;
    return r;
}

namespace detail {

// One half of the disk scheme: weak measurement along `weak_axis` followed
// by a projective measurement of the other in-disk axis on the same copies.
inline void run_disk_half(const BlochVector& state, PauliAxis weak_axis, long half,
                          const SchemeConfig& cfg, Rng& rng, OutcomeCounts& weak_counts,
                          OutcomeCounts& proj_counts) {
    const PauliAxis proj_axis = weak_axis == PauliAxis::Z ? PauliAxis::X : PauliAxis::Z;
    const double eps = cfg.eps1;
    if (cfg.engine == EngineKind::Trajectory) {
        const PointerConfig pc{eps, cfg.discard_a};
        for (long i = 0; i < half; ++i) {
            BlochVector copy = state;
            const double q = sample_pointer_reading(copy, weak_axis, pc, rng);
            weak_counts.add(classify(q, pc));
            copy = kraus_update(copy, weak_axis, eps, q);
            const double c = component(copy, proj_axis);
            proj_counts.add(rng.bernoulli((1.0 + c) / 2.0) ? Outcome::Plus : Outcome::Minus);
        }
    } else {
        weak_counts = draw_stage_counts(
            stage_probs_weak_z(component(state, weak_axis), eps, cfg.discard_a), half, rng);
        const double damped = std::exp(-eps / 2.0) * component(state, proj_axis);
        proj_counts = draw_projective_counts((1.0 + damped) / 2.0, half, rng);
    }
}

}  // namespace detail

/// Disk scheme for states with <sy> = 0. Half A: weak sigma_z then
/// projective sigma_x. Half B: weak sigma_x then projective sigma_z. The
/// two half-estimates of each component are plainly averaged; y_est = 0.
inline RunResult run_weak_disk(const BlochVector& state, const SchemeConfig& cfg, Rng& rng) {
    const long half = cfg.ensemble_n / 2;
    OutcomeCounts wz, px, wx, pz;
    detail::run_disk_half(state, PauliAxis::Z, half, cfg, rng, wz, px);
    detail::run_disk_half(state, PauliAxis::X, half, cfg, rng, wx, pz);

    const double eps = cfg.eps1;
    const double corr = std::exp(eps / 2.0);
    ComponentEstimate za, xa, xb, zb;
    if (cfg.estimator == EstimatorKind::Calibrated) {
        const double D = calibration_D(eps, cfg.discard_a);
        za = estimate_weak_component(wz, D, 1.0);
        xb = estimate_weak_component(wx, D, 1.0);
    } else {
        za = estimate_kept_component(wz, 1.0);
        xb = estimate_kept_component(wx, 1.0);
    }
    xa = estimate_projective_component(px, corr);
    zb = estimate_projective_component(pz, corr);

    RunResult r;
    r.estimate = EstimateVector{(xa.value + xb.value) / 2.0, 0.0, (za.value + zb.value) / 2.0,
                                xa.degenerate || xb.degenerate, false,
                                za.degenerate || zb.degenerate};
    r.stage_counts = {wz, px, wx, pz};
    r.stage_count = 4;
    return r;
}

/// Disk baseline: halves measured projectively along x and z; y_est = 0.
inline RunResult run_projective_disk(const BlochVector& state, const SchemeConfig& cfg, Rng& rng) {
    const long half = cfg.ensemble_n / 2;
    const OutcomeCounts cx = detail::draw_projective_counts((1.0 + state.x) / 2.0, half, rng);
    const OutcomeCounts cz = detail::draw_projective_counts((1.0 + state.z) / 2.0, half, rng);
    const ComponentEstimate ex = estimate_projective_component(cx, 1.0);
    const ComponentEstimate ez = estimate_projective_component(cz, 1.0);

    RunResult r;
    r.estimate = EstimateVector{ex.value, 0.0, ez.value, ex.degenerate, false, ez.degenerate};
    r.stage_counts = {cx, cz, OutcomeCounts{}, OutcomeCounts{}};
    r.stage_count = 2;
    return r;
}

inline RunResult run_scheme(const BlochVector& state, const SchemeConfig& cfg, Rng& rng) {
    switch (cfg.scheme) {
        case SchemeKind::WeakFull: return run_weak_full(state, cfg, rng);
        case SchemeKind::ProjectiveFull: return run_projective_full(state, cfg, rng);
        case SchemeKind::WeakDisk: return run_weak_disk(state, cfg, rng);
        case SchemeKind::ProjectiveDisk: return run_projective_disk(state, cfg, rng);
    }
    throw std::logic_error("run_scheme: unknown scheme");
}

}  // namespace weaktomo
