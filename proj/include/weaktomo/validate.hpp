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
 * Cross-module invariant suite: measurement-operator completeness against
 * quadrature, trajectory/analytic engine agreement, estimator consistency,
 * the projective fidelity law, the damping factor, and worker-count
 * reproducibility. Produces a machine-readable pass/fail report.
 *
 * `erf_bias` is a fault-injection hook: it perturbs the erf used in the
 * closed-form leg of the completeness check so the suite's sensitivity can
 * be demonstrated deliberately.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weaktomo/estimator.hpp"
#include "weaktomo/harness.hpp"
#include "weaktomo/io.hpp"
#include "weaktomo/pointer.hpp"
#include "weaktomo/protocol.hpp"

namespace weaktomo {

struct CheckResult {
    std::string name;
    bool passed;
    double deviation;  // measured worst deviation, in the check's own units
    double bound;      // the deviation must stay below this
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool_version"] = kToolVersion;
        j["all_passed"] = all_passed();
        j["checks"] = nlohmann::json::array();
        for (const auto& c : checks)
            j["checks"].push_back({{"name", c.name},
                                   {"passed", c.passed},
                                   {"deviation", c.deviation},
                                   {"bound", c.bound},
                                   {"detail", c.detail}});
        return j;
    }
};

struct ValidateOptions {
    std::uint64_t seed = 2026;
    double erf_bias = 0.0;  // fault-injection hook; 0 in normal operation
};

namespace detail {

// Composite Simpson on [lo, hi].
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
    if (n % 2 != 0) ++n;
    const double h = (hi - lo) / n;
    double sum = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) sum += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Pointer-reading density for a state with component c along the measured
// axis: mixture of two Gaussians with means +-1 and variance 1/eps.
inline double pointer_density(double q, double c, double eps) {
    const double norm = std::sqrt(eps / (2.0 * 3.14159265358979323846));
    const double wp = std::exp(-eps * (q - 1.0) * (q - 1.0) / 2.0);
    const double wm = std::exp(-eps * (q + 1.0) * (q + 1.0) / 2.0);
    return norm * ((1.0 + c) / 2.0 * wp + (1.0 - c) / 2.0 * wm);
}

// Closed-form stage probabilities recomputed locally through a biasable
// erf, so an injected erf error is caught against the quadrature leg.
inline StageProbabilities stage_probs_biased(double c, double eps, double a, double bias) {
    const auto erf_b = [bias](double t) { return weaktomo::erf(t) + bias; };
    const double s = std::sqrt(eps / 2.0);
    StageProbabilities p;
    p.p_plus = 0.25 * ((1.0 + c) * (1.0 - erf_b((a - 1.0) * s)) +
                       (1.0 - c) * (1.0 - erf_b((a + 1.0) * s)));
    p.p_minus = 0.25 * ((1.0 - c) * (1.0 - erf_b((a - 1.0) * s)) +
                        (1.0 + c) * (1.0 - erf_b((a + 1.0) * s)));
    p.p_discard = 0.5 * (erf_b((a - 1.0) * s) + erf_b((a + 1.0) * s));
    return p;
}

}  // namespace detail

/// (a) Completeness of the pointer measurement: the reading density
/// integrates to 1, and the closed-form outcome probabilities match
/// quadrature of the density over the discard/keep regions, all to 1e-8.
inline CheckResult check_povm_completeness(const ValidateOptions& opt) {
    double worst = 0.0;
    for (double eps : {0.2, 1.0, 4.0}) {
        const double tail = 1.0 + 12.0 / std::sqrt(eps);
        for (double c : {-0.8, 0.0, 0.397}) {
            const auto dens = [&](double q) { return detail::pointer_density(q, c, eps); };
            for (double a : {0.0, 0.5, 0.8}) {
                const double total = detail::simpson(dens, -tail, tail, 4000);
                worst = std::max(worst, std::abs(total - 1.0));

                const StageProbabilities p = detail::stage_probs_biased(c, eps, a, opt.erf_bias);
                const double q_plus = detail::simpson(dens, a, tail, 4000);
                const double q_minus = detail::simpson(dens, -tail, -a, 4000);
                const double q_disc = a > 0.0 ? detail::simpson(dens, -a, a, 4000) : 0.0;
                worst = std::max({worst, std::abs(p.p_plus - q_plus),
                                  std::abs(p.p_minus - q_minus),
                                  std::abs(p.p_discard - q_disc)});
            }
        }
    }
    return {"povm_completeness", worst < 1e-8, worst, 1e-8,
            "quadrature vs closed-form outcome probabilities"};
}

/// (b) Trajectory and multinomial engines agree on per-stage outcome
/// frequencies within 3 standard errors at 10^4 runs.
inline CheckResult check_engine_equivalence(const ValidateOptions& opt) {
    const long runs = 10000, n = 30;
    double worst_sigma = 0.0;
    std::string worst_at;
    int param_idx = 0;
    for (const BlochVector& state : {BlochVector{-0.385, -0.042, 0.397}, BlochVector{0.6, 0.0, -0.5}}) {
        for (double eps : {0.3, 1.0}) {
            for (double a : {0.0, 0.5}) {
                // per-stage mean and variance of (n_plus - n_minus) per engine
                for (int which = 0; which < 3; ++which) {
                    double m[2], v[2];
                    for (int e = 0; e < 2; ++e) {
                        SchemeConfig cfg;
                        cfg.scheme = SchemeKind::WeakFull;
                        cfg.engine = e == 0 ? EngineKind::Trajectory : EngineKind::Multinomial;
                        cfg.ensemble_n = n;
                        cfg.eps1 = cfg.eps2 = eps;
                        cfg.discard_a = a;
                        cfg.seed = derive_seed(opt.seed, {7, static_cast<std::uint64_t>(param_idx),
                                                          static_cast<std::uint64_t>(e)});
                        double sum = 0.0, sum_sq = 0.0;
                        for (long i = 0; i < runs; ++i) {
                            Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(i)}));
                            const RunResult r = run_weak_full(state, cfg, rng);
                            const double d = static_cast<double>(r.stage_counts[which].n_plus -
                                                                 r.stage_counts[which].n_minus);
                            sum += d;
                            sum_sq += d * d;
                        }
                        m[e] = sum / runs;
                        v[e] = sum_sq / runs - m[e] * m[e];
                    }
                    const double se = std::sqrt((v[0] + v[1]) / runs);
                    const double sigmas = std::abs(m[0] - m[1]) / se;
                    if (sigmas > worst_sigma) {
                        worst_sigma = sigmas;
                        worst_at = "stage " + std::to_string(which) + " eps=" +
                                   std::to_string(eps) + " a=" + std::to_string(a);
                    }
                }
                ++param_idx;
            }
        }
    }
    return {"engine_marginal_equivalence", worst_sigma < 3.0, worst_sigma, 3.0, worst_at};
}

/// (c) Calibrated-estimator consistency: all three components recovered
/// within 0.01 at N = 10^6 for five fixed states.
inline CheckResult check_estimator_consistency(const ValidateOptions& opt) {
    const std::vector<BlochVector> states = {{-0.385, -0.042, 0.397},
                                             {-0.601, 0.398, 0.055},
                                             {0.0, 0.0, 0.0},
                                             {0.3, -0.5, 0.6},
                                             {0.0, 0.9, -0.1}};
    double worst = 0.0;
    int idx = 0;
    for (const auto& state : states) {
        SchemeConfig cfg;
        cfg.scheme = SchemeKind::WeakFull;
        cfg.engine = EngineKind::Multinomial;
        cfg.estimator = EstimatorKind::Calibrated;
        cfg.ensemble_n = 1000000;
        cfg.eps1 = cfg.eps2 = 0.3;
        cfg.discard_a = 0.2;
        cfg.seed = derive_seed(opt.seed, {11, static_cast<std::uint64_t>(idx++)});
        Rng rng(cfg.seed);
        const RunResult r = run_weak_full(state, cfg, rng);
        worst = std::max({worst, std::abs(r.estimate.x - state.x),
                          std::abs(r.estimate.y - state.y), std::abs(r.estimate.z - state.z)});
    }
    return {"estimator_consistency", worst < 0.01, worst, 0.01,
            "calibrated estimates at N=1e6, eps=0.3, a=0.2"};
}

/// (d) Projective baseline obeys E[f] = 1 - sum_i (1 - n_i^2)/(N/3)
/// within 3 standard errors at N = 30 over 10^5 runs.
inline CheckResult check_fidelity_law(const ValidateOptions& opt) {
    double worst_sigma = 0.0;
    int idx = 0;
    for (const auto& ns : builtin_states()) {
        SchemeConfig cfg;
        cfg.scheme = SchemeKind::ProjectiveFull;
        cfg.ensemble_n = 30;
        cfg.runs = 100000;
        cfg.seed = derive_seed(opt.seed, {13, static_cast<std::uint64_t>(idx++)});
        const RunStatistics st = monte_carlo(ns.state, cfg);
        const double expected = 1.0 - (3.0 - ns.state.norm_squared()) / 10.0;
        const double se = st.std_fidelity / std::sqrt(static_cast<double>(st.runs));
        worst_sigma = std::max(worst_sigma, std::abs(st.mean_fidelity - expected) / se);
    }
    return {"projective_fidelity_law", worst_sigma < 3.0, worst_sigma, 3.0,
            "E[f] = 1 - sum(1-n_i^2)/(N/3) at N=30"};
}

/// (e) Averaging the conditional update over sampled readings reproduces
/// the unconditional damping factor exp(-eps/2) within 3 standard errors.
inline CheckResult check_damping_factor(const ValidateOptions& opt) {
    const long samples = 1000000;
    double worst_sigma = 0.0;
    int idx = 0;
    struct Probe {
        BlochVector state;
        PauliAxis axis;
        double eps;
    };
    for (const Probe& p : {Probe{{1.0, 0.0, 0.0}, PauliAxis::Z, 0.2},
                           Probe{{0.3, 0.4, 0.5}, PauliAxis::X, 1.0}}) {
        Rng rng(derive_seed(opt.seed, {17, static_cast<std::uint64_t>(idx++)}));
        const PointerConfig pc{p.eps, 0.0};
        double sx = 0, sy = 0, sz = 0, sx2 = 0, sy2 = 0, sz2 = 0;
        for (long i = 0; i < samples; ++i) {
            const double q = sample_pointer_reading(p.state, p.axis, pc, rng);
            const BlochVector out = kraus_update(p.state, p.axis, p.eps, q);
            sx += out.x; sy += out.y; sz += out.z;
            sx2 += out.x * out.x; sy2 += out.y * out.y; sz2 += out.z * out.z;
        }
        const BlochVector want = unconditional_update(p.state, p.axis, p.eps);
        const double n = static_cast<double>(samples);
        const double mean[3] = {sx / n, sy / n, sz / n};
        const double var[3] = {sx2 / n - mean[0] * mean[0], sy2 / n - mean[1] * mean[1],
                               sz2 / n - mean[2] * mean[2]};
        const double target[3] = {want.x, want.y, want.z};
        for (int k = 0; k < 3; ++k) {
            const double se = std::sqrt(std::max(var[k], 1e-30) / n);
            worst_sigma = std::max(worst_sigma, std::abs(mean[k] - target[k]) / se);
        }
    }
    return {"damping_factor", worst_sigma < 3.0, worst_sigma, 3.0,
            "trajectory average vs exp(-eps/2) transverse damping"};
}

/// (f) A small sweep produces byte-identical rows for worker counts 1 and 4.
inline CheckResult check_worker_reproducibility(const ValidateOptions& opt) {
    SweepSpec spec;
    spec.states = builtin_states();
    spec.eps_grid = {0.3, 0.9};
    spec.a_grid = {0.0, 0.4};
    spec.n_list = {30};
    spec.runs = 200;
    spec.seed = opt.seed;
    spec.workers = 1;
    const std::string csv1 = sweep_csv(sweep(spec));
    spec.workers = 4;
    const std::string csv4 = sweep_csv(sweep(spec));
    const bool same = csv1 == csv4;
    return {"worker_reproducibility", same, same ? 0.0 : 1.0, 0.5,
            "sweep CSV identical for workers 1 and 4"};
}

inline ValidationReport run_validation(const ValidateOptions& opt = {}) {
    ValidationReport report;
    report.checks.push_back(check_povm_completeness(opt));
    report.checks.push_back(check_engine_equivalence(opt));
    report.checks.push_back(check_estimator_consistency(opt));
    report.checks.push_back(check_fidelity_law(opt));
    report.checks.push_back(check_damping_factor(opt));
    report.checks.push_back(check_worker_reproducibility(opt));
    return report;
}

}  // namespace weaktomo
