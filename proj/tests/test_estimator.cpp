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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "weaktomo/estimator.hpp"
#include "weaktomo/pointer.hpp"
#include "weaktomo/rng.hpp"

using namespace weaktomo;

TEST_CASE("calibration denominator: frozen values and limits") {
    CHECK(calibration_D(1.0, 0.0) == Catch::Approx(0.682689492137086).margin(1e-12));
    CHECK(calibration_D(1.0, 0.8) == Catch::Approx(0.543329390326177).margin(1e-12));
    // projective limit
    CHECK(calibration_D(400.0, 0.0) == Catch::Approx(1.0).margin(1e-12));
    // vanishing-strength limit
    CHECK(calibration_D(1e-8, 0.0) < 1e-3);
    // monotone decreasing in a
    CHECK(calibration_D(1.0, 0.4) < calibration_D(1.0, 0.0));
    CHECK(calibration_D(1.0, 0.8) < calibration_D(1.0, 0.4));
}

TEST_CASE("calibration denominator equals the kept-count asymmetry of a pure state") {
    // For c = 1 the closed-form stage probabilities give P+ - P- = D.
    for (double eps : {0.2, 1.0, 2.5}) {
        for (double a : {0.0, 0.3, 0.8}) {
            const StageProbabilities p = stage_probs_weak_z(1.0, eps, a);
            CHECK(p.p_plus - p.p_minus == Catch::Approx(calibration_D(eps, a)).margin(1e-14));
        }
    }
}

TEST_CASE("outcome counts bookkeeping") {
    OutcomeCounts c;
    c.add(Outcome::Plus);
    c.add(Outcome::Plus);
    c.add(Outcome::Minus);
    c.add(Outcome::Discard);
    CHECK(c.n_plus == 2);
    CHECK(c.n_minus == 1);
    CHECK(c.n_discard == 1);
    CHECK(c.n_total() == 4);
    CHECK(c.n_kept() == 3);
}

TEST_CASE("component estimates: arithmetic") {
    const OutcomeCounts c{70, 30, 0};
    const ComponentEstimate weak = estimate_weak_component(c, 0.5, 2.0);
    CHECK_FALSE(weak.degenerate);
    CHECK(weak.value == Catch::Approx(1.6).margin(1e-14));

    const ComponentEstimate proj = estimate_projective_component(c, 1.0);
    CHECK(proj.value == Catch::Approx(0.4).margin(1e-14));

    const OutcomeCounts kept{30, 10, 60};
    CHECK(estimate_kept_component(kept, 1.0).value == Catch::Approx(0.5).margin(1e-14));
    // discards dilute the total-count route but not the kept route
    CHECK(estimate_projective_component(kept, 1.0).value == Catch::Approx(0.2).margin(1e-14));
}

TEST_CASE("component estimates: degenerate inputs fall back to zero") {
    const OutcomeCounts empty{};
    CHECK(estimate_weak_component(empty, 0.5, 1.0).degenerate);
    CHECK(estimate_projective_component(empty, 1.0).degenerate);
    CHECK(estimate_kept_component(OutcomeCounts{0, 0, 100}, 1.0).degenerate);
    CHECK(estimate_kept_component(OutcomeCounts{0, 0, 100}, 1.0).value == 0.0);
    // vanishing calibration denominator
    CHECK(estimate_weak_component(OutcomeCounts{50, 50, 0}, 1e-13, 1.0).degenerate);
}

TEST_CASE("calibrated assembly inverts the closed-form probabilities exactly") {
    // Feed expected counts (probability * total) as fractional frequencies
    // by scaling to a large integer total with negligible rounding.
    const BlochVector s{-0.601, 0.398, 0.055};
    const double eps1 = 0.7, eps2 = 0.9, a = 0.35;
    const long total = 1000000000L;
    auto to_counts = [&](const StageProbabilities& p) {
        OutcomeCounts c;
        c.n_plus = std::lround(p.p_plus * total);
        c.n_minus = std::lround(p.p_minus * total);
        c.n_discard = total - c.n_plus - c.n_minus;
        return c;
    };
    const OutcomeCounts cz = to_counts(stage_probs_weak_z(s.z, eps1, a));
    const OutcomeCounts cx = to_counts(stage_probs_weak_x(s.x, eps1, eps2, a));
    const OutcomeCounts cy = to_counts(stage_probs_projective_y(s.y, eps1, eps2));

    const EstimateVector est = assemble_full_estimate(cz, cx, cy, eps1, eps2, a);
    CHECK_FALSE(est.any_degenerate());
    CHECK(est.x == Catch::Approx(s.x).margin(1e-8));
    CHECK(est.y == Catch::Approx(s.y).margin(1e-8));
    CHECK(est.z == Catch::Approx(s.z).margin(1e-8));
}

TEST_CASE("kept-frequency assembly shrinks weak components when a > 0") {
    const BlochVector s{-0.601, 0.398, 0.055};
    const double eps1 = 0.7, eps2 = 0.9, a = 0.8;
    const long total = 1000000000L;
    auto to_counts = [&](const StageProbabilities& p) {
        OutcomeCounts c;
        c.n_plus = std::lround(p.p_plus * total);
        c.n_minus = std::lround(p.p_minus * total);
        c.n_discard = total - c.n_plus - c.n_minus;
        return c;
    };
    const OutcomeCounts cz = to_counts(stage_probs_weak_z(s.z, eps1, a));
    const OutcomeCounts cx = to_counts(stage_probs_weak_x(s.x, eps1, eps2, a));
    const OutcomeCounts cy = to_counts(stage_probs_projective_y(s.y, eps1, eps2));

    const EstimateVector est = assemble_full_estimate_kept(cz, cx, cy, eps1, eps2);
    // population-level kept estimate = true value * D / (1 - Pd)
    const StageProbabilities pz = stage_probs_weak_z(s.z, eps1, a);
    const double shrink_z = calibration_D(eps1, a) / (1.0 - pz.p_discard);
    CHECK(est.z == Catch::Approx(s.z * shrink_z).margin(1e-8));
    CHECK(std::abs(est.z) < std::abs(s.z));
    CHECK(std::abs(est.x) < std::abs(s.x));
    // the projective stage is shared between the two routes
    CHECK(est.y == Catch::Approx(s.y).margin(1e-8));
}

TEST_CASE("calibrated estimator is unbiased over sampled counts") {
    const double z = 0.397, eps = 0.9, a = 0.4;
    const StageProbabilities p = stage_probs_weak_z(z, eps, a);
    const double D = calibration_D(eps, a);
    Rng rng(4242);
    const long n = 300, runs = 50000;
    double sum = 0.0, sum_sq = 0.0;
    for (long r = 0; r < runs; ++r) {
        OutcomeCounts c;
        for (long i = 0; i < n; ++i) {
            const double u = rng.uniform01();
            c.add(u < p.p_plus ? Outcome::Plus
                               : (u < p.p_plus + p.p_minus ? Outcome::Minus : Outcome::Discard));
        }
        const ComponentEstimate e = estimate_weak_component(c, D, 1.0);
        sum += e.value;
        sum_sq += e.value * e.value;
    }
    const double mean = sum / runs;
    const double var = sum_sq / runs - mean * mean;
    const double se = std::sqrt(var / runs);
    CHECK(std::abs(mean - z) < 4.0 * se);
}

TEST_CASE("estimate vector fidelity matches the Bloch-space formula") {
    const BlochVector truth{0.1, 0.2, 0.3};
    EstimateVector est;
    est.x = 0.1;
    est.y = 0.2;
    est.z = 0.8;
    CHECK(fidelity(truth, est) == Catch::Approx(0.75).margin(1e-14));
}
