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
 * Converts outcome tallies into Bloch-component estimates. Two routes are
 * provided:
 *
 *  - Calibrated: inverts the analytic outcome probabilities exactly
 *    (divide the +/- count asymmetry by the calibration denominator
 *    D(eps, a) and apply the exponential damping corrections). Unbiased
 *    and consistent: estimates converge to the true components as the
 *    ensemble grows.
 *
 *  - Kept-frequency: the +/- asymmetry of the kept (non-discarded)
 *    readings, with only the exponential damping corrections applied.
 *    Biased toward the origin, but the shrinkage trades bias for variance
 *    and is what makes the recycling scheme competitive with the
 *    projective baseline on small ensembles.
 *
 * Estimates are never clamped to the unit ball; the fidelity measure is a
 * raw squared distance and clamping would bias scheme comparisons.
 */

#pragma once

#include <cmath>
#include <stdexcept>

#include "weaktomo/bloch.hpp"
#include "weaktomo/pointer.hpp"

namespace weaktomo {

/// Tallies from one measurement stage over an ensemble.
struct OutcomeCounts {
    long n_plus = 0;
    long n_minus = 0;
    long n_discard = 0;

    long n_total() const { return n_plus + n_minus + n_discard; }
    long n_kept() const { return n_plus + n_minus; }

    void add(Outcome o) {
        switch (o) {
            case Outcome::Plus: ++n_plus; break;
            case Outcome::Minus: ++n_minus; break;
            case Outcome::Discard: ++n_discard; break;
        }
    }
};

/// A single component estimate; `degenerate` marks an uninformative input
/// (no usable counts, or a vanishing calibration denominator). Degenerate
/// estimates are 0 (the maximally mixed prior) so batch statistics never
/// abort, and the flag is carried through to run records.
struct ComponentEstimate {
    double value = 0.0;
    bool degenerate = false;
};

/// Estimated Bloch coordinates; unconstrained (may land outside the ball).
struct EstimateVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool deg_x = false;
    bool deg_y = false;
    bool deg_z = false;

    bool any_degenerate() const { return deg_x || deg_y || deg_z; }
    BlochVector as_bloch() const { return BlochVector{x, y, z}; }
};

inline double fidelity(const BlochVector& truth, const EstimateVector& est) {
    return fidelity(truth, est.as_bloch());
}

/// D(eps, a) = [erfc((a-1)sqrt(eps/2)) - erfc((a+1)sqrt(eps/2))] / 2, the
/// factor by which the kept-count asymmetry must be divided to unbias a
/// weak component estimate. D = erf(sqrt(eps/2)) at a = 0 and -> 1 in the
/// projective limit.
inline double calibration_D(double epsilon, double a) {
    const double s = std::sqrt(epsilon / 2.0);
    return 0.5 * (erfc((a - 1.0) * s) - erfc((a + 1.0) * s));
}

/// Calibrated weak-stage estimate: correction * (n+ - n-) / (n_total * D).
inline ComponentEstimate estimate_weak_component(const OutcomeCounts& counts, double D,
                                                 double correction) {
    if (counts.n_total() == 0 || D < 1e-12) return {0.0, true};
    const double freq = static_cast<double>(counts.n_plus - counts.n_minus) /
                        static_cast<double>(counts.n_total());
    return {correction * freq / D, false};
}

/// Projective-stage estimate: correction * (n+ - n-) / n_total.
inline ComponentEstimate estimate_projective_component(const OutcomeCounts& counts,
                                                       double correction) {
    if (counts.n_total() == 0) return {0.0, true};
    const double freq = static_cast<double>(counts.n_plus - counts.n_minus) /
                        static_cast<double>(counts.n_total());
    return {correction * freq, false};
}

/// Kept-frequency weak-stage estimate: correction * (n+ - n-) / (n+ + n-).
inline ComponentEstimate estimate_kept_component(const OutcomeCounts& counts,
                                                 double correction) {
    if (counts.n_kept() == 0) return {0.0, true};
    const double freq = static_cast<double>(counts.n_plus - counts.n_minus) /
                        static_cast<double>(counts.n_kept());
    return {correction * freq, false};
}

/// Assembles (x, y, z) from the three stages of the weak-weak-projective
/// scheme via the calibrated route.
inline EstimateVector assemble_full_estimate(const OutcomeCounts& cz, const OutcomeCounts& cx,
                                             const OutcomeCounts& cy, double eps1, double eps2,
                                             double a) {
    const ComponentEstimate ez = estimate_weak_component(cz, calibration_D(eps1, a), 1.0);
    const ComponentEstimate ex =
        estimate_weak_component(cx, calibration_D(eps2, a), std::exp(eps1 / 2.0));
    const ComponentEstimate ey = estimate_projective_component(cy, std::exp((eps1 + eps2) / 2.0));
    return EstimateVector{ex.value, ey.value, ez.value, ex.degenerate, ey.degenerate,
                          ez.degenerate};
}

/// Assembles (x, y, z) via the kept-frequency route with the exponential
/// damping corrections.
inline EstimateVector assemble_full_estimate_kept(const OutcomeCounts& cz,
                                                  const OutcomeCounts& cx,
                                                  const OutcomeCounts& cy, double eps1,
                                                  double eps2) {
    const ComponentEstimate ez = estimate_kept_component(cz, 1.0);
    const ComponentEstimate ex = estimate_kept_component(cx, std::exp(eps1 / 2.0));
    const ComponentEstimate ey = estimate_projective_component(cy, std::exp((eps1 + eps2) / 2.0));
    return EstimateVector{ex.value, ey.value, ez.value, ex.degenerate, ey.degenerate,
                          ez.degenerate};
}

}  // namespace weaktomo
