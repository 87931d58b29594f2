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
 * The Gaussian-pointer measurement engine. A measurement of strength
 * epsilon couples the qubit to a meter whose reading q is Gaussian with
 * mean +1 or -1 (eigenvalue) and variance 1/epsilon. Readings inside
 * [-a, a] are ambiguous and classified as Discard; the measured copy is
 * retained either way.
 *
 * Provides reading sampling, outcome classification, the conditional
 * (Kraus) and reading-averaged state updates, and closed-form outcome
 * probabilities for the three stages of the weak-weak-projective scheme.
 */

#pragma once

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "weaktomo/bloch.hpp"
#include "weaktomo/rng.hpp"

namespace weaktomo {

/// Coupling strength epsilon (> 0) and discard half-width a (>= 0) for one
/// weak measurement. The pointer coupling g is fixed to 1.
struct PointerConfig {
    double epsilon;
    double discard_a = 0.0;

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("PointerConfig: epsilon must be > 0");
        if (!(discard_a >= 0.0)) throw std::invalid_argument("PointerConfig: discard_a must be >= 0");
    }
};

enum class Outcome { Plus, Minus, Discard };

struct StageProbabilities {
    double p_plus;
    double p_minus;
    double p_discard;
};

// erf/erfc backed by the C math library (|error| well under 1e-12 over the
// real line, verified against a quadrature oracle in the test suite).
inline double erf(double x) { return std::erf(x); }
inline double erfc(double x) { return std::erfc(x); }

/// Draws a pointer reading for a measurement along `axis`: the +1/-1 branch
/// is picked with probability (1 +- component)/2 and the reading is Gaussian
/// around the branch eigenvalue with variance 1/epsilon.
inline double sample_pointer_reading(const BlochVector& state, PauliAxis axis,
                                     const PointerConfig& cfg, Rng& rng) {
    const double c = component(state, axis);
    const double mean = rng.bernoulli((1.0 + c) / 2.0) ? 1.0 : -1.0;
    return rng.normal(mean, 1.0 / std::sqrt(cfg.epsilon));
}

/// q > a reads +1, q < -a reads -1, |q| <= a is ambiguous (closed interval;
/// the boundary is a measure-zero event, the convention only fixes ties).
inline Outcome classify(double q, const PointerConfig& cfg) {
    if (q > cfg.discard_a) return Outcome::Plus;
    if (q < -cfg.discard_a) return Outcome::Minus;
    return Outcome::Discard;
}

namespace detail {

// Conditional update along the measured component c with transverse pair
// (t1, t2), written in terms of u = epsilon*q so that the Gaussian weights
// w+- = exp(-eps(q -+ 1)^2 / 2) never overflow. w+/w- = exp(2u).
inline void kraus_axis_update(double& c, double& t1, double& t2, double u) {
    double cp, tfac;
    if (u >= 0.0) {
        const double e = std::exp(-2.0 * u);          // w-/w+
        const double den = (1.0 + c) + (1.0 - c) * e;
        assert(den > 1e-300);
        cp = ((1.0 + c) - (1.0 - c) * e) / den;
        tfac = 2.0 * std::exp(-u) / den;
    } else {
        const double e = std::exp(2.0 * u);           // w+/w-
        const double den = (1.0 + c) * e + (1.0 - c);
        assert(den > 1e-300);
        cp = ((1.0 + c) * e - (1.0 - c)) / den;
        tfac = 2.0 * std::exp(u) / den;
    }
    c = cp;
    t1 *= tfac;
    t2 *= tfac;
}

}  // namespace detail

/// Post-measurement state conditioned on reading q. For axis Z with weights
/// w+- = exp(-eps(q -+ 1)^2 / 2):
///   z' = (w+(1+z) - w-(1-z)) / (w+(1+z) + w-(1-z)),
/// and both transverse components scale by 2*sqrt(w+ w-)/(w+(1+z)+w-(1-z)).
/// Other axes apply the same rule with the roles of components permuted.
/// The output stays inside the unit ball for physical input.
inline BlochVector kraus_update(const BlochVector& state, PauliAxis axis, double epsilon,
                                double q) {
    BlochVector out = state;
    const double u = epsilon * q;
    switch (axis) {
        case PauliAxis::Z: detail::kraus_axis_update(out.z, out.x, out.y, u); break;
        case PauliAxis::X: detail::kraus_axis_update(out.x, out.y, out.z, u); break;
        case PauliAxis::Y: detail::kraus_axis_update(out.y, out.x, out.z, u); break;
    }
    return out;
}

/// Reading-averaged (unconditional) post-measurement state: the measured
/// component is untouched and both transverse components pick up the
/// Gaussian-overlap damping factor exp(-eps/2).
inline BlochVector unconditional_update(const BlochVector& state, PauliAxis axis,
                                        double epsilon) {
    const double damp = std::exp(-epsilon / 2.0);
    BlochVector out = state;
    switch (axis) {
        case PauliAxis::Z: out.x *= damp; out.y *= damp; break;
        case PauliAxis::X: out.y *= damp; out.z *= damp; break;
        case PauliAxis::Y: out.x *= damp; out.z *= damp; break;
    }
    return out;
}

/// Outcome probabilities for the first (weak sigma_z) stage.
inline StageProbabilities stage_probs_weak_z(double z, double eps1, double a) {
    const double s = std::sqrt(eps1 / 2.0);
    const double em = erfc((a - 1.0) * s);
    const double ep = erfc((a + 1.0) * s);
    StageProbabilities p;
    p.p_plus = 0.25 * ((1.0 + z) * em + (1.0 - z) * ep);
    p.p_minus = 0.25 * ((1.0 - z) * em + (1.0 + z) * ep);
    p.p_discard = 0.5 * (erf((a - 1.0) * s) + erf((a + 1.0) * s));
    return p;
}

/// Outcome probabilities for the second (weak sigma_x) stage, after the x
/// component has been damped by exp(-eps1/2) by the first measurement. The
/// discard probability uses eps2 so that the three probabilities sum to 1.
inline StageProbabilities stage_probs_weak_x(double x, double eps1, double eps2, double a) {
    const double s = std::sqrt(eps2 / 2.0);
    const double signal = erf((a + 1.0) * s) - erf((a - 1.0) * s);
    const double keep = erfc((a - 1.0) * s) + erfc((a + 1.0) * s);
    const double damp = std::exp(-eps1 / 2.0);
    StageProbabilities p;
    p.p_plus = 0.25 * (damp * x * signal + keep);
    p.p_minus = 0.25 * (-damp * x * signal + keep);
    p.p_discard = 0.5 * (erf((a - 1.0) * s) + erf((a + 1.0) * s));
    return p;
}

/// Outcome probabilities for the final projective sigma_y stage: the y
/// component has been damped by both weak stages and nothing is discarded.
inline StageProbabilities stage_probs_projective_y(double y, double eps1, double eps2) {
    const double damped = std::exp(-(eps1 + eps2) / 2.0) * y;
    return StageProbabilities{0.5 * (1.0 + damped), 0.5 * (1.0 - damped), 0.0};
}

}  // namespace weaktomo
