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
 * Single-qubit state algebra on the Bloch ball: conversions between
 * Bloch vectors and 2x2 density matrices, and the squared-distance
 * fidelity measure used to score tomography estimates.
 *
 * Complex arithmetic is confined to this header; everything else in the
 * library works with Bloch components only.
 */

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace weaktomo {

/// A point (x, y, z) = (<sx>, <sy>, <sz>). Physical states satisfy
/// x^2 + y^2 + z^2 <= 1; pure states sit on the unit sphere.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm_squared() const { return x * x + y * y + z * z; }
    bool is_physical(double tol = 1e-9) const { return norm_squared() <= 1.0 + tol; }
};

enum class PauliAxis { X, Y, Z };

/// Dense 2x2 density matrix. Hermitian with unit trace for physical input.
struct DensityMatrix {
    std::complex<double> rho00;
    std::complex<double> rho01;
    std::complex<double> rho10;
    std::complex<double> rho11;
};

/// rho = (I + n.sigma)/2. Accepts any vector; physicality is not enforced.
inline DensityMatrix density_from_bloch(const BlochVector& n) {
    DensityMatrix rho;
    rho.rho00 = {(1.0 + n.z) / 2.0, 0.0};
    rho.rho11 = {(1.0 - n.z) / 2.0, 0.0};
    rho.rho01 = {n.x / 2.0, -n.y / 2.0};
    rho.rho10 = std::conj(rho.rho01);
    return rho;
}

/// Inverse Bloch map. Rejects non-Hermitian or non-unit-trace input.
inline BlochVector bloch_from_density(const DensityMatrix& rho, double tol = 1e-9) {
    if (std::abs(rho.rho10 - std::conj(rho.rho01)) > tol ||
        std::abs(rho.rho00.imag()) > tol || std::abs(rho.rho11.imag()) > tol) {
        throw std::invalid_argument("bloch_from_density: matrix is not Hermitian");
    }
    if (std::abs(rho.rho00.real() + rho.rho11.real() - 1.0) > tol) {
        throw std::invalid_argument("bloch_from_density: trace is not 1");
    }
    return BlochVector{2.0 * rho.rho01.real(), -2.0 * rho.rho01.imag(),
                       rho.rho00.real() - rho.rho11.real()};
}

/// Pure state cos(a/2)|0> + sin(a/2)|1>, i.e. (sin a, 0, cos a).
inline BlochVector pure_from_polar(double alpha) {
    return BlochVector{std::sin(alpha), 0.0, std::cos(alpha)};
}

inline double component(const BlochVector& n, PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return n.x;
        case PauliAxis::Y: return n.y;
        case PauliAxis::Z: return n.z;
    }
    return 0.0;  // unreachable
}

/// Tr(rho^2) = (1 + |n|^2) / 2.
inline double purity(const BlochVector& n) { return (1.0 + n.norm_squared()) / 2.0; }

/// f = 1 - |n_true - n_est|^2. Equals 1 iff the vectors coincide and may be
/// negative; estimates are deliberately not clamped to the ball.
inline double fidelity(const BlochVector& truth, const BlochVector& est) {
    const double dx = truth.x - est.x;
    const double dy = truth.y - est.y;
    const double dz = truth.z - est.z;
    return 1.0 - (dx * dx + dy * dy + dz * dz);
}

}  // namespace weaktomo
