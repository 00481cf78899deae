// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors
//
// Steering vectors, the quantized-direction DFT codebook, and the angle /
// spatial-frequency conventions for a half-wavelength uniform linear array.

#ifndef ARRAYDIAG_ARRAY_MODEL_HPP
#define ARRAYDIAG_ARRAY_MODEL_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "arraydiag/errors.hpp"

namespace arraydiag {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;

/// Geometry of the receive array: N isotropic elements on a line with
/// half-wavelength spacing. Half-wavelength is the only supported geometry;
/// it is what makes the quantized-direction codebook exactly the unitary DFT.
struct ArrayConfig {
    int n_elements;
    double spacing_wavelengths;

    explicit ArrayConfig(int n, double spacing = 0.5)
        : n_elements(n), spacing_wavelengths(spacing) {
        if (n < 2) {
            throw std::domain_error("ArrayConfig: n_elements must be >= 2, got " + std::to_string(n));
        }
        if (spacing != 0.5) {
            throw std::domain_error("ArrayConfig: only half-wavelength spacing is supported");
        }
    }
};

/// Unit-norm array response for one incident angle.
/// Entry n is (1/sqrt(N)) * exp(j*pi*n*sin(angle)).
struct SteeringVector {
    ComplexVector entries;
    double angle;
};

/// Physical angle (radians) of quantized grid point i of an N-point
/// codebook: asin of 2i/N wrapped into [-1, 1).
inline double grid_angle(int n_elements, int i) {
    double u = 2.0 * i / n_elements;
    if (u >= 1.0) u -= 2.0;
    return std::asin(u);
}

/// Unitary N x N DFT codebook. Column i is the array response of the ith
/// quantized direction; `grid` holds the per-element spatial frequencies
/// psi_i = 2*pi*i/N wrapped to [-pi, pi), so sin(theta_i) = psi_i / pi.
struct DftCodebook {
    ComplexMatrix columns;
    Eigen::VectorXd grid;

    int size() const { return static_cast<int>(columns.cols()); }

    /// Physical angle (radians) of grid point i.
    double angle_at(int i) const { return grid_angle(size(), i); }
};

namespace detail {

/// Column i of the unitary N-point DFT matrix, with the phase argument
/// reduced mod N in integer arithmetic so large n*i products do not lose
/// precision.
inline ComplexVector dft_column(int n_elements, int i) {
    ComplexVector col(n_elements);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));
    for (int n = 0; n < n_elements; ++n) {
        const int k = static_cast<int>((static_cast<long long>(n) * i) % n_elements);
        col[n] = std::polar(scale, 2.0 * kPi * k / n_elements);
    }
    return col;
}

inline void require_angle_in_range(double theta, const char* where) {
    if (!(theta >= -kPi / 2 && theta <= kPi / 2)) {
        throw std::domain_error(std::string(where) + ": angle " + std::to_string(theta) +
                                " outside [-pi/2, pi/2]");
    }
}

} // namespace detail

/// Array response a(theta) for a plane wave from `theta` radians off broadside.
inline SteeringVector steering_vector(const ArrayConfig& cfg, double theta) {
    detail::require_angle_in_range(theta, "steering_vector");
    const int n_elements = cfg.n_elements;
    const double s = std::sin(theta);
    ComplexVector entries(n_elements);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));
    for (int n = 0; n < n_elements; ++n) {
        entries[n] = std::polar(scale, kPi * n * s);
    }
    return SteeringVector{std::move(entries), theta};
}

/// The N-point codebook of quantized directions. Unitary by construction;
/// column 0 is the broadside response.
inline DftCodebook dft_codebook(const ArrayConfig& cfg) {
    const int n_elements = cfg.n_elements;
    ComplexMatrix columns(n_elements, n_elements);
    Eigen::VectorXd grid(n_elements);
    for (int i = 0; i < n_elements; ++i) {
        columns.col(i) = detail::dft_column(n_elements, i);
        double u = 2.0 * i / n_elements;  // sin(theta_i) before wrapping
        if (u >= 1.0) u -= 2.0;
        grid[i] = kPi * u;
    }
    return DftCodebook{std::move(columns), std::move(grid)};
}

/// Index of the grid direction whose response best matches a(theta),
/// i.e. argmax_i |column_i^* a(theta)|. Ties go to the smaller index.
inline int nearest_grid_index(const DftCodebook& codebook, double theta) {
    detail::require_angle_in_range(theta, "nearest_grid_index");
    const auto probe = steering_vector(ArrayConfig(codebook.size()), theta);
    const Eigen::VectorXd scores = (codebook.columns.adjoint() * probe.entries).cwiseAbs();
    int best = 0;
    for (int i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

} // namespace arraydiag

#endif // ARRAYDIAG_ARRAY_MODEL_HPP
