// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors
//
// Geometric multipath channel synthesis, antenna fault injection, and the
// induced sparse error channel.

#ifndef ARRAYDIAG_FAULT_CHANNEL_HPP
#define ARRAYDIAG_FAULT_CHANNEL_HPP

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arraydiag/array_model.hpp"
#include "arraydiag/rng.hpp"

namespace arraydiag {

/// One propagation path: complex gain and angle of arrival.
struct Path {
    Complex gain;
    double angle;
};

/// The L multipath components of the channel.
struct PathSet {
    std::vector<Path> paths;

    int size() const { return static_cast<int>(paths.size()); }
};

enum class FaultMode {
    kComplete,  // blocked elements receive nothing (coefficient 0)
    kPartial,   // blocked elements apply a random attenuation and phase shift
};

/// Sparse per-antenna fault map. An entry (n, c) means element n multiplies
/// its received signal by c = kappa*exp(j*Phi); absent elements are healthy
/// (coefficient 1). Equivalent to the diagonal blockage matrix.
struct FaultPattern {
    std::map<int, Complex> coefficients;

    int size() const { return static_cast<int>(coefficients.size()); }

    /// Faulty element indices in ascending order.
    std::vector<int> indices() const {
        std::vector<int> out;
        out.reserve(coefficients.size());
        for (const auto& [n, c] : coefficients) out.push_back(n);
        return out;
    }
};

/// Nominal channel, faulty channel, and their difference. The error vector
/// is supported only on faulty elements, which is what makes fault
/// identification a sparse recovery problem.
struct ChannelPair {
    ComplexVector nominal;
    ComplexVector faulty;
    ComplexVector error;
};

/// h = sqrt(N/L) * sum_l gain_l * a(angle_l).
inline ComplexVector synthesize_channel(const ArrayConfig& cfg, const PathSet& paths) {
    const int n_paths = paths.size();
    if (n_paths < 1) {
        throw std::domain_error("synthesize_channel: need at least one path");
    }
    if (n_paths > cfg.n_elements) {
        throw std::domain_error("synthesize_channel: more paths than antenna elements");
    }
    ComplexVector h = ComplexVector::Zero(cfg.n_elements);
    const double scale = std::sqrt(static_cast<double>(cfg.n_elements) / n_paths);
    for (const Path& p : paths.paths) {
        h += scale * p.gain * steering_vector(cfg, p.angle).entries;
    }
    return h;
}

/// Draws L paths with i.i.d. CN(0,1) gains. Angles are uniform over the
/// codebook grid (quantized) or uniform in sin(theta) over [-1, 1)
/// (unquantized); duplicates are rejected and redrawn so the L paths stay
/// distinct.
inline PathSet sample_paths(const ArrayConfig& cfg, int n_paths, bool quantized, TrialRng& rng) {
    if (n_paths < 1 || n_paths > cfg.n_elements) {
        throw std::domain_error("sample_paths: n_paths must be in [1, n_elements]");
    }
    PathSet out;
    out.paths.reserve(n_paths);
    if (quantized) {
        std::set<int> used;
        while (static_cast<int>(used.size()) < n_paths) {
            const int idx = static_cast<int>(rng.uniform_int(cfg.n_elements));
            if (used.insert(idx).second) {
                out.paths.push_back({rng.complex_gaussian(1.0), grid_angle(cfg.n_elements, idx)});
            }
        }
    } else {
        std::set<double> used;
        while (static_cast<int>(used.size()) < n_paths) {
            const double s = rng.uniform(-1.0, 1.0);
            if (used.insert(s).second) {
                out.paths.push_back({rng.complex_gaussian(1.0), std::asin(s)});
            }
        }
    }
    return out;
}

/// Draws S distinct faulty elements. Complete mode zeroes them; partial mode
/// applies kappa ~ U(0,1) and Phi ~ U[0, 2*pi).
inline FaultPattern sample_faults(int n_elements, int n_faults, FaultMode mode, TrialRng& rng) {
    if (n_faults < 0 || n_faults >= n_elements) {
        throw std::domain_error("sample_faults: need 0 <= n_faults < n_elements, got S=" +
                                std::to_string(n_faults) + ", N=" + std::to_string(n_elements));
    }
    FaultPattern pattern;
    while (pattern.size() < n_faults) {
        const int idx = static_cast<int>(rng.uniform_int(n_elements));
        if (pattern.coefficients.contains(idx)) continue;
        if (mode == FaultMode::kComplete) {
            pattern.coefficients[idx] = Complex(0.0, 0.0);
        } else {
            const double kappa = rng.uniform();
            const double phi = rng.uniform(0.0, 2.0 * kPi);
            pattern.coefficients[idx] = std::polar(kappa, phi);
        }
    }
    return pattern;
}

/// Applies the fault map to a channel: faulty_n = c_n * h_n on faulty
/// elements, and error = faulty - nominal (nonzero only there).
inline ChannelPair apply_faults(const ComplexVector& h, const FaultPattern& faults) {
    ChannelPair pair;
    pair.nominal = h;
    pair.faulty = h;
    pair.error = ComplexVector::Zero(h.size());
    for (const auto& [n, c] : faults.coefficients) {
        if (n < 0 || n >= h.size()) {
            throw std::domain_error("apply_faults: fault index " + std::to_string(n) +
                                    " outside the array");
        }
        pair.faulty[n] = c * h[n];
        pair.error[n] = (c - 1.0) * h[n];
    }
    return pair;
}

} // namespace arraydiag

#endif // ARRAYDIAG_FAULT_CHANNEL_HPP
