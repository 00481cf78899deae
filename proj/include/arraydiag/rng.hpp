// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors

#ifndef ARRAYDIAG_RNG_HPP
#define ARRAYDIAG_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace arraydiag {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Mixes a tuple of integers into a single 64-bit seed. Used to derive
/// independent per-trial streams from (master seed, technique, trial index)
/// without any shared generator state.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) {
    std::uint64_t state = 0x8000000000000001ULL;
    for (std::uint64_t w : words) {
        state = detail::splitmix64(state ^ detail::splitmix64(w));
    }
    return state;
}

/// Deterministic random stream for one Monte Carlo trial.
///
/// All variate transforms are implemented on top of the raw mt19937_64
/// output, which is fully pinned by the standard, so a given seed produces
/// identical draws on every platform. Library std::distributions are
/// deliberately not used (their algorithms are implementation defined).
class TrialRng {
public:
    explicit TrialRng(std::uint64_t seed) : engine_(seed) {}

    TrialRng(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t trial_index)
        : engine_(derive_seed({master_seed, stream_id, trial_index})) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform integer in [0, n). Lemire's multiply-shift rejection scheme;
    /// unbiased and deterministic.
    std::uint64_t uniform_int(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(engine_()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard real Gaussian via Box-Muller. Consumes exactly two uniforms
    /// per call (no caching), so the draw count of any sampling sequence is
    /// independent of distribution parameters.
    double gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Circularly symmetric complex Gaussian CN(0, variance).
    /// Consumes exactly two uniforms per call even when variance is zero.
    std::complex<double> complex_gaussian(double variance) {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1) * variance);
        const double phi = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace arraydiag

#endif // ARRAYDIAG_RNG_HPP
