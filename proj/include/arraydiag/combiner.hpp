// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors
//
// Measurement (combining) matrix construction: DFT null-column selection for
// on-grid directions, null-space-projected beams for arbitrary directions,
// and random-phase combining for the full-CSI difference baseline.

#ifndef ARRAYDIAG_COMBINER_HPP
#define ARRAYDIAG_COMBINER_HPP

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "arraydiag/array_model.hpp"
#include "arraydiag/errors.hpp"
#include "arraydiag/rng.hpp"

namespace arraydiag {

enum class CombinerStrategy {
    kDftNull,      // on-grid directions nulled by dropping their DFT columns
    kHouseholder,  // arbitrary directions nulled via the complement projector
    kRandomPhase,  // unit-modulus random weights (difference-baseline sensing)
};

inline const char* to_string(CombinerStrategy s) {
    switch (s) {
        case CombinerStrategy::kDftNull: return "dft_null";
        case CombinerStrategy::kHouseholder: return "householder";
        case CombinerStrategy::kRandomPhase: return "random_phase";
    }
    return "?";
}

/// N x M combining matrix. One diagnostic measurement is taken per column.
struct CombinerMatrix {
    ComplexMatrix columns;
    CombinerStrategy strategy;
    std::vector<double> nulled_angles;  // empty for random_phase

    int n_measurements() const { return static_cast<int>(columns.cols()); }
};

/// Orthogonal-complement projector for a set of steering directions:
/// Q = I - D (D*D)^-1 D*, with D the N x L block of targeted responses.
/// Q is Hermitian, idempotent, annihilates every column of D, and has rank
/// N - L.
struct NullSpaceBasis {
    ComplexMatrix projector;       // Q, N x N
    ComplexMatrix steering_block;  // D, N x L
    std::vector<double> angles;    // the targeted directions, in radians
};

/// Builds the complement projector for the given directions.
/// Near-coincident directions make D*D numerically singular; condition
/// numbers above 1e12 are rejected.
inline NullSpaceBasis householder_projector(const ArrayConfig& cfg,
                                            const std::vector<double>& angles) {
    const int n_elements = cfg.n_elements;
    const int n_angles = static_cast<int>(angles.size());
    if (n_angles >= n_elements) {
        throw std::invalid_argument("householder_projector: need fewer directions than elements");
    }
    NullSpaceBasis basis;
    basis.angles = angles;
    basis.steering_block.resize(n_elements, n_angles);
    for (int l = 0; l < n_angles; ++l) {
        basis.steering_block.col(l) = steering_vector(cfg, angles[l]).entries;
    }
    if (n_angles == 0) {
        basis.projector = ComplexMatrix::Identity(n_elements, n_elements);
        return basis;
    }
    const ComplexMatrix gram = basis.steering_block.adjoint() * basis.steering_block;
    {
        Eigen::JacobiSVD<ComplexMatrix> svd(gram);
        const auto& sv = svd.singularValues();
        if (sv[sv.size() - 1] <= 0.0 || sv[0] / sv[sv.size() - 1] > 1e12) {
            throw IllConditionedError(
                "householder_projector: steering directions are numerically coincident "
                "(condition number of D*D exceeds 1e12)");
        }
    }
    const ComplexMatrix coeffs = gram.ldlt().solve(basis.steering_block.adjoint());
    basis.projector = ComplexMatrix::Identity(n_elements, n_elements) -
                      basis.steering_block * coeffs;
    return basis;
}

namespace detail {

/// Draws indices one at a time, uniformly without replacement, from
/// [0, pool_size). `accept` may veto a draw; vetoed indices leave the pool.
/// Returns the accepted indices in draw order, or fewer than `count` if the
/// pool runs dry.
template <typename AcceptFn>
std::vector<int> draw_without_replacement(int pool_size, int count, TrialRng& rng,
                                          AcceptFn&& accept) {
    std::vector<int> pool(pool_size);
    for (int i = 0; i < pool_size; ++i) pool[i] = i;
    std::vector<int> chosen;
    chosen.reserve(count);
    while (static_cast<int>(chosen.size()) < count && !pool.empty()) {
        const auto pos = rng.uniform_int(pool.size());
        const int idx = pool[pos];
        pool[pos] = pool.back();
        pool.pop_back();
        if (accept(idx)) chosen.push_back(idx);
    }
    return chosen;
}

} // namespace detail

/// Forms the combining matrix from a null-space projector by passing codebook
/// beams through it: column m is Q a_i for a uniformly drawn grid index i,
/// renormalized to unit norm. Beams whose projection has norm below 1e-8 lie
/// in the targeted span (their grid direction coincides with a nulled
/// direction) and are rejected and resampled. Every column exactly nulls all
/// targeted directions while remaining spread over the whole aperture.
inline CombinerMatrix combiner_from_projector(const NullSpaceBasis& basis, int n_measurements,
                                              TrialRng& rng) {
    const int n_elements = static_cast<int>(basis.projector.rows());
    const int n_nulled = static_cast<int>(basis.steering_block.cols());
    if (n_measurements < 1) {
        throw std::invalid_argument("combiner_from_projector: need at least one measurement");
    }
    if (n_measurements > n_elements - n_nulled) {
        throw CapacityError("combiner_from_projector: requested " +
                            std::to_string(n_measurements) + " columns but the null space has "
                            "dimension " + std::to_string(n_elements - n_nulled));
    }

    CombinerMatrix combiner;
    combiner.strategy = CombinerStrategy::kHouseholder;
    combiner.nulled_angles = basis.angles;
    combiner.columns.resize(n_elements, n_measurements);

    int filled = 0;
    detail::draw_without_replacement(n_elements, n_measurements, rng, [&](int idx) {
        ComplexVector projected = basis.projector * detail::dft_column(n_elements, idx);
        const double norm = projected.norm();
        if (norm < 1e-8) return false;
        combiner.columns.col(filled++) = projected / norm;
        return true;
    });
    if (filled < n_measurements) {
        throw CapacityError("combiner_from_projector: fewer than " +
                            std::to_string(n_measurements) +
                            " codebook beams survive the projection");
    }
    return combiner;
}

/// Selects M distinct codebook columns avoiding the given grid indices.
/// DFT orthogonality makes every selected column exactly null every avoided
/// direction.
inline CombinerMatrix combiner_dft_null(const DftCodebook& codebook,
                                        const std::set<int>& aoa_indices, int n_measurements,
                                        TrialRng& rng) {
    const int n_elements = codebook.size();
    for (int i : aoa_indices) {
        if (i < 0 || i >= n_elements) {
            throw std::domain_error("combiner_dft_null: grid index " + std::to_string(i) +
                                    " outside [0, N)");
        }
    }
    const int available = n_elements - static_cast<int>(aoa_indices.size());
    if (n_measurements < 1) {
        throw std::invalid_argument("combiner_dft_null: need at least one measurement");
    }
    if (n_measurements > available) {
        throw CapacityError("combiner_dft_null: requested " + std::to_string(n_measurements) +
                            " columns but only " + std::to_string(available) +
                            " non-nulled codebook columns exist");
    }

    CombinerMatrix combiner;
    combiner.strategy = CombinerStrategy::kDftNull;
    combiner.nulled_angles.reserve(aoa_indices.size());
    for (int i : aoa_indices) combiner.nulled_angles.push_back(codebook.angle_at(i));
    combiner.columns.resize(n_elements, n_measurements);

    int filled = 0;
    detail::draw_without_replacement(n_elements, n_measurements, rng, [&](int idx) {
        if (aoa_indices.contains(idx)) return false;
        combiner.columns.col(filled++) = codebook.columns.col(idx);
        return true;
    });
    return combiner;
}

/// Unit-modulus random-phase combining: entry (n, m) = (1/sqrt(N)) e^{j phi},
/// phi i.i.d. uniform on [0, 2*pi). The measurement matrix used by the
/// difference baseline; columns have unit norm by construction.
inline CombinerMatrix combiner_random_phase(const ArrayConfig& cfg, int n_measurements,
                                            TrialRng& rng) {
    if (n_measurements < 1) {
        throw std::invalid_argument("combiner_random_phase: need at least one measurement");
    }
    CombinerMatrix combiner;
    combiner.strategy = CombinerStrategy::kRandomPhase;
    combiner.columns.resize(cfg.n_elements, n_measurements);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_elements));
    for (int m = 0; m < n_measurements; ++m) {
        for (int n = 0; n < cfg.n_elements; ++n) {
            combiner.columns(n, m) = std::polar(scale, rng.uniform(0.0, 2.0 * kPi));
        }
    }
    return combiner;
}

} // namespace arraydiag

#endif // ARRAYDIAG_COMBINER_HPP
