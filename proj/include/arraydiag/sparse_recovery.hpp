// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors
//
// Sparse support recovery for the diagnosis measurements: orthogonal
// matching pursuit, plus an exhaustive-search oracle for small instances.

#ifndef ARRAYDIAG_SPARSE_RECOVERY_HPP
#define ARRAYDIAG_SPARSE_RECOVERY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arraydiag/array_model.hpp"
#include "arraydiag/errors.hpp"

namespace arraydiag {

/// One instance of the recovery problem: observations ~ sensing * x with x
/// sparse. `sensing` is the conjugate-transposed combining matrix (M x N).
/// At least one stopping rule must be set; with both set the solver stops on
/// whichever triggers first.
struct RecoveryProblem {
    ComplexMatrix sensing;
    ComplexVector observations;
    std::optional<int> sparsity;
    std::optional<double> residual_tolerance;
};

/// Output of a recovery run. `support` lists the selected columns in
/// selection order; `estimate` is zero outside it.
struct DiagnosisResult {
    ComplexVector estimate;
    std::vector<int> support;
    double residual_norm = 0.0;
    int iterations = 0;
};

namespace detail {

inline void validate_problem(const RecoveryProblem& problem) {
    const auto rows = problem.sensing.rows();
    const auto cols = problem.sensing.cols();
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("recovery: sensing matrix is empty");
    }
    if (rows > cols) {
        throw std::invalid_argument("recovery: sensing matrix must have M <= N");
    }
    if (problem.observations.size() != rows) {
        throw std::invalid_argument("recovery: observations length does not match sensing rows");
    }
    if (!problem.sparsity && !problem.residual_tolerance) {
        throw std::invalid_argument("recovery: no stopping rule configured");
    }
    if (problem.sparsity && *problem.sparsity < 0) {
        throw std::invalid_argument("recovery: negative sparsity");
    }
}

/// Least squares on the selected columns via column-pivoted QR. Throws if
/// the selected set is numerically rank deficient.
inline ComplexVector refit_on_support(const ComplexMatrix& sensing,
                                      const std::vector<int>& support,
                                      const ComplexVector& observations) {
    const int k = static_cast<int>(support.size());
    ComplexMatrix selected(sensing.rows(), k);
    for (int i = 0; i < k; ++i) selected.col(i) = sensing.col(support[i]);
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(selected);
    if (qr.rank() < k) {
        throw DegenerateProblemError("recovery: least-squares system on the selected support "
                                     "is singular (" + std::to_string(k) + " columns, rank " +
                                     std::to_string(qr.rank()) + ")");
    }
    return qr.solve(observations);
}

inline ComplexVector scatter(const ComplexVector& coeffs, const std::vector<int>& support,
                             Eigen::Index n) {
    ComplexVector full = ComplexVector::Zero(n);
    for (size_t i = 0; i < support.size(); ++i) full[support[i]] = coeffs[i];
    return full;
}

} // namespace detail

/// Orthogonal matching pursuit. Per iteration: pick the column with the
/// largest norm-scaled correlation against the residual (ties to the
/// smallest index), then refit all selected coefficients by least squares.
/// Stops after `sparsity` iterations, or when the residual norm drops to
/// `residual_tolerance`, or when an iteration improves the residual by less
/// than a factor 1e-12 (that iteration is discarded).
inline DiagnosisResult omp_solve(const RecoveryProblem& problem) {
    detail::validate_problem(problem);
    const auto& sensing = problem.sensing;
    const auto& y = problem.observations;
    const auto n_rows = sensing.rows();
    const auto n_cols = sensing.cols();

    Eigen::VectorXd col_norms(n_cols);
    for (Eigen::Index n = 0; n < n_cols; ++n) {
        col_norms[n] = sensing.col(n).norm();
        if (col_norms[n] == 0.0) {
            throw std::invalid_argument("omp_solve: sensing column " + std::to_string(n) +
                                        " is zero");
        }
    }

    DiagnosisResult result;
    result.estimate = ComplexVector::Zero(n_cols);
    result.residual_norm = y.norm();

    const double zero_tol = 1e-13 * std::max(1.0, y.norm());
    const int max_iters = problem.sparsity
                              ? std::min<int>(*problem.sparsity, static_cast<int>(n_rows))
                              : static_cast<int>(n_rows);

    ComplexVector residual = y;
    ComplexVector coeffs;
    while (result.iterations < max_iters) {
        if (problem.residual_tolerance && result.residual_norm <= *problem.residual_tolerance) {
            break;
        }
        if (result.residual_norm <= zero_tol) break;

        const Eigen::VectorXd scores =
            (sensing.adjoint() * residual).cwiseAbs().cwiseQuotient(col_norms);
        int pick = 0;
        for (Eigen::Index n = 1; n < n_cols; ++n) {
            if (scores[n] > scores[pick]) pick = static_cast<int>(n);
        }

        result.support.push_back(pick);
        ComplexVector new_coeffs = detail::refit_on_support(sensing, result.support, y);
        ComplexVector new_residual = y;
        for (size_t i = 0; i < result.support.size(); ++i) {
            new_residual -= new_coeffs[i] * sensing.col(result.support[i]);
        }
        const double new_norm = new_residual.norm();
        if (result.residual_norm - new_norm <= 1e-12 * result.residual_norm) {
            result.support.pop_back();  // stalled; discard the failed step
            break;
        }
        coeffs = std::move(new_coeffs);
        residual = std::move(new_residual);
        result.residual_norm = new_norm;
        ++result.iterations;
    }

    result.estimate = detail::scatter(coeffs, result.support, n_cols);
    return result;
}

/// Number of size-k subsets of n elements, saturating at +inf.
inline double binomial_count(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c *= static_cast<double>(n - k + i) / i;
        if (c > 1e15) return std::numeric_limits<double>::infinity();
    }
    return c;
}

/// Brute-force oracle: scans every support of size `sparsity` and returns the
/// one with the smallest least-squares residual (ties to the
/// lexicographically smallest support). Refuses instances with more than 1e6
/// candidate supports.
inline DiagnosisResult exhaustive_solve(const RecoveryProblem& problem, int sparsity) {
    detail::validate_problem(RecoveryProblem{problem.sensing, problem.observations, sparsity, {}});
    const auto n_cols = static_cast<int>(problem.sensing.cols());
    if (sparsity > n_cols) {
        throw std::invalid_argument("exhaustive_solve: sparsity exceeds column count");
    }
    if (binomial_count(n_cols, sparsity) > 1e6) {
        throw CapacityError("exhaustive_solve: more than 1e6 candidate supports");
    }

    DiagnosisResult best;
    best.estimate = ComplexVector::Zero(n_cols);
    best.residual_norm = problem.observations.norm();
    best.iterations = 0;
    if (sparsity == 0) return best;

    double best_norm = std::numeric_limits<double>::infinity();
    std::vector<int> combo(sparsity);
    for (int i = 0; i < sparsity; ++i) combo[i] = i;

    while (true) {
        ComplexMatrix selected(problem.sensing.rows(), sparsity);
        for (int i = 0; i < sparsity; ++i) selected.col(i) = problem.sensing.col(combo[i]);
        Eigen::ColPivHouseholderQR<ComplexMatrix> qr(selected);
        const ComplexVector coeffs = qr.solve(problem.observations);
        const double norm = (problem.observations - selected * coeffs).norm();
        if (norm < best_norm) {
            best_norm = norm;
            best.support = combo;
            best.estimate = detail::scatter(coeffs, combo, n_cols);
        }

        // next combination in lexicographic order
        int i = sparsity - 1;
        while (i >= 0 && combo[i] == n_cols - sparsity + i) --i;
        if (i < 0) break;
        ++combo[i];
        for (int j = i + 1; j < sparsity; ++j) combo[j] = combo[j - 1] + 1;
    }

    best.residual_norm = best_norm;
    best.iterations = sparsity;
    return best;
}

/// The detected fault set: indices of the S largest-magnitude entries of the
/// estimate, ascending. Magnitude ties go to the smaller index. If the
/// estimate has fewer than S nonzeros, only the nonzero support is returned
/// (a short set counts as a miss downstream).
inline std::vector<int> extract_support(const DiagnosisResult& result, int set_size) {
    if (set_size < 0 || set_size > result.estimate.size()) {
        throw std::invalid_argument("extract_support: set size outside [0, N]");
    }
    std::vector<int> nonzero;
    for (Eigen::Index n = 0; n < result.estimate.size(); ++n) {
        if (std::abs(result.estimate[n]) > 0.0) nonzero.push_back(static_cast<int>(n));
    }
    std::sort(nonzero.begin(), nonzero.end(), [&](int a, int b) {
        const double ma = std::abs(result.estimate[a]);
        const double mb = std::abs(result.estimate[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    if (static_cast<int>(nonzero.size()) > set_size) nonzero.resize(set_size);
    std::sort(nonzero.begin(), nonzero.end());
    return nonzero;
}

} // namespace arraydiag

#endif // ARRAYDIAG_SPARSE_RECOVERY_HPP
