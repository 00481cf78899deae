// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors
//
// End-to-end diagnosis pipelines: the partial-CSI technique (combiner nulls
// the known arrival directions, leaked energy reveals the faults) and the
// full-CSI difference baseline (subtract an ideal reference response), plus
// measurement generation under noise and channel-knowledge errors.

#ifndef ARRAYDIAG_DIAGNOSIS_HPP
#define ARRAYDIAG_DIAGNOSIS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "arraydiag/combiner.hpp"
#include "arraydiag/fault_channel.hpp"
#include "arraydiag/sparse_recovery.hpp"

namespace arraydiag {

/// Additive receiver noise: i.i.d. CN(0, variance) per diagnostic
/// measurement, with variance = 10^(-snr_db/10) for a unit-power symbol.
struct NoiseModel {
    double snr_db;
    double variance;

    static NoiseModel from_snr_db(double snr_db) {
        return NoiseModel{snr_db, std::pow(10.0, -snr_db / 10.0)};
    }

    static NoiseModel noiseless() {
        return NoiseModel{std::numeric_limits<double>::infinity(), 0.0};
    }
};

/// What the receiver believes about its channel. The partial-CSI technique
/// consumes only the arrival-direction estimates; the difference baseline
/// additionally needs the per-path gain estimates.
struct ChannelKnowledge {
    std::vector<double> aoa_estimates;                     // radians
    std::optional<std::vector<Complex>> gain_estimates;
};

/// How the channel estimates deviate from the truth. The deterministic
/// offset shifts every path by the same signed angle; the Gaussian variances
/// add independent per-path perturbations.
struct KnowledgeErrorSpec {
    double aoa_offset_rad = 0.0;
    double aoa_variance = 0.0;   // radians^2
    double gain_variance = 0.0;
};

/// Applies the error model to the true paths. Angle estimates are clamped to
/// [-pi/2, pi/2]. Exactly 2L Gaussian pairs are drawn regardless of the
/// variance values, so the stream position after this call does not depend
/// on the error parameters.
inline ChannelKnowledge perturb_knowledge(const PathSet& truth, const KnowledgeErrorSpec& spec,
                                          TrialRng& rng) {
    ChannelKnowledge knowledge;
    knowledge.aoa_estimates.reserve(truth.paths.size());
    std::vector<Complex> gains;
    gains.reserve(truth.paths.size());
    const double aoa_sigma = std::sqrt(spec.aoa_variance);
    for (const Path& p : truth.paths) {
        const double delta = spec.aoa_offset_rad + aoa_sigma * rng.gaussian();
        knowledge.aoa_estimates.push_back(std::clamp(p.angle + delta, -kPi / 2, kPi / 2));
        gains.push_back(p.gain + rng.complex_gaussian(spec.gain_variance));
    }
    knowledge.gain_estimates = std::move(gains);
    return knowledge;
}

/// Receives M diagnostic symbols through the combiner from the (possibly
/// faulty) channel: y_m = w_m^* h_faulty + z_m. Draws M noise samples per
/// call; the fault pattern itself is never consulted.
inline ComplexVector measure(const CombinerMatrix& combiner, const ChannelPair& channel,
                             const NoiseModel& noise, TrialRng& rng) {
    if (combiner.columns.rows() != channel.faulty.size()) {
        throw std::domain_error("measure: combiner and channel have different element counts");
    }
    ComplexVector y = combiner.columns.adjoint() * channel.faulty;
    for (Eigen::Index m = 0; m < y.size(); ++m) {
        y[m] += rng.complex_gaussian(noise.variance);
    }
    return y;
}

/// Stopping configuration threaded into the sparse solver.
struct RecoveryStopping {
    std::optional<int> sparsity;
    std::optional<double> residual_tolerance;
};

/// Partial-CSI diagnosis: the combiner was built to null every estimated
/// arrival direction, so the measurements contain only fault leakage plus
/// noise and the error channel is recovered directly from (W^*, y). Path
/// gain estimates are never read.
inline DiagnosisResult diagnose_proposed(const ArrayConfig& cfg,
                                         [[maybe_unused]] const ChannelKnowledge& knowledge,
                                         const ComplexVector& measurements,
                                         const CombinerMatrix& combiner,
                                         const RecoveryStopping& stopping) {
    if (combiner.strategy == CombinerStrategy::kRandomPhase) {
        throw std::invalid_argument(
            "diagnose_proposed: combiner must be a nulling design (dft_null or householder)");
    }
    if (combiner.columns.rows() != cfg.n_elements) {
        throw std::domain_error("diagnose_proposed: combiner size does not match the array");
    }
    RecoveryProblem problem{combiner.columns.adjoint(), measurements, stopping.sparsity,
                            stopping.residual_tolerance};
    return omp_solve(problem);
}

/// Full-CSI difference baseline: reconstructs the ideal fault-free response
/// y_ref = W^* h_ref from the estimated channel (offline, noiseless), forms
/// the difference y_ref - measurements, and recovers the sparse difference
/// channel from it. Requires gain estimates.
inline DiagnosisResult diagnose_difference(const ArrayConfig& cfg,
                                           const ChannelKnowledge& knowledge,
                                           const ComplexVector& measurements,
                                           const CombinerMatrix& combiner,
                                           const RecoveryStopping& stopping) {
    if (combiner.strategy != CombinerStrategy::kRandomPhase) {
        throw std::invalid_argument("diagnose_difference: combiner must be random_phase");
    }
    if (combiner.columns.rows() != cfg.n_elements) {
        throw std::domain_error("diagnose_difference: combiner size does not match the array");
    }
    if (!knowledge.gain_estimates ||
        knowledge.gain_estimates->size() != knowledge.aoa_estimates.size()) {
        throw std::invalid_argument("diagnose_difference: full CSI (gain estimates) required");
    }
    PathSet estimated;
    estimated.paths.reserve(knowledge.aoa_estimates.size());
    for (size_t l = 0; l < knowledge.aoa_estimates.size(); ++l) {
        estimated.paths.push_back({(*knowledge.gain_estimates)[l], knowledge.aoa_estimates[l]});
    }
    const ComplexVector reference =
        combiner.columns.adjoint() * synthesize_channel(cfg, estimated);
    const ComplexVector difference = reference - measurements;
    RecoveryProblem problem{combiner.columns.adjoint(), difference, stopping.sparsity,
                            stopping.residual_tolerance};
    return omp_solve(problem);
}

} // namespace arraydiag

#endif // ARRAYDIAG_DIAGNOSIS_HPP
