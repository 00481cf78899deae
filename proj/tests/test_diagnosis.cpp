// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "arraydiag/diagnosis.hpp"
#include "arraydiag/sparse_recovery.hpp"

using namespace arraydiag;

namespace {

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("exact nulling cancels a fault-free channel") {
    const ArrayConfig cfg(64);
    TrialRng rng(11);
    const PathSet paths = sample_paths(cfg, 1, true, rng);
    const ComplexVector h = synthesize_channel(cfg, paths);
    const ChannelPair clean = apply_faults(h, FaultPattern{});

    const auto cb = dft_codebook(cfg);
    const std::set<int> null_idx{nearest_grid_index(cb, paths.paths[0].angle)};
    const auto combiner = combiner_dft_null(cb, null_idx, 20, rng);

    const ComplexVector y = measure(combiner, clean, NoiseModel::noiseless(), rng);
    CHECK(y.cwiseAbs().maxCoeff() <= 1e-8 * h.norm());
}

TEST_CASE("with faults the nulled measurement equals the error-channel projection") {
    const ArrayConfig cfg(64);
    TrialRng rng(12);
    const PathSet paths = sample_paths(cfg, 1, true, rng);
    const ComplexVector h = synthesize_channel(cfg, paths);
    const FaultPattern faults = sample_faults(64, 3, FaultMode::kComplete, rng);
    const ChannelPair pair = apply_faults(h, faults);

    const auto cb = dft_codebook(cfg);
    const std::set<int> null_idx{nearest_grid_index(cb, paths.paths[0].angle)};
    const auto combiner = combiner_dft_null(cb, null_idx, 20, rng);

    const ComplexVector y = measure(combiner, pair, NoiseModel::noiseless(), rng);
    const ComplexVector expected = combiner.columns.adjoint() * pair.error;
    CHECK((y - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("leakage through a misdesigned combiner grows with the offset") {
    const ArrayConfig cfg(64);
    const double theta = 0.2;
    PathSet paths;
    paths.paths.push_back({Complex(1.0, 0.0), theta});
    const ChannelPair clean = apply_faults(synthesize_channel(cfg, paths), FaultPattern{});

    double previous = 0.0;
    for (double offset_deg : {0.1, 0.5, 1.0}) {
        const double offset = offset_deg * kPi / 180.0;
        const auto basis = householder_projector(cfg, {theta + offset});
        TrialRng rng(200);
        const auto combiner = combiner_from_projector(basis, 20, rng);
        TrialRng noise_rng(201);
        const ComplexVector y = measure(combiner, clean, NoiseModel::noiseless(), noise_rng);
        CHECK(y.norm() > previous);
        previous = y.norm();
    }
    CHECK(previous > 0.0);
}

TEST_CASE("measure validates dimensions and draws fresh noise") {
    const ArrayConfig cfg(8);
    TrialRng rng(13);
    const ChannelPair pair = apply_faults(
        synthesize_channel(cfg, sample_paths(cfg, 1, true, rng)), FaultPattern{});
    const auto combiner = combiner_random_phase(ArrayConfig(16), 4, rng);
    CHECK_THROWS_AS(measure(combiner, pair, NoiseModel::noiseless(), rng), std::domain_error);

    const auto ok = combiner_random_phase(cfg, 4, rng);
    const ComplexVector a = measure(ok, pair, NoiseModel::from_snr_db(10.0), rng);
    const ComplexVector b = measure(ok, pair, NoiseModel::from_snr_db(10.0), rng);
    CHECK((a - b).norm() > 0.0);
}

TEST_CASE("proposed diagnosis ignores gain estimates entirely") {
    const ArrayConfig cfg(64);
    TrialRng rng(14);
    const PathSet paths = sample_paths(cfg, 2, false, rng);
    const FaultPattern faults = sample_faults(64, 3, FaultMode::kComplete, rng);
    const ChannelPair pair = apply_faults(synthesize_channel(cfg, paths), faults);

    ChannelKnowledge knowledge;
    for (const Path& p : paths.paths) knowledge.aoa_estimates.push_back(p.angle);
    knowledge.gain_estimates = std::vector<Complex>{Complex(1, 0), Complex(0, 1)};

    const auto basis = householder_projector(cfg, knowledge.aoa_estimates);
    TrialRng combiner_rng(77);
    const auto combiner = combiner_from_projector(basis, 24, combiner_rng);
    TrialRng noise_rng(78);
    const ComplexVector y = measure(combiner, pair, NoiseModel::from_snr_db(30.0), noise_rng);

    const RecoveryStopping stopping{3, {}};
    const auto base = diagnose_proposed(cfg, knowledge, y, combiner, stopping);

    ChannelKnowledge mutated = knowledge;
    mutated.gain_estimates = std::vector<Complex>{Complex(-9, 4), Complex(100, 0)};
    const auto same = diagnose_proposed(cfg, mutated, y, combiner, stopping);

    CHECK(base.support == same.support);
    CHECK((base.estimate - same.estimate).norm() == 0.0);
    CHECK(base.residual_norm == same.residual_norm);

    ChannelKnowledge no_gains = knowledge;
    no_gains.gain_estimates.reset();
    const auto still_same = diagnose_proposed(cfg, no_gains, y, combiner, stopping);
    CHECK(still_same.support == base.support);
}

TEST_CASE("proposed diagnosis requires a nulling combiner") {
    const ArrayConfig cfg(16);
    TrialRng rng(15);
    const auto combiner = combiner_random_phase(cfg, 8, rng);
    const ChannelKnowledge knowledge{{0.2}, {}};
    CHECK_THROWS_AS(
        diagnose_proposed(cfg, knowledge, ComplexVector::Zero(8), combiner, {1, {}}),
        std::invalid_argument);
}

TEST_CASE("zero measurements yield an empty detected set") {
    const ArrayConfig cfg(32);
    TrialRng rng(16);
    const auto cb = dft_codebook(cfg);
    const auto combiner = combiner_dft_null(cb, {0}, 10, rng);
    const ChannelKnowledge knowledge{{0.0}, {}};
    const auto result =
        diagnose_proposed(cfg, knowledge, ComplexVector::Zero(10), combiner, {3, {}});
    CHECK(result.support.empty());
}

TEST_CASE("difference baseline with perfect knowledge finds nothing on a healthy array") {
    const ArrayConfig cfg(32);
    TrialRng rng(17);
    const PathSet paths = sample_paths(cfg, 2, false, rng);
    const ChannelPair clean = apply_faults(synthesize_channel(cfg, paths), FaultPattern{});
    const auto combiner = combiner_random_phase(cfg, 12, rng);

    KnowledgeErrorSpec no_error;
    TrialRng perturb_rng(18);
    const ChannelKnowledge knowledge = perturb_knowledge(paths, no_error, perturb_rng);

    TrialRng noise_rng(19);
    const ComplexVector y = measure(combiner, clean, NoiseModel::noiseless(), noise_rng);
    const auto result = diagnose_difference(cfg, knowledge, y, combiner, {3, {}});
    CHECK(result.support.empty());
}

TEST_CASE("difference baseline recovers a single complete fault exactly") {
    const ArrayConfig cfg(32);
    TrialRng rng(20);
    const PathSet paths = sample_paths(cfg, 2, false, rng);
    const ComplexVector h = synthesize_channel(cfg, paths);
    FaultPattern faults;
    faults.coefficients[9] = Complex(0, 0);
    const ChannelPair pair = apply_faults(h, faults);
    const auto combiner = combiner_random_phase(cfg, 12, rng);

    KnowledgeErrorSpec no_error;
    TrialRng perturb_rng(21);
    const ChannelKnowledge knowledge = perturb_knowledge(paths, no_error, perturb_rng);

    TrialRng noise_rng(22);
    const ComplexVector y = measure(combiner, pair, NoiseModel::noiseless(), noise_rng);
    const auto result = diagnose_difference(cfg, knowledge, y, combiner, {1, {}});
    REQUIRE(result.support == std::vector<int>{9});
    // difference channel h - B h equals h at the blocked element
    CHECK(std::abs(result.estimate[9] - h[9]) < 1e-8);
}

TEST_CASE("difference baseline needs gain estimates") {
    const ArrayConfig cfg(16);
    TrialRng rng(23);
    const auto combiner = combiner_random_phase(cfg, 8, rng);
    ChannelKnowledge aoa_only;
    aoa_only.aoa_estimates = {0.1};
    CHECK_THROWS_AS(
        diagnose_difference(cfg, aoa_only, ComplexVector::Zero(8), combiner, {1, {}}),
        std::invalid_argument);
}

TEST_CASE("gain estimation errors break the difference baseline's sparsity") {
    const ArrayConfig cfg(64);
    const int n_trials = 200;
    int failures_perfect = 0;
    int failures_noisy_gain = 0;
    for (int t = 0; t < n_trials; ++t) {
        TrialRng rng(derive_seed({55, static_cast<std::uint64_t>(t)}));
        const PathSet paths = sample_paths(cfg, 2, false, rng);
        const FaultPattern faults = sample_faults(64, 3, FaultMode::kComplete, rng);
        const ChannelPair pair = apply_faults(synthesize_channel(cfg, paths), faults);
        const auto combiner = combiner_random_phase(cfg, 24, rng);
        const ComplexVector y = measure(combiner, pair, NoiseModel::from_snr_db(30.0), rng);

        KnowledgeErrorSpec perfect;
        KnowledgeErrorSpec noisy;
        noisy.gain_variance = 0.1;
        TrialRng perturb_a(derive_seed({56, static_cast<std::uint64_t>(t)}));
        TrialRng perturb_b(derive_seed({56, static_cast<std::uint64_t>(t)}));
        const ChannelKnowledge exact_csi = perturb_knowledge(paths, perfect, perturb_a);
        const ChannelKnowledge noisy_csi = perturb_knowledge(paths, noisy, perturb_b);

        const auto with_exact = diagnose_difference(cfg, exact_csi, y, combiner, {3, {}});
        const auto with_noise = diagnose_difference(cfg, noisy_csi, y, combiner, {3, {}});
        if (sorted(extract_support(with_exact, 3)) != faults.indices()) ++failures_perfect;
        if (sorted(extract_support(with_noise, 3)) != faults.indices()) ++failures_noisy_gain;
    }
    CHECK(failures_noisy_gain > failures_perfect + n_trials / 5);
}

TEST_CASE("perturb_knowledge applies offsets, noise, and clamping") {
    PathSet truth;
    truth.paths.push_back({Complex(1, 0), 0.2});
    truth.paths.push_back({Complex(0, 1), -0.7});

    TrialRng rng(24);
    const ChannelKnowledge same = perturb_knowledge(truth, KnowledgeErrorSpec{}, rng);
    CHECK(same.aoa_estimates[0] == 0.2);
    CHECK(same.aoa_estimates[1] == -0.7);
    REQUIRE(same.gain_estimates.has_value());
    CHECK((*same.gain_estimates)[0] == Complex(1, 0));
    CHECK((*same.gain_estimates)[1] == Complex(0, 1));

    KnowledgeErrorSpec offset;
    offset.aoa_offset_rad = 0.5 * kPi / 180.0;
    const ChannelKnowledge shifted = perturb_knowledge(truth, offset, rng);
    CHECK(std::abs(shifted.aoa_estimates[0] - 0.2 - 0.00872664625997165) < 1e-12);
    CHECK(std::abs(shifted.aoa_estimates[1] + 0.7 - 0.00872664625997165) < 1e-12);

    PathSet edge;
    edge.paths.push_back({Complex(1, 0), kPi / 2 - 1e-4});
    KnowledgeErrorSpec push;
    push.aoa_offset_rad = 0.1;
    const ChannelKnowledge clamped = perturb_knowledge(edge, push, rng);
    CHECK(clamped.aoa_estimates[0] == kPi / 2);
}

TEST_CASE("gain perturbation has the configured variance") {
    PathSet truth;
    truth.paths.push_back({Complex(0.5, -0.5), 0.1});
    KnowledgeErrorSpec spec;
    spec.gain_variance = 0.1;
    TrialRng rng(25);
    double acc = 0.0;
    const int draws = 10000;
    for (int k = 0; k < draws; ++k) {
        const ChannelKnowledge kn = perturb_knowledge(truth, spec, rng);
        acc += std::norm((*kn.gain_estimates)[0] - truth.paths[0].gain);
    }
    CHECK(acc / draws > 0.095);
    CHECK(acc / draws < 0.105);
}

TEST_CASE("proposed diagnosis agrees with the exhaustive oracle at small scale") {
    const ArrayConfig cfg(16);
    int agree = 0;
    int correct = 0;
    const int n_trials = 100;
    for (int t = 0; t < n_trials; ++t) {
        TrialRng rng(derive_seed({60, static_cast<std::uint64_t>(t)}));
        const PathSet paths = sample_paths(cfg, 1, true, rng);
        const FaultPattern faults = sample_faults(16, 2, FaultMode::kComplete, rng);
        const ChannelPair pair = apply_faults(synthesize_channel(cfg, paths), faults);

        const auto cb = dft_codebook(cfg);
        const std::set<int> null_idx{nearest_grid_index(cb, paths.paths[0].angle)};
        const auto combiner = combiner_dft_null(cb, null_idx, 12, rng);
        const ComplexVector y = measure(combiner, pair, NoiseModel::noiseless(), rng);

        ChannelKnowledge knowledge;
        knowledge.aoa_estimates.push_back(paths.paths[0].angle);
        const auto omp = diagnose_proposed(cfg, knowledge, y, combiner, {2, {}});
        const auto oracle =
            exhaustive_solve({combiner.columns.adjoint(), y, 2, {}}, 2);
        if (sorted(omp.support) == sorted(oracle.support)) ++agree;
        if (sorted(extract_support(omp, 2)) == faults.indices()) ++correct;
    }
    CHECK(agree >= 95);
    CHECK(correct >= 90);
}
