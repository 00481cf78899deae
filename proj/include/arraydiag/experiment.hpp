// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors
//
// Monte Carlo experiment engine: runs P_success sweeps over a named
// parameter, with presets for the standard figure-style experiments.

#ifndef ARRAYDIAG_EXPERIMENT_HPP
#define ARRAYDIAG_EXPERIMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "arraydiag/diagnosis.hpp"

namespace arraydiag {

enum class Technique { kProposed, kDifference };
enum class TechniqueSelection { kProposed, kDifference, kBoth };
enum class SweepParam { kMeasurements, kSnrDb, kAoaOffsetDeg, kGainErrorVar, kAoaErrorVar };

inline const char* to_string(Technique t) {
    return t == Technique::kProposed ? "proposed" : "difference";
}

inline const char* to_string(TechniqueSelection t) {
    switch (t) {
        case TechniqueSelection::kProposed: return "proposed";
        case TechniqueSelection::kDifference: return "difference";
        case TechniqueSelection::kBoth: return "both";
    }
    return "?";
}

inline const char* to_string(SweepParam p) {
    switch (p) {
        case SweepParam::kMeasurements: return "m_measurements";
        case SweepParam::kSnrDb: return "snr_db";
        case SweepParam::kAoaOffsetDeg: return "aoa_offset_deg";
        case SweepParam::kGainErrorVar: return "gain_error_var";
        case SweepParam::kAoaErrorVar: return "aoa_error_var";
    }
    return "?";
}

inline const char* to_string(FaultMode m) {
    return m == FaultMode::kComplete ? "complete" : "partial";
}

/// Stable stream identifiers for per-trial seed derivation.
inline std::uint64_t stream_id(Technique t) {
    return t == Technique::kProposed ? 0u : 1u;
}

/// Non-swept parameter values of an experiment.
struct FixedParams {
    int m_measurements = 35;
    double snr_db = 40.0;
    double aoa_offset_deg = 0.0;
    double gain_error_var = 0.0;
    double aoa_error_var = 0.0;
};

/// Full description of one Monte Carlo sweep. Every parameter is explicit so
/// emitted results are self-describing and reproducible from any output row.
struct ExperimentSpec {
    std::string experiment_id = "custom";
    int n_elements = 128;
    int n_faults = 6;
    FaultMode fault_mode = FaultMode::kComplete;
    int n_paths = 1;
    bool quantized = true;
    TechniqueSelection technique = TechniqueSelection::kBoth;
    SweepParam sweep_param = SweepParam::kSnrDb;
    std::vector<double> sweep_values;
    FixedParams fixed;
    int trials = 500;
    std::uint64_t master_seed = 1;
};

/// Parameter set in effect at one sweep point.
struct ResolvedParams {
    int m_measurements;
    double snr_db;
    double aoa_offset_deg;
    double gain_error_var;
    double aoa_error_var;
};

inline ResolvedParams resolve_params(const ExperimentSpec& spec, double sweep_value) {
    ResolvedParams p{spec.fixed.m_measurements, spec.fixed.snr_db, spec.fixed.aoa_offset_deg,
                     spec.fixed.gain_error_var, spec.fixed.aoa_error_var};
    switch (spec.sweep_param) {
        case SweepParam::kMeasurements: p.m_measurements = static_cast<int>(sweep_value); break;
        case SweepParam::kSnrDb: p.snr_db = sweep_value; break;
        case SweepParam::kAoaOffsetDeg: p.aoa_offset_deg = sweep_value; break;
        case SweepParam::kGainErrorVar: p.gain_error_var = sweep_value; break;
        case SweepParam::kAoaErrorVar: p.aoa_error_var = sweep_value; break;
    }
    return p;
}

inline std::vector<Technique> selected_techniques(TechniqueSelection sel) {
    switch (sel) {
        case TechniqueSelection::kProposed: return {Technique::kProposed};
        case TechniqueSelection::kDifference: return {Technique::kDifference};
        case TechniqueSelection::kBoth: return {Technique::kProposed, Technique::kDifference};
    }
    return {};
}

/// Validates every field of a spec; throws ConfigError naming the offending
/// field.
inline void validate_spec(const ExperimentSpec& spec) {
    if (spec.n_elements < 2) {
        throw ConfigError("n_elements: must be >= 2");
    }
    if (spec.n_faults < 0 || spec.n_faults >= spec.n_elements) {
        throw ConfigError("n_faults: must satisfy 0 <= n_faults < n_elements");
    }
    if (spec.n_paths < 1 || spec.n_paths > spec.n_elements) {
        throw ConfigError("n_paths: must satisfy 1 <= n_paths <= n_elements");
    }
    if (spec.trials < 1) {
        throw ConfigError("trials: must be >= 1");
    }
    if (spec.sweep_values.empty()) {
        throw ConfigError("sweep_values: must not be empty");
    }
    {
        std::set<double> unique(spec.sweep_values.begin(), spec.sweep_values.end());
        if (unique.size() != spec.sweep_values.size()) {
            throw ConfigError("sweep_values: duplicate values");
        }
    }
    const bool uses_proposed = spec.technique != TechniqueSelection::kDifference;
    const int m_cap = uses_proposed ? spec.n_elements - spec.n_paths : spec.n_elements;
    auto check_m = [&](double value, const char* field) {
        if (value != std::floor(value)) {
            throw ConfigError(std::string(field) + ": measurement count must be an integer");
        }
        if (value < 1 || value > m_cap) {
            throw ConfigError(std::string(field) + ": measurement count must be in [1, " +
                              std::to_string(m_cap) + "]");
        }
    };
    auto check_var = [&](double value, const char* field) {
        if (value < 0.0) {
            throw ConfigError(std::string(field) + ": variance must be >= 0");
        }
    };
    if (spec.sweep_param == SweepParam::kMeasurements) {
        for (double v : spec.sweep_values) check_m(v, "sweep_values");
    } else {
        check_m(spec.fixed.m_measurements, "m_measurements");
    }
    if (spec.sweep_param == SweepParam::kGainErrorVar) {
        for (double v : spec.sweep_values) check_var(v, "sweep_values");
    } else {
        check_var(spec.fixed.gain_error_var, "gain_error_var");
    }
    if (spec.sweep_param == SweepParam::kAoaErrorVar) {
        for (double v : spec.sweep_values) check_var(v, "sweep_values");
    } else {
        check_var(spec.fixed.aoa_error_var, "aoa_error_var");
    }
}

namespace detail {

/// Shared per-sweep state; immutable during trials.
struct TrialContext {
    ArrayConfig cfg;
    std::optional<DftCodebook> codebook;  // present for quantized experiments

    explicit TrialContext(const ExperimentSpec& spec) : cfg(spec.n_elements) {
        if (spec.quantized) codebook = dft_codebook(cfg);
    }
};

inline bool run_trial_in_context(const TrialContext& ctx, const ExperimentSpec& spec,
                                 double sweep_value, Technique technique,
                                 std::uint64_t trial_index) {
    // One independent stream per (seed, technique, trial). Sweep points share
    // streams, so sweeping a parameter the pipeline ignores cannot change the
    // outcome (common random numbers).
    TrialRng rng(spec.master_seed, stream_id(technique), trial_index);
    const ResolvedParams params = resolve_params(spec, sweep_value);
    const ArrayConfig& cfg = ctx.cfg;

    const PathSet paths = sample_paths(cfg, spec.n_paths, spec.quantized, rng);
    const FaultPattern faults =
        sample_faults(cfg.n_elements, spec.n_faults, spec.fault_mode, rng);
    KnowledgeErrorSpec error_spec;
    error_spec.aoa_offset_rad = params.aoa_offset_deg * kPi / 180.0;
    error_spec.aoa_variance = params.aoa_error_var;
    error_spec.gain_variance = params.gain_error_var;
    const ChannelKnowledge knowledge = perturb_knowledge(paths, error_spec, rng);

    const ComplexVector h = synthesize_channel(cfg, paths);
    const ChannelPair channel = apply_faults(h, faults);

    CombinerMatrix combiner;
    if (technique == Technique::kDifference) {
        combiner = combiner_random_phase(cfg, params.m_measurements, rng);
    } else if (spec.quantized) {
        std::set<int> null_indices;
        for (double angle : knowledge.aoa_estimates) {
            null_indices.insert(nearest_grid_index(*ctx.codebook, angle));
        }
        combiner = combiner_dft_null(*ctx.codebook, null_indices, params.m_measurements, rng);
    } else {
        const NullSpaceBasis basis = householder_projector(cfg, knowledge.aoa_estimates);
        combiner = combiner_from_projector(basis, params.m_measurements, rng);
    }

    const NoiseModel noise = NoiseModel::from_snr_db(params.snr_db);
    const ComplexVector measurements = measure(combiner, channel, noise, rng);

    const RecoveryStopping stopping{spec.n_faults, std::nullopt};
    const DiagnosisResult result =
        technique == Technique::kProposed
            ? diagnose_proposed(cfg, knowledge, measurements, combiner, stopping)
            : diagnose_difference(cfg, knowledge, measurements, combiner, stopping);

    return extract_support(result, spec.n_faults) == faults.indices();
}

} // namespace detail

/// Runs one trial end to end; success means the detected fault set equals
/// the true fault set exactly. Pipeline errors propagate to the caller.
inline bool run_trial(const ExperimentSpec& spec, double sweep_value, Technique technique,
                      std::uint64_t trial_index) {
    detail::TrialContext ctx(spec);
    return detail::run_trial_in_context(ctx, spec, sweep_value, technique, trial_index);
}

/// One aggregated sweep point.
struct SweepRow {
    double sweep_value;
    Technique technique;
    double p_success;
    int trials;
    double std_error;
    std::uint64_t seed;
    int n_errors;  // trials that raised instead of finishing (counted as failures)
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

using TrialFn =
    std::function<bool(const ExperimentSpec&, double, Technique, std::uint64_t)>;

/// Sweep driver with an injectable trial function (used by the engine
/// self-tests). Rows are ordered by sweep value, then technique. Results are
/// deterministic for a fixed master seed at any worker count: trial streams
/// depend only on (seed, technique, trial index) and results are merged by
/// trial index.
inline SweepResult run_sweep_with(const ExperimentSpec& spec, const TrialFn& trial_fn,
                                  int workers = 0, std::ostream* log = nullptr) {
    validate_spec(spec);
    int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;

    std::vector<double> values = spec.sweep_values;
    std::sort(values.begin(), values.end());
    const std::vector<Technique> techniques = selected_techniques(spec.technique);

    SweepResult result;
    for (double value : values) {
        for (Technique technique : techniques) {
            std::vector<std::uint8_t> outcomes(spec.trials, 0);
            std::vector<std::uint64_t> error_counts(n_workers, 0);

            auto worker = [&](int worker_index) {
                for (int t = worker_index; t < spec.trials; t += n_workers) {
                    try {
                        outcomes[t] = trial_fn(spec, value, technique,
                                               static_cast<std::uint64_t>(t))
                                          ? 1
                                          : 0;
                    } catch (const std::exception&) {
                        ++error_counts[worker_index];
                    }
                }
            };
            if (n_workers == 1) {
                worker(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(n_workers);
                for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker, w);
                for (auto& th : pool) th.join();
            }

            int successes = 0;
            for (std::uint8_t o : outcomes) successes += o;
            std::uint64_t errors = 0;
            for (std::uint64_t e : error_counts) errors += e;

            const double p = static_cast<double>(successes) / spec.trials;
            SweepRow row{value,
                         technique,
                         p,
                         spec.trials,
                         std::sqrt(p * (1.0 - p) / spec.trials),
                         spec.master_seed,
                         static_cast<int>(errors)};
            if (log) {
                (*log) << spec.experiment_id << " " << to_string(spec.sweep_param) << "="
                       << value << " technique=" << to_string(technique)
                       << " p_success=" << p << " trials=" << spec.trials;
                if (errors > 0) (*log) << " errors=" << errors;
                (*log) << "\n";
            }
            result.rows.push_back(row);
        }
    }
    return result;
}

/// Runs the real diagnosis pipeline over the sweep.
inline SweepResult run_sweep(const ExperimentSpec& spec, int workers = 0,
                             std::ostream* log = nullptr) {
    validate_spec(spec);
    detail::TrialContext ctx(spec);
    const TrialFn fn = [&ctx](const ExperimentSpec& s, double value, Technique technique,
                              std::uint64_t trial) {
        return detail::run_trial_in_context(ctx, s, value, technique, trial);
    };
    return run_sweep_with(spec, fn, workers, log);
}

/// Figure-style experiment presets. Values the captions leave open are
/// pinned here so every preset is fully reproducible.
inline std::vector<ExperimentSpec> preset(const std::string& name) {
    auto base = []() {
        ExperimentSpec spec;
        spec.n_elements = 128;
        spec.trials = 500;
        spec.technique = TechniqueSelection::kBoth;
        return spec;
    };

    if (name == "fig1") {
        std::vector<ExperimentSpec> specs;
        for (int s : {1, 3, 6}) {
            ExperimentSpec spec = base();
            spec.experiment_id = "fig1_s" + std::to_string(s);
            spec.n_faults = s;
            spec.n_paths = 1;
            spec.quantized = true;
            spec.fault_mode = FaultMode::kComplete;
            spec.sweep_param = SweepParam::kMeasurements;
            for (int m = 5; m <= 60; m += 5) spec.sweep_values.push_back(m);
            spec.fixed.snr_db = 40.0;
            specs.push_back(std::move(spec));
        }
        return specs;
    }
    if (name == "fig2") {
        std::vector<ExperimentSpec> specs;
        for (FaultMode mode : {FaultMode::kComplete, FaultMode::kPartial}) {
            ExperimentSpec spec = base();
            spec.experiment_id = std::string("fig2_") + to_string(mode);
            spec.n_faults = 6;
            spec.n_paths = 1;
            spec.quantized = true;
            spec.fault_mode = mode;
            spec.sweep_param = SweepParam::kAoaOffsetDeg;
            for (int i = 0; i <= 20; ++i) spec.sweep_values.push_back(i / 10.0);
            spec.fixed.m_measurements = 35;
            spec.fixed.snr_db = 40.0;
            specs.push_back(std::move(spec));
        }
        return specs;
    }
    if (name == "fig3") {
        std::vector<ExperimentSpec> specs;
        for (FaultMode mode : {FaultMode::kComplete, FaultMode::kPartial}) {
            ExperimentSpec spec = base();
            spec.experiment_id = std::string("fig3_") + to_string(mode);
            spec.n_faults = 6;
            spec.n_paths = 3;
            spec.quantized = false;
            spec.fault_mode = mode;
            spec.sweep_param = SweepParam::kSnrDb;
            for (int snr = 0; snr <= 40; snr += 5) spec.sweep_values.push_back(snr);
            spec.fixed.m_measurements = 35;
            // Channel estimates carry a small gain error; only the full-CSI
            // baseline is sensitive to it.
            spec.fixed.gain_error_var = 1e-3;
            specs.push_back(std::move(spec));
        }
        return specs;
    }
    if (name == "fig4") {
        const std::vector<double> variances{0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
        std::vector<ExperimentSpec> specs;
        for (SweepParam param : {SweepParam::kGainErrorVar, SweepParam::kAoaErrorVar}) {
            ExperimentSpec spec = base();
            spec.experiment_id =
                param == SweepParam::kGainErrorVar ? "fig4_gain" : "fig4_aoa";
            spec.n_faults = 6;
            spec.n_paths = 3;
            spec.quantized = false;
            spec.fault_mode = FaultMode::kComplete;
            spec.sweep_param = param;
            spec.sweep_values = variances;
            spec.fixed.m_measurements = 45;
            spec.fixed.snr_db = 30.0;
            specs.push_back(std::move(spec));
        }
        return specs;
    }
    throw std::domain_error("preset: unknown name '" + name + "' (expected fig1..fig4)");
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4"};
    return names;
}

} // namespace arraydiag

#endif // ARRAYDIAG_EXPERIMENT_HPP
