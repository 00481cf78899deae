// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors
//
// Experiment configuration parsing and result emission (CSV / JSON).

#ifndef ARRAYDIAG_CONFIG_IO_HPP
#define ARRAYDIAG_CONFIG_IO_HPP

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arraydiag/experiment.hpp"
#include "arraydiag/version.hpp"

namespace arraydiag {

/// One executed sweep: the ExperimentSpec it ran under plus its aggregated rows.
struct ExperimentRun {
    ExperimentSpec spec;
    SweepResult result;
};

namespace detail {

inline FaultMode fault_mode_from_string(const std::string& s) {
    if (s == "complete") return FaultMode::kComplete;
    if (s == "partial") return FaultMode::kPartial;
    throw ConfigError("fault_mode: expected 'complete' or 'partial', got '" + s + "'");
}

inline TechniqueSelection technique_from_string(const std::string& s) {
    if (s == "proposed") return TechniqueSelection::kProposed;
    if (s == "difference") return TechniqueSelection::kDifference;
    if (s == "both") return TechniqueSelection::kBoth;
    throw ConfigError("technique: expected 'proposed', 'difference' or 'both', got '" + s + "'");
}

inline SweepParam sweep_param_from_string(const std::string& s) {
    if (s == "m_measurements") return SweepParam::kMeasurements;
    if (s == "snr_db") return SweepParam::kSnrDb;
    if (s == "aoa_offset_deg") return SweepParam::kAoaOffsetDeg;
    if (s == "gain_error_var") return SweepParam::kGainErrorVar;
    if (s == "aoa_error_var") return SweepParam::kAoaErrorVar;
    throw ConfigError("sweep: unknown sweep parameter '" + s + "'");
}

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

inline std::string format_fixed6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

inline int require_int(const nlohmann::json& value, const char* field) {
    if (!value.is_number_integer()) {
        throw ConfigError(std::string(field) + ": expected an integer");
    }
    return value.get<int>();
}

inline double require_number(const nlohmann::json& value, const char* field) {
    if (!value.is_number()) {
        throw ConfigError(std::string(field) + ": expected a number");
    }
    return value.get<double>();
}

inline std::string require_string(const nlohmann::json& value, const char* field) {
    if (!value.is_string()) {
        throw ConfigError(std::string(field) + ": expected a string");
    }
    return value.get<std::string>();
}

inline bool require_bool(const nlohmann::json& value, const char* field) {
    if (!value.is_boolean()) {
        throw ConfigError(std::string(field) + ": expected a boolean");
    }
    return value.get<bool>();
}

} // namespace detail

/// Parses an experiment config document. The document is a flat JSON object;
/// the single swept parameter is expressed as `"sweep": {"<param>": [v, ...]}`.
/// Unknown keys are rejected by name, the swept parameter may not also be
/// given a fixed value, and all defaults are filled in so the returned spec
/// is fully self-describing.
inline ExperimentSpec parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config: expected a JSON object");
    }

    ExperimentSpec spec;
    bool have_elements = false;
    bool have_faults = false;
    bool have_sweep = false;
    std::vector<std::string> fixed_keys_seen;

    for (const auto& [key, value] : doc.items()) {
        if (key == "experiment_id") {
            spec.experiment_id = detail::require_string(value, "experiment_id");
        } else if (key == "n_elements") {
            spec.n_elements = detail::require_int(value, "n_elements");
            have_elements = true;
        } else if (key == "n_faults") {
            spec.n_faults = detail::require_int(value, "n_faults");
            have_faults = true;
        } else if (key == "fault_mode") {
            spec.fault_mode =
                detail::fault_mode_from_string(detail::require_string(value, "fault_mode"));
        } else if (key == "n_paths") {
            spec.n_paths = detail::require_int(value, "n_paths");
        } else if (key == "quantized") {
            spec.quantized = detail::require_bool(value, "quantized");
        } else if (key == "technique") {
            spec.technique =
                detail::technique_from_string(detail::require_string(value, "technique"));
        } else if (key == "sweep") {
            if (!value.is_object() || value.size() == 0) {
                throw ConfigError("sweep: expected an object {\"<param>\": [values...]}");
            }
            if (value.size() > 1) {
                throw ConfigError("sweep: exactly one sweep parameter allowed, got " +
                                  std::to_string(value.size()));
            }
            const auto item = value.begin();
            spec.sweep_param = detail::sweep_param_from_string(item.key());
            if (!item.value().is_array()) {
                throw ConfigError("sweep: values for '" + item.key() + "' must be an array");
            }
            spec.sweep_values.clear();
            for (const auto& v : item.value()) {
                spec.sweep_values.push_back(detail::require_number(v, "sweep values"));
            }
            have_sweep = true;
        } else if (key == "m_measurements") {
            spec.fixed.m_measurements = detail::require_int(value, "m_measurements");
            fixed_keys_seen.push_back(key);
        } else if (key == "snr_db") {
            spec.fixed.snr_db = detail::require_number(value, "snr_db");
            fixed_keys_seen.push_back(key);
        } else if (key == "aoa_offset_deg") {
            spec.fixed.aoa_offset_deg = detail::require_number(value, "aoa_offset_deg");
            fixed_keys_seen.push_back(key);
        } else if (key == "gain_error_var") {
            spec.fixed.gain_error_var = detail::require_number(value, "gain_error_var");
            fixed_keys_seen.push_back(key);
        } else if (key == "aoa_error_var") {
            spec.fixed.aoa_error_var = detail::require_number(value, "aoa_error_var");
            fixed_keys_seen.push_back(key);
        } else if (key == "trials") {
            spec.trials = detail::require_int(value, "trials");
        } else if (key == "master_seed") {
            if (!value.is_number_integer() || value.get<long long>() < 0) {
                throw ConfigError("master_seed: expected a non-negative integer");
            }
            spec.master_seed = value.get<std::uint64_t>();
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }

    if (!have_elements) throw ConfigError("missing required key 'n_elements'");
    if (!have_faults) throw ConfigError("missing required key 'n_faults'");
    if (!have_sweep) throw ConfigError("missing required key 'sweep'");

    const std::string swept = to_string(spec.sweep_param);
    for (const std::string& key : fixed_keys_seen) {
        if (key == swept) {
            throw ConfigError("sweep: parameter '" + key +
                              "' is swept and may not also be set to a fixed value");
        }
    }

    validate_spec(spec);
    return spec;
}

/// Serializes a spec back into a config document that parse_config accepts
/// (all values explicit, including defaults).
inline nlohmann::json spec_to_config_json(const ExperimentSpec& spec) {
    nlohmann::json doc;
    doc["experiment_id"] = spec.experiment_id;
    doc["n_elements"] = spec.n_elements;
    doc["n_faults"] = spec.n_faults;
    doc["fault_mode"] = to_string(spec.fault_mode);
    doc["n_paths"] = spec.n_paths;
    doc["quantized"] = spec.quantized;
    doc["technique"] = to_string(spec.technique);
    doc["sweep"] = nlohmann::json::object({{to_string(spec.sweep_param), spec.sweep_values}});
    if (spec.sweep_param != SweepParam::kMeasurements) {
        doc["m_measurements"] = spec.fixed.m_measurements;
    }
    if (spec.sweep_param != SweepParam::kSnrDb) doc["snr_db"] = spec.fixed.snr_db;
    if (spec.sweep_param != SweepParam::kAoaOffsetDeg) {
        doc["aoa_offset_deg"] = spec.fixed.aoa_offset_deg;
    }
    if (spec.sweep_param != SweepParam::kGainErrorVar) {
        doc["gain_error_var"] = spec.fixed.gain_error_var;
    }
    if (spec.sweep_param != SweepParam::kAoaErrorVar) {
        doc["aoa_error_var"] = spec.fixed.aoa_error_var;
    }
    doc["trials"] = spec.trials;
    doc["master_seed"] = spec.master_seed;
    return doc;
}

inline const char* kCsvHeader =
    "experiment_id,technique,n_elements,n_faults,fault_mode,n_paths,quantized,"
    "m_measurements,snr_db,aoa_offset_deg,gain_error_var,aoa_error_var,"
    "sweep_param,sweep_value,trials,p_success,std_error,seed,tool_version";

/// Emits result rows as CSV. Every row carries the complete parameter set in
/// effect at that sweep point, so any row plus the seed reproduces itself.
inline std::string emit_csv(const std::vector<ExperimentRun>& runs) {
    std::string out = kCsvHeader;
    out += "\n";
    for (const ExperimentRun& run : runs) {
        for (const SweepRow& row : run.result.rows) {
            const ResolvedParams params = resolve_params(run.spec, row.sweep_value);
            out += run.spec.experiment_id;
            out += ',';
            out += to_string(row.technique);
            out += ',';
            out += std::to_string(run.spec.n_elements);
            out += ',';
            out += std::to_string(run.spec.n_faults);
            out += ',';
            out += to_string(run.spec.fault_mode);
            out += ',';
            out += std::to_string(run.spec.n_paths);
            out += ',';
            out += run.spec.quantized ? "true" : "false";
            out += ',';
            out += std::to_string(params.m_measurements);
            out += ',';
            out += detail::format_double(params.snr_db);
            out += ',';
            out += detail::format_double(params.aoa_offset_deg);
            out += ',';
            out += detail::format_double(params.gain_error_var);
            out += ',';
            out += detail::format_double(params.aoa_error_var);
            out += ',';
            out += to_string(run.spec.sweep_param);
            out += ',';
            out += detail::format_double(row.sweep_value);
            out += ',';
            out += std::to_string(row.trials);
            out += ',';
            out += detail::format_fixed6(row.p_success);
            out += ',';
            out += detail::format_fixed6(row.std_error);
            out += ',';
            out += std::to_string(row.seed);
            out += ',';
            out += kToolVersion;
            out += '\n';
        }
    }
    return out;
}

/// Same rows as the CSV, as a JSON array of objects.
inline std::string emit_json(const std::vector<ExperimentRun>& runs) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ExperimentRun& run : runs) {
        for (const SweepRow& row : run.result.rows) {
            const ResolvedParams params = resolve_params(run.spec, row.sweep_value);
            nlohmann::json r;
            r["experiment_id"] = run.spec.experiment_id;
            r["technique"] = to_string(row.technique);
            r["n_elements"] = run.spec.n_elements;
            r["n_faults"] = run.spec.n_faults;
            r["fault_mode"] = to_string(run.spec.fault_mode);
            r["n_paths"] = run.spec.n_paths;
            r["quantized"] = run.spec.quantized;
            r["m_measurements"] = params.m_measurements;
            r["snr_db"] = params.snr_db;
            r["aoa_offset_deg"] = params.aoa_offset_deg;
            r["gain_error_var"] = params.gain_error_var;
            r["aoa_error_var"] = params.aoa_error_var;
            r["sweep_param"] = to_string(run.spec.sweep_param);
            r["sweep_value"] = row.sweep_value;
            r["trials"] = row.trials;
            r["p_success"] = row.p_success;
            r["std_error"] = row.std_error;
            r["seed"] = row.seed;
            r["tool_version"] = kToolVersion;
            rows.push_back(std::move(r));
        }
    }
    return rows.dump(2) + "\n";
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace arraydiag

#endif // ARRAYDIAG_CONFIG_IO_HPP
