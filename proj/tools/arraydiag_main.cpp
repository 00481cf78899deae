// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors
//
// arraydiag CLI: run experiment sweeps from a config file or built-in
// preset, emit CSV/JSON results, validate configs.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arraydiag/config_io.hpp"
#include "arraydiag/experiment.hpp"
#include "arraydiag/version.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string preset_name;
    std::string output_path;
    std::string format = "csv";
    std::uint64_t seed = 1;
    int trials_override = 0;
    int workers = 0;
};

std::string render(const std::vector<arraydiag::ExperimentRun>& runs, const std::string& format) {
    return format == "json" ? arraydiag::emit_json(runs) : arraydiag::emit_csv(runs);
}

void apply_overrides(arraydiag::ExperimentSpec& spec, const CliOptions& opt) {
    spec.master_seed = opt.seed;
    if (opt.trials_override > 0) spec.trials = opt.trials_override;
}

int command_run(const CliOptions& opt) {
    arraydiag::ExperimentSpec spec = arraydiag::parse_config(arraydiag::read_text_file(opt.config_path));
    apply_overrides(spec, opt);
    arraydiag::validate_spec(spec);
    std::vector<arraydiag::ExperimentRun> runs;
    runs.push_back({spec, arraydiag::run_sweep(spec, opt.workers, &std::cerr)});
    arraydiag::write_text_file(opt.output_path, render(runs, opt.format));
    std::cerr << "wrote " << opt.output_path << "\n";
    return 0;
}

int command_preset(const CliOptions& opt) {
    std::vector<arraydiag::ExperimentRun> runs;
    for (arraydiag::ExperimentSpec spec : arraydiag::preset(opt.preset_name)) {
        apply_overrides(spec, opt);
        runs.push_back({spec, arraydiag::run_sweep(spec, opt.workers, &std::cerr)});
    }
    arraydiag::write_text_file(opt.output_path, render(runs, opt.format));
    std::cerr << "wrote " << opt.output_path << "\n";
    return 0;
}

int command_validate(const CliOptions& opt) {
    if (!opt.config_path.empty()) {
        const arraydiag::ExperimentSpec spec =
            arraydiag::parse_config(arraydiag::read_text_file(opt.config_path));
        std::cout << "OK: " << opt.config_path << " (experiment_id=" << spec.experiment_id
                  << ", " << spec.sweep_values.size() << " sweep points)\n";
    } else {
        const auto specs = arraydiag::preset(opt.preset_name);
        for (const auto& spec : specs) arraydiag::validate_spec(spec);
        std::cout << "OK: preset " << opt.preset_name << " (" << specs.size()
                  << " sub-experiments)\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Antenna-array fault diagnosis Monte Carlo simulator"};
    app.set_version_flag("--version", arraydiag::kToolVersion);
    app.require_subcommand(1);

    CliOptions opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.output_path, "Output file path")->required();
        cmd->add_option("--format", opt.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        cmd->add_option("--seed", opt.seed, "Master seed")->required();
        cmd->add_option("--trials", opt.trials_override, "Override trials per sweep point")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--workers", opt.workers,
                        "Worker threads (0 = hardware concurrency)")
            ->check(CLI::NonNegativeNumber);
    };

    CLI::App* run = app.add_subcommand("run", "Run a sweep described by a config file");
    run->add_option("--config", opt.config_path, "Experiment config (JSON)")->required();
    add_common(run);

    CLI::App* preset = app.add_subcommand("preset", "Run a built-in experiment preset");
    preset->add_option("--name", opt.preset_name, "Preset name")
        ->check(CLI::IsMember(arraydiag::preset_names()))
        ->required();
    add_common(preset);

    CLI::App* validate = app.add_subcommand("validate", "Validate a config or preset");
    auto* vconf = validate->add_option("--config", opt.config_path, "Experiment config (JSON)");
    auto* vname = validate->add_option("--name", opt.preset_name, "Preset name")
                      ->check(CLI::IsMember(arraydiag::preset_names()));
    vconf->excludes(vname);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return command_run(opt);
        if (preset->parsed()) return command_preset(opt);
        if (validate->parsed()) {
            if (opt.config_path.empty() && opt.preset_name.empty()) {
                std::cerr << "validate: provide --config or --name\n";
                return 1;
            }
            return command_validate(opt);
        }
    } catch (const arraydiag::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
