// qdec_main.cpp - Command-line front end: simulate, verify, spectrum.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qdec/config.hpp"
#include "qdec/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qdec: exact reduced dynamics of a driven qubit in a finite environment"};
    app.require_subcommand(1);

    double tolerance_scale = 1.0;
    std::uint64_t seed = 20260810ull;
    app.add_option("--tolerance-scale", tolerance_scale,
                   "Scale factor applied to all acceptance tolerances")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Seed for randomized verification instances");

    std::string simulate_config, verify_config, spectrum_config, suite_name = "all";
    CLI::App* simulate = app.add_subcommand("simulate", "Run a simulation and write time series");
    simulate->add_option("config", simulate_config, "Run configuration file")->required();
    simulate->fallthrough();
    CLI::App* verify = app.add_subcommand("verify", "Run verification suites and report residuals");
    verify->add_option("config", verify_config, "Run configuration file")->required();
    verify->add_option("--suite", suite_name, "riccati | symmetry | kraus | frame | all");
    verify->fallthrough();
    CLI::App* spectrum = app.add_subcommand("spectrum", "Emit the per-eigenvalue spectrum table");
    spectrum->add_option("config", spectrum_config, "Run configuration file")->required();
    spectrum->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qdec::cli::kExitConfig;
    }

    qdec::cli::RunOptions options;
    options.tolerance_scale = tolerance_scale;
    options.seed = seed;
    if (const char* dir = std::getenv("QDEC_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
        options.output_dir = std::string(dir);
    }

    try {
        if (simulate->parsed()) {
            const auto config = qdec::cli::parse_config_file(simulate_config);
            return qdec::cli::run_simulate(config, options, std::cerr);
        }
        if (verify->parsed()) {
            const auto suite = qdec::cli::suite_from_name(suite_name);
            if (!suite) {
                std::cerr << "error: unknown suite '" << suite_name << "'\n";
                return qdec::cli::kExitConfig;
            }
            const auto config = qdec::cli::parse_config_file(verify_config);
            return qdec::cli::run_verify(config, *suite, options, std::cout, std::cerr);
        }
        const auto config = qdec::cli::parse_config_file(spectrum_config);
        return qdec::cli::run_spectrum(config, options, std::cerr);
    } catch (const qdec::cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qdec::cli::kExitConfig;
    }
}
