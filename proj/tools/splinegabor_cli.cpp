// Experiment driver: approximates scattering fields in B-spline Gabor frames
// and writes the error/coefficient CSV artifacts.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splinegabor/experiment.hpp"

namespace {

std::string resolve_output_dir(const std::string& from_flags) {
    if (const char* env = std::getenv("SPLINEGABOR_OUT"); env && *env) return env;
    return from_flags;
}

void print_outcomes(const splinegabor::RunArtifacts& artifacts) {
    for (const auto& outcome : artifacts.outcomes) {
        std::cout << splinegabor::to_string(outcome.method) << "  budget " << outcome.budget
                  << "  avg " << outcome.report.average << "  max " << outcome.report.max << '\n';
    }
    for (const auto& file : artifacts.files) std::cout << "wrote " << file << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"B-spline Gabor frame approximation experiments"};
    app.require_subcommand(1);

    splinegabor::ExperimentConfig cfg;
    std::string target_name = "cylinder";
    std::string method_name = "dual2";
    bool no_extend = false;

    CLI::App* run = app.add_subcommand("run", "run a single experiment configuration");
    run->set_config("--config", "", "configuration file (key = value)");
    run->add_option("--target", target_name, "cylinder or point-source")
        ->check(CLI::IsMember({"cylinder", "point-source"}));
    run->add_option("--k", cfg.wavenumber, "wavenumber of the target field");
    run->add_option("--method", method_name,
                    "dual1, dual2, canonical, least-squares, omp or omp-functional");
    run->add_option("--blocksize", cfg.blocksize, "atoms selected per OMP iteration");
    run->add_option("--budgets", cfg.budgets, "coefficient budgets, e.g. --budgets 60 120 240");
    run->add_option("--out", cfg.output_dir, "output directory (SPLINEGABOR_OUT overrides)");
    run->add_option("--order", cfg.window_order, "B-spline window order");
    run->add_option("--shift-step", cfg.shift_step, "lattice shift step a");
    run->add_option("--modulation-step", cfg.modulation_step, "lattice modulation step b");
    run->add_option("--length", cfg.interval_length, "interest interval length L");
    run->add_option("--samples", cfg.sample_count, "sample count on the interest interval");
    run->add_option("--modulations", cfg.modulation_limit,
                    "symmetric modulation limit M; -1 selects one full sampled period");
    run->add_option("--tolerance", cfg.omp_tolerance, "relative residual tolerance for OMP");
    run->add_option("--seed", cfg.seed, "seed for randomized property checks");
    run->add_flag("--no-extend", no_extend, "skip the interval extension (zero-pad outside [0, L])");

    std::string table_out = "out";
    CLI::App* table = app.add_subcommand("table1", "run the full comparison grid");
    table->add_option("--out", table_out, "output directory (SPLINEGABOR_OUT overrides)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto target = splinegabor::parse_target(target_name);
            const auto method = splinegabor::parse_method(method_name);
            if (!target) {
                std::cerr << "unknown target '" << target_name << "'\n";
                return 1;
            }
            if (!method) {
                std::cerr << "unknown method '" << method_name << "'\n";
                return 1;
            }
            cfg.target = *target;
            cfg.method = *method;
            cfg.extend_interval = !no_extend;
            cfg.output_dir = resolve_output_dir(cfg.output_dir);

            const auto problems = cfg.validate();
            if (!problems.empty()) {
                std::cerr << splinegabor::ConfigurationError::join(problems) << '\n';
                return 1;
            }
            print_outcomes(splinegabor::run_experiment(cfg));
        } else if (table->parsed()) {
            const std::string out = resolve_output_dir(table_out);
            const auto configs = splinegabor::table1_configs(out);
            const std::string csv = splinegabor::emit_table1(configs, out);
            std::cout << csv;
        }
    } catch (const splinegabor::ConfigurationError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
