// Command-line front end: generate trajectories, run experiments and suites,
// inspect trained NG-RC readouts.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "chaosbench/errors.hpp"
#include "chaosbench/harness.hpp"
#include "chaosbench/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace chaos;

int cmd_generate(const std::string& system, int steps, double dt, double noise,
                 std::uint64_t seed, double rtol, double atol, const std::string& method,
                 const std::string& output) {
    auto [spec, x0] = dynamics::make_benchmark(dynamics::system_from_string(system));
    dynamics::IntegratorOptions options;
    options.rtol = rtol;
    options.atol = atol;
    options.method = method == "rk4" ? dynamics::IntegratorOptions::Method::rk4
                                     : dynamics::IntegratorOptions::Method::rk23;
    std::optional<dynamics::NoiseConfig> noise_cfg;
    if (noise > 0.0) noise_cfg = dynamics::NoiseConfig{noise, seed};
    const Trajectory traj = dynamics::integrate(spec, x0, dt, steps, noise_cfg, options);
    if (output.empty()) {
        write_csv(traj, std::cout);
    } else {
        write_csv(traj, fs::path(output));
        std::cerr << "wrote " << traj.n_steps() << " rows to " << output << "\n";
    }
    return 0;
}

void print_report_line(const harness::ExperimentReport& report) {
    std::cout << report.config.experiment_id << ": nrmse=" << report.report.nrmse
              << " valid_time=" << report.report.valid_time_steps
              << " lobes=" << report.report.lobe_sign_changes
              << " bounded=" << (report.report.bounded ? "yes" : "no")
              << " train_s=" << report.report.train_wall_time_s << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolkitVersion) +
                 " - chaotic time-series forecasting benchmarks (NG-RC / RC / LSTM)"};
    app.require_subcommand(1);

    // generate
    std::string gen_system;
    int gen_steps = 5000;
    double gen_dt = 0.01, gen_noise = 0.0, gen_rtol = 1e-6, gen_atol = 1e-9;
    std::uint64_t gen_seed = 0;
    std::string gen_method = "rk23", gen_output;
    CLI::App* generate = app.add_subcommand("generate", "Integrate a benchmark system to CSV");
    generate->add_option("--system", gen_system, "lorenz, rossler, chen or qi")->required();
    generate->add_option("--steps", gen_steps, "number of samples");
    generate->add_option("--dt", gen_dt, "sampling step in seconds");
    generate->add_option("--noise", gen_noise, "process-noise magnitude (sigma)");
    generate->add_option("--seed", gen_seed, "noise seed");
    generate->add_option("--rtol", gen_rtol, "integrator relative tolerance");
    generate->add_option("--atol", gen_atol, "integrator absolute tolerance");
    generate->add_option("--method", gen_method, "rk23 (adaptive) or rk4 (fixed step)")
        ->check(CLI::IsMember({"rk23", "rk4"}));
    generate->add_option("--output,-o", gen_output, "output CSV path (stdout if omitted)");

    // run
    std::string run_config, run_preset, run_output_dir;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    CLI::App* run = app.add_subcommand("run", "Run a single experiment");
    run->add_option("config", run_config, "experiment config JSON file");
    run->add_option("--preset", run_preset, "built-in experiment id (see list-presets)");
    run->add_option("--output-dir", run_output_dir, "override the config's output directory");
    run->add_option("--seed", run_seed, "override the config's seed")
        ->each([&](const std::string&) { run_seed_set = true; });

    // suite
    std::string suite_file, suite_output_dir;
    bool suite_paper = false;
    std::uint64_t suite_seed = 0;
    bool suite_seed_set = false;
    CLI::App* suite = app.add_subcommand("suite", "Run a suite of experiments");
    suite->add_option("file", suite_file, "suite JSON file");
    suite->add_flag("--paper", suite_paper, "run the built-in full replication suite");
    suite->add_option("--output-dir", suite_output_dir, "suite output directory");
    suite->add_option("--seed", suite_seed, "override every experiment's seed")
        ->each([&](const std::string&) { suite_seed_set = true; });

    // inspect-weights
    std::string inspect_model, inspect_output;
    CLI::App* inspect =
        app.add_subcommand("inspect-weights", "Export an NG-RC model's labeled weight table");
    inspect->add_option("model", inspect_model, "NG-RC model.bin file")->required();
    inspect->add_option("--output,-o", inspect_output, "output CSV path (stdout if omitted)");

    CLI::App* list = app.add_subcommand("list-presets", "List built-in experiment ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*generate)
            return cmd_generate(gen_system, gen_steps, gen_dt, gen_noise, gen_seed, gen_rtol,
                                gen_atol, gen_method, gen_output);

        if (*run) {
            if (run_config.empty() == run_preset.empty())
                throw ConfigError("run needs exactly one of: a config file, or --preset");
            harness::ExperimentConfig config = run_preset.empty()
                                                   ? harness::load_experiment_config(run_config)
                                                   : harness::preset(run_preset);
            if (run_seed_set) config.seed = run_seed;
            if (!run_output_dir.empty()) config.output_dir = run_output_dir;
            const harness::ExperimentReport report = harness::run_experiment(config);
            print_report_line(report);
            return 0;
        }

        if (*suite) {
            if (suite_file.empty() == !suite_paper)
                throw ConfigError("suite needs exactly one of: a suite file, or --paper");
            harness::Suite s;
            if (suite_paper) {
                s.experiments = harness::paper_suite();
                s.output_dir = suite_output_dir.empty() ? "paper_suite_out" : suite_output_dir;
            } else {
                s = harness::load_suite(suite_file);
                if (!suite_output_dir.empty()) s.output_dir = suite_output_dir;
            }
            if (suite_seed_set) s.seed_override = suite_seed;
            const auto outcomes = harness::run_suite(s);
            int failures = 0;
            for (const auto& outcome : outcomes) {
                if (outcome.ok) {
                    print_report_line(*outcome.report);
                } else {
                    ++failures;
                    std::cout << outcome.experiment_id << ": FAILED (" << outcome.error << ")\n";
                }
            }
            std::cout << outcomes.size() - failures << "/" << outcomes.size()
                      << " experiments succeeded; summary in " << s.output_dir.string() << "\n";
            return failures == 0 ? 0 : 1;
        }

        if (*inspect) {
            const ngrc::NgrcModel model = ngrc::NgrcModel::load(inspect_model);
            if (inspect_output.empty()) {
                const ngrc::WeightTable table = model.export_weights();
                std::cout << "feature";
                for (Eigen::Index j = 0; j < table.weights.cols(); ++j) std::cout << ",dim_" << j;
                std::cout << "\n";
                for (Eigen::Index i = 0; i < table.weights.rows(); ++i) {
                    std::cout << table.feature[static_cast<std::size_t>(i)];
                    for (Eigen::Index j = 0; j < table.weights.cols(); ++j)
                        std::cout << ',' << format_double(table.weights(i, j));
                    std::cout << "\n";
                }
            } else {
                model.write_weights_csv(inspect_output);
            }
            return 0;
        }

        if (*list) {
            for (const std::string& id : harness::preset_ids()) std::cout << id << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
