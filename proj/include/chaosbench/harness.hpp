#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chaosbench/dynamics.hpp"
#include "chaosbench/esn.hpp"
#include "chaosbench/lstm.hpp"
#include "chaosbench/metrics.hpp"
#include "chaosbench/ngrc.hpp"
#include "chaosbench/numerics.hpp"

namespace chaos::harness {

enum class Method { ngrc, rc, lstm };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

/// Contiguous row budget: warm-up rows come first, then training rows, then
/// the test horizon. The training series handed to a model is always
/// rows [0, warmup + train); test rows are never visible to training.
struct Split {
    int warmup = 0;
    int train = 0;
    int test = 0;
};

/// Declarative description of one experiment run. Data generation uses the
/// adaptive integrator at (data_rtol, data_atol); the defaults reproduce the
/// reference pipeline the published protocols were generated with.
struct ExperimentConfig {
    std::string experiment_id;
    dynamics::SystemId system = dynamics::SystemId::lorenz;
    Method method = Method::ngrc;
    int total_points = 5000;
    Split split;
    double dt = 0.01;
    double noise_magnitude = 0.0;
    std::uint64_t seed = 1;
    double data_rtol = 1e-3;
    double data_atol = 1e-6;
    esn::EsnConfig esn;
    ngrc::NgrcConfig ngrc;
    lstm::LstmConfig lstm;
    std::filesystem::path output_dir = "out";
};

void validate(const ExperimentConfig& config);

/// JSON round trip for config files. Unknown keys anywhere are an error.
ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json experiment_to_json(const ExperimentConfig& config);

/// Named presets for every published experiment (task1-<system>-<method>,
/// task1small-<system>-<ngrc|rc>, task1long-chen-ngrc,
/// task2-<system>-<ngrc|rc>-noise<sigma>).
std::vector<std::string> preset_ids();
ExperimentConfig preset(const std::string& experiment_id);

/// All presets in one list: the full replication suite.
std::vector<ExperimentConfig> paper_suite();

/// The generated dataset for the experiment (noisy when noise_magnitude > 0).
Trajectory generate_data(const ExperimentConfig& config);
/// Deterministic twin of generate_data (identical settings, no noise); the
/// evaluation reference for noisy experiments.
Trajectory generate_reference(const ExperimentConfig& config);

/// Everything execute() produces before artifact writing. readout is a
/// flattened copy of the trained weights (plus scaler statistics when the
/// method scales), used by the leakage tests as a training fingerprint.
struct ExecutionResult {
    metrics::ForecastReport report;
    Trajectory forecast;      // original units, truncated on divergence
    Trajectory truth_window;  // reference test rows
    bool diverged = false;
    std::size_t divergence_step = 0;
    Eigen::Index regression_rows = 0;
    Eigen::VectorXd readout;
    std::optional<numerics::MinMaxScaler> scaler;
    std::shared_ptr<esn::EsnModel> esn_model;
    std::shared_ptr<ngrc::NgrcModel> ngrc_model;
    std::shared_ptr<lstm::LstmModel> lstm_model;
};

/// Trains on rows [0, warmup+train) of `data`, forecasts the test horizon,
/// and scores against the test rows of `reference`. Pure apart from clocks.
ExecutionResult execute(const ExperimentConfig& config, const Trajectory& data,
                        const Trajectory& reference);

struct ExperimentReport {
    ExperimentConfig config;
    metrics::ForecastReport report;
    std::vector<std::string> artifacts;  // file names inside config.output_dir
    std::string toolkit_version;
};

nlohmann::json report_to_json(const ExperimentReport& report);

/// Generates data, runs execute(), and writes all artifacts
/// (data.csv, truth_test.csv, prediction.csv, model.bin, report.json, plus
/// ngrc_weights.csv or loss_curve.csv) into config.output_dir.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct SuiteOutcome {
    std::string experiment_id;
    bool ok = false;
    std::string error;
    std::optional<ExperimentReport> report;
};

struct Suite {
    std::vector<ExperimentConfig> experiments;
    std::filesystem::path output_dir = "out";
    std::optional<std::uint64_t> seed_override;
};

Suite load_suite(const std::filesystem::path& path);

/// Runs every experiment (each into output_dir/<experiment_id>), isolating
/// failures, and writes summary.csv plus suite_report.json.
std::vector<SuiteOutcome> run_suite(const Suite& suite);

}  // namespace chaos::harness
