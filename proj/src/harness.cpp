#include "chaosbench/harness.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "chaosbench/errors.hpp"
#include "chaosbench/version.hpp"

namespace chaos::harness {

using nlohmann::json;

std::string to_string(Method method) {
    switch (method) {
        case Method::ngrc: return "ngrc";
        case Method::rc: return "rc";
        case Method::lstm: return "lstm";
    }
    throw InvalidInputError("unknown method");
}

Method method_from_string(const std::string& name) {
    if (name == "ngrc") return Method::ngrc;
    if (name == "rc") return Method::rc;
    if (name == "lstm") return Method::lstm;
    throw ConfigError("unknown method '" + name + "' (expected ngrc, rc or lstm)");
}

void validate(const ExperimentConfig& config) {
    if (config.experiment_id.empty()) throw ConfigError("experiment_id must not be empty");
    if (config.total_points < 1) throw ConfigError("total_points must be positive");
    if (config.split.warmup < 0 || config.split.train < 1 || config.split.test < 1)
        throw ConfigError("split must have non-negative warmup and positive train/test");
    if (config.split.warmup + config.split.train + config.split.test > config.total_points)
        throw ConfigError("warmup + train + test exceeds total_points");
    if (!(config.dt > 0.0)) throw ConfigError("dt must be positive");
    if (config.noise_magnitude < 0.0) throw ConfigError("noise_magnitude must be non-negative");
    if (!(config.data_rtol > 0.0) || !(config.data_atol > 0.0))
        throw ConfigError("data_rtol and data_atol must be positive");
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : j.items())
        if (!allowed.contains(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for key '" + key + "'");
    }
}

template <typename T>
T get_required(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing required key '" + key + "' in " + where);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for key '" + key + "' in " + where);
    }
}

void apply_method_overrides(ExperimentConfig& config, const json& overrides) {
    switch (config.method) {
        case Method::rc:
            reject_unknown_keys(overrides,
                                {"n_units", "leak_rate", "spectral_radius", "connectivity",
                                 "regularization", "input_scaling", "bias_scaling"},
                                "method_overrides (rc)");
            config.esn.n_units = get_or(overrides, "n_units", config.esn.n_units);
            config.esn.leak_rate = get_or(overrides, "leak_rate", config.esn.leak_rate);
            config.esn.spectral_radius =
                get_or(overrides, "spectral_radius", config.esn.spectral_radius);
            config.esn.connectivity = get_or(overrides, "connectivity", config.esn.connectivity);
            config.esn.regularization =
                get_or(overrides, "regularization", config.esn.regularization);
            config.esn.input_scaling = get_or(overrides, "input_scaling", config.esn.input_scaling);
            config.esn.bias_scaling = get_or(overrides, "bias_scaling", config.esn.bias_scaling);
            break;
        case Method::ngrc:
            reject_unknown_keys(overrides,
                                {"k", "s", "p", "regularization", "constant_feature",
                                 "predict_increment", "use_minmax_scaling"},
                                "method_overrides (ngrc)");
            config.ngrc.delays = get_or(overrides, "k", config.ngrc.delays);
            config.ngrc.stride = get_or(overrides, "s", config.ngrc.stride);
            config.ngrc.order = get_or(overrides, "p", config.ngrc.order);
            config.ngrc.regularization =
                get_or(overrides, "regularization", config.ngrc.regularization);
            config.ngrc.constant_feature =
                get_or(overrides, "constant_feature", config.ngrc.constant_feature);
            config.ngrc.predict_increment =
                get_or(overrides, "predict_increment", config.ngrc.predict_increment);
            config.ngrc.use_minmax_scaling =
                get_or(overrides, "use_minmax_scaling", config.ngrc.use_minmax_scaling);
            break;
        case Method::lstm:
            reject_unknown_keys(overrides,
                                {"hidden_size", "epochs", "window_length", "learning_rate",
                                 "batch_size", "grad_clip_norm"},
                                "method_overrides (lstm)");
            config.lstm.hidden_size = get_or(overrides, "hidden_size", config.lstm.hidden_size);
            config.lstm.epochs = get_or(overrides, "epochs", config.lstm.epochs);
            config.lstm.window_length =
                get_or(overrides, "window_length", config.lstm.window_length);
            config.lstm.learning_rate =
                get_or(overrides, "learning_rate", config.lstm.learning_rate);
            config.lstm.batch_size = get_or(overrides, "batch_size", config.lstm.batch_size);
            config.lstm.grad_clip_norm =
                get_or(overrides, "grad_clip_norm", config.lstm.grad_clip_norm);
            break;
    }
}

json method_params_json(const ExperimentConfig& config) {
    switch (config.method) {
        case Method::rc:
            return {{"n_units", config.esn.n_units},
                    {"leak_rate", config.esn.leak_rate},
                    {"spectral_radius", config.esn.spectral_radius},
                    {"connectivity", config.esn.connectivity},
                    {"regularization", config.esn.regularization},
                    {"input_scaling", config.esn.input_scaling},
                    {"bias_scaling", config.esn.bias_scaling},
                    {"seed", config.seed}};
        case Method::ngrc:
            return {{"k", config.ngrc.delays},
                    {"s", config.ngrc.stride},
                    {"p", config.ngrc.order},
                    {"regularization", config.ngrc.regularization},
                    {"constant_feature", config.ngrc.constant_feature},
                    {"predict_increment", config.ngrc.predict_increment},
                    {"use_minmax_scaling", config.ngrc.use_minmax_scaling}};
        case Method::lstm:
            return {{"hidden_size", config.lstm.hidden_size},
                    {"epochs", config.lstm.epochs},
                    {"window_length", config.lstm.window_length},
                    {"learning_rate", config.lstm.learning_rate},
                    {"batch_size", config.lstm.batch_size},
                    {"grad_clip_norm", config.lstm.grad_clip_norm},
                    {"seed", config.seed}};
    }
    throw InvalidInputError("unknown method");
}

}  // namespace

ExperimentConfig experiment_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"experiment_id", "system", "method", "total_points", "split", "dt",
                         "noise_magnitude", "seed", "data_rtol", "data_atol", "method_overrides",
                         "output_dir"},
                        "experiment config");
    ExperimentConfig config;
    config.experiment_id = get_required<std::string>(j, "experiment_id", "experiment config");
    config.system =
        dynamics::system_from_string(get_required<std::string>(j, "system", "experiment config"));
    config.method = method_from_string(get_required<std::string>(j, "method", "experiment config"));
    config.total_points = get_required<int>(j, "total_points", "experiment config");
    const json split = get_required<json>(j, "split", "experiment config");
    reject_unknown_keys(split, {"warmup", "train", "test"}, "split");
    config.split.warmup = get_required<int>(split, "warmup", "split");
    config.split.train = get_required<int>(split, "train", "split");
    config.split.test = get_required<int>(split, "test", "split");
    config.dt = get_or(j, "dt", config.dt);
    config.noise_magnitude = get_or(j, "noise_magnitude", config.noise_magnitude);
    config.seed = get_or(j, "seed", config.seed);
    config.data_rtol = get_or(j, "data_rtol", config.data_rtol);
    config.data_atol = get_or(j, "data_atol", config.data_atol);
    if (j.contains("output_dir"))
        config.output_dir = std::filesystem::path(j.at("output_dir").get<std::string>());
    if (j.contains("method_overrides")) apply_method_overrides(config, j.at("method_overrides"));
    validate(config);
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("failed to parse " + path.string() + ": " + e.what());
    }
    return experiment_from_json(j);
}

json experiment_to_json(const ExperimentConfig& config) {
    json j;
    j["experiment_id"] = config.experiment_id;
    j["system"] = dynamics::to_string(config.system);
    j["method"] = to_string(config.method);
    j["total_points"] = config.total_points;
    j["split"] = {{"warmup", config.split.warmup},
                  {"train", config.split.train},
                  {"test", config.split.test}};
    j["dt"] = config.dt;
    j["noise_magnitude"] = config.noise_magnitude;
    j["seed"] = config.seed;
    j["data_rtol"] = config.data_rtol;
    j["data_atol"] = config.data_atol;
    j["output_dir"] = config.output_dir.string();
    return j;
}

namespace {

ExperimentConfig base_preset(const std::string& id, dynamics::SystemId system, Method method) {
    ExperimentConfig config;
    config.experiment_id = id;
    config.system = system;
    config.method = method;
    config.total_points = 5000;
    config.dt = 0.01;
    config.seed = 2;
    // Published tables leave the reservoir input scaling open; 0.5 gives the
    // most reliable closed-loop attractor reproduction at the 1000-unit desk
    // scale across seeds.
    config.esn.input_scaling = 0.5;
    switch (method) {
        case Method::ngrc:
            config.split = {config.ngrc.warmup_steps(), 4000 - config.ngrc.warmup_steps(), 1000};
            break;
        case Method::rc:
            config.split = {250, 3750, 1000};
            break;
        case Method::lstm:
            config.split = {0, 4000, 1000};
            break;
    }
    return config;
}

const std::vector<std::pair<std::string, dynamics::SystemId>>& systems() {
    static const std::vector<std::pair<std::string, dynamics::SystemId>> all = {
        {"lorenz", dynamics::SystemId::lorenz},
        {"rossler", dynamics::SystemId::rossler},
        {"chen", dynamics::SystemId::chen},
        {"qi", dynamics::SystemId::qi},
    };
    return all;
}

// Small-data splits per system: {warmup, train} from the published protocol.
const std::vector<std::pair<std::string, Split>>& small_splits() {
    static const std::vector<std::pair<std::string, Split>> all = {
        {"lorenz", {250, 500, 4250}},
        {"rossler", {250, 750, 4000}},
        {"chen", {100, 150, 4750}},
        {"qi", {100, 150, 4750}},
    };
    return all;
}

const std::vector<std::string>& noise_levels() {
    static const std::vector<std::string> levels = {"0.1", "1.0", "5.0", "10.0"};
    return levels;
}

}  // namespace

std::vector<std::string> preset_ids() {
    std::vector<std::string> ids;
    for (const auto& [name, sys] : systems())
        for (const std::string method : {"ngrc", "rc", "lstm"})
            ids.push_back("task1-" + name + "-" + method);
    for (const auto& [name, split] : small_splits())
        for (const std::string method : {"ngrc", "rc"})
            ids.push_back("task1small-" + name + "-" + method);
    ids.push_back("task1long-chen-ngrc");
    for (const auto& [name, sys] : systems())
        for (const std::string method : {"ngrc", "rc"})
            for (const std::string& level : noise_levels())
                ids.push_back("task2-" + name + "-" + method + "-noise" + level);
    return ids;
}

ExperimentConfig preset(const std::string& experiment_id) {
    for (const auto& [name, sys] : systems()) {
        for (const std::string method_name : {"ngrc", "rc", "lstm"}) {
            if (experiment_id == "task1-" + name + "-" + method_name)
                return base_preset(experiment_id, sys, method_from_string(method_name));
        }
        for (const std::string method_name : {"ngrc", "rc"}) {
            for (const auto& [small_name, split] : small_splits()) {
                if (name != small_name) continue;
                if (experiment_id == "task1small-" + name + "-" + method_name) {
                    ExperimentConfig config =
                        base_preset(experiment_id, sys, method_from_string(method_name));
                    config.split = split;
                    return config;
                }
            }
            for (const std::string& level : noise_levels()) {
                if (experiment_id == "task2-" + name + "-" + method_name + "-noise" + level) {
                    ExperimentConfig config =
                        base_preset(experiment_id, sys, method_from_string(method_name));
                    config.split = {250, 3750, 1000};
                    config.noise_magnitude = std::stod(level);
                    return config;
                }
            }
        }
    }
    if (experiment_id == "task1long-chen-ngrc") {
        ExperimentConfig config =
            base_preset(experiment_id, dynamics::SystemId::chen, Method::ngrc);
        config.total_points = 10000;
        config.split = {2000, 3000, 5000};
        return config;
    }
    throw ConfigError("unknown preset '" + experiment_id + "'");
}

std::vector<ExperimentConfig> paper_suite() {
    std::vector<ExperimentConfig> experiments;
    for (const std::string& id : preset_ids()) experiments.push_back(preset(id));
    return experiments;
}

Trajectory generate_data(const ExperimentConfig& config) {
    validate(config);
    auto [spec, x0] = dynamics::make_benchmark(config.system);
    dynamics::IntegratorOptions options;
    options.rtol = config.data_rtol;
    options.atol = config.data_atol;
    std::optional<dynamics::NoiseConfig> noise;
    if (config.noise_magnitude > 0.0)
        noise = dynamics::NoiseConfig{config.noise_magnitude, config.seed};
    return dynamics::integrate(spec, x0, config.dt, config.total_points, noise, options);
}

Trajectory generate_reference(const ExperimentConfig& config) {
    ExperimentConfig clean = config;
    clean.noise_magnitude = 0.0;
    return generate_data(clean);
}

namespace {

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
    return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::VectorXd concat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd out(a.size() + b.size());
    out << a, b;
    return out;
}

}  // namespace

ExecutionResult execute(const ExperimentConfig& config, const Trajectory& data,
                        const Trajectory& reference) {
    validate(config);
    const int train_rows = config.split.warmup + config.split.train;
    if (data.n_steps() < train_rows + config.split.test)
        throw InvalidInputError("execute: data shorter than the configured split");

    const Trajectory train_series = data.slice(0, train_rows);
    const Trajectory truth = reference.slice(train_rows, config.split.test);

    ExecutionResult result;
    result.truth_window = truth;

    ForecastResult forecast;
    switch (config.method) {
        case Method::rc: {
            const numerics::MinMaxScaler scaler = numerics::fit_minmax(train_series);
            Trajectory scaled = train_series;
            scaled.data = numerics::transform(scaler, train_series.data);
            esn::EsnConfig esn_cfg = config.esn;
            esn_cfg.seed = config.seed;
            auto model = std::make_shared<esn::EsnModel>(
                esn::init_reservoir(esn_cfg, static_cast<int>(data.dim())));
            model->train_readout(scaled, config.split.warmup);
            forecast = model->forecast(config.split.test);
            forecast.trajectory.data =
                numerics::inverse_transform(scaler, forecast.trajectory.data);
            result.report.train_wall_time_s = model->train_seconds();
            result.regression_rows = train_rows - 1 - config.split.warmup;
            result.readout = concat(flatten(model->w_out()),
                                    concat(scaler.per_dim_min, scaler.per_dim_max));
            result.scaler = scaler;
            result.esn_model = std::move(model);
            break;
        }
        case Method::ngrc: {
            auto model = std::make_shared<ngrc::NgrcModel>(
                ngrc::train(train_series, config.ngrc, config.split.warmup));
            forecast = model->forecast(train_series.data, config.split.test);
            result.report.train_wall_time_s = model->train_seconds();
            result.regression_rows = train_rows - 1 - config.split.warmup;
            result.readout = flatten(model->w_out());
            result.scaler = model->scaler();
            result.ngrc_model = std::move(model);
            break;
        }
        case Method::lstm: {
            const numerics::MinMaxScaler scaler = numerics::fit_minmax(train_series);
            Trajectory scaled = train_series;
            scaled.data = numerics::transform(scaler, train_series.data);
            lstm::LstmConfig lstm_cfg = config.lstm;
            lstm_cfg.seed = config.seed;
            lstm_cfg.input_dim = static_cast<int>(data.dim());
            auto model = std::make_shared<lstm::LstmModel>(lstm::train(scaled, lstm_cfg));
            forecast = lstm::forecast(
                *model, scaled.data.bottomRows(lstm_cfg.window_length), config.split.test);
            forecast.trajectory.data =
                numerics::inverse_transform(scaler, forecast.trajectory.data);
            result.report.train_wall_time_s = model->train_seconds;
            result.regression_rows = train_rows - lstm_cfg.window_length;
            Eigen::VectorXd params_flat(0);
            {
                // Fingerprint every trained tensor for the leakage checks.
                const lstm::LstmParams& p = model->params;
                for (const Eigen::MatrixXd* m :
                     {&p.w_f, &p.w_i, &p.w_o, &p.w_c, &p.u_f, &p.u_i, &p.u_o, &p.u_c, &p.w_head})
                    params_flat = concat(params_flat, flatten(*m));
                for (const Eigen::VectorXd* v : {&p.b_f, &p.b_i, &p.b_o, &p.b_c, &p.b_head})
                    params_flat = concat(params_flat, *v);
            }
            result.readout = concat(params_flat, concat(scaler.per_dim_min, scaler.per_dim_max));
            result.scaler = scaler;
            result.lstm_model = std::move(model);
            break;
        }
    }

    result.forecast = forecast.trajectory;
    result.diverged = forecast.diverged;
    result.divergence_step = forecast.divergence_step;

    // Score over the produced prefix (the whole horizon unless truncated).
    const Eigen::Index got = result.forecast.n_steps();
    metrics::ForecastReport& report = result.report;
    report.bounded = !forecast.diverged;
    if (got > 0) {
        const Trajectory truth_prefix = truth.slice(0, got);
        report.rmse_per_dim = metrics::rmse(result.forecast, truth_prefix);
        report.nrmse = metrics::nrmse(result.forecast, truth_prefix);
        report.valid_time_steps = metrics::valid_time(result.forecast, truth_prefix);
        report.lobe_sign_changes =
            metrics::attractor_box_and_lobes(result.forecast).lobe_sign_changes;
    } else {
        report.rmse_per_dim = Eigen::VectorXd::Zero(truth.dim());
        report.nrmse = std::numeric_limits<double>::quiet_NaN();
        report.valid_time_steps = 0;
        report.lobe_sign_changes = 0;
    }
    report.valid_time_seconds = report.valid_time_steps * config.dt;
    return result;
}

json report_to_json(const ExperimentReport& report) {
    json j;
    j["experiment"] = experiment_to_json(report.config);
    j["method_params"] = method_params_json(report.config);
    json metrics_json;
    metrics_json["rmse"] = std::vector<double>(
        report.report.rmse_per_dim.data(),
        report.report.rmse_per_dim.data() + report.report.rmse_per_dim.size());
    metrics_json["nrmse"] = report.report.nrmse;
    metrics_json["valid_time_steps"] = report.report.valid_time_steps;
    metrics_json["valid_time_seconds"] = report.report.valid_time_seconds;
    metrics_json["lobe_sign_changes"] = report.report.lobe_sign_changes;
    metrics_json["bounded"] = report.report.bounded;
    metrics_json["train_wall_time_s"] = report.report.train_wall_time_s;
    j["metrics"] = metrics_json;
    j["artifacts"] = report.artifacts;
    j["toolkit_version"] = report.toolkit_version;
    return j;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    validate(config);
    const Trajectory data = generate_data(config);
    const Trajectory reference =
        config.noise_magnitude > 0.0 ? generate_reference(config) : data;
    ExecutionResult result = execute(config, data, reference);

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.output_dir.string());

    ExperimentReport report;
    report.config = config;
    report.report = result.report;
    report.toolkit_version = kToolkitVersion;

    auto emit = [&](const std::string& name) { report.artifacts.push_back(name); };

    write_csv(data, config.output_dir / "data.csv");
    emit("data.csv");
    write_csv(result.truth_window, config.output_dir / "truth_test.csv");
    emit("truth_test.csv");
    write_csv(result.forecast, config.output_dir / "prediction.csv");
    emit("prediction.csv");

    switch (config.method) {
        case Method::rc:
            result.esn_model->save(config.output_dir / "model.bin");
            emit("model.bin");
            break;
        case Method::ngrc:
            result.ngrc_model->save(config.output_dir / "model.bin");
            emit("model.bin");
            result.ngrc_model->write_weights_csv(config.output_dir / "ngrc_weights.csv");
            emit("ngrc_weights.csv");
            break;
        case Method::lstm:
            result.lstm_model->save(config.output_dir / "model.bin");
            emit("model.bin");
            result.lstm_model->write_loss_csv(config.output_dir / "loss_curve.csv");
            emit("loss_curve.csv");
            break;
    }

    emit("report.json");
    std::ofstream out(config.output_dir / "report.json");
    if (!out) throw IoError("cannot write report.json");
    out << report_to_json(report).dump(2) << '\n';
    if (!out) throw IoError("failed writing report.json");
    return report;
}

Suite load_suite(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open suite file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("failed to parse " + path.string() + ": " + e.what());
    }
    reject_unknown_keys(j, {"experiments", "output_dir", "seed"}, "suite file");
    Suite suite;
    if (j.contains("output_dir"))
        suite.output_dir = std::filesystem::path(j.at("output_dir").get<std::string>());
    if (j.contains("seed")) suite.seed_override = j.at("seed").get<std::uint64_t>();
    if (!j.contains("experiments") || !j.at("experiments").is_array())
        throw ConfigError("suite file needs an 'experiments' array");
    for (const json& entry : j.at("experiments")) {
        if (entry.is_string()) {
            suite.experiments.push_back(preset(entry.get<std::string>()));
        } else {
            suite.experiments.push_back(experiment_from_json(entry));
        }
    }
    std::set<std::string> ids;
    for (const ExperimentConfig& config : suite.experiments)
        if (!ids.insert(config.experiment_id).second)
            throw ConfigError("duplicate experiment_id '" + config.experiment_id + "'");
    return suite;
}

std::vector<SuiteOutcome> run_suite(const Suite& suite) {
    std::vector<SuiteOutcome> outcomes;
    for (ExperimentConfig config : suite.experiments) {
        if (suite.seed_override) config.seed = *suite.seed_override;
        config.output_dir = suite.output_dir / config.experiment_id;
        SuiteOutcome outcome;
        outcome.experiment_id = config.experiment_id;
        try {
            outcome.report = run_experiment(config);
            outcome.ok = true;
        } catch (const std::exception& e) {
            outcome.ok = false;
            outcome.error = e.what();
        }
        outcomes.push_back(std::move(outcome));
    }

    std::error_code ec;
    std::filesystem::create_directories(suite.output_dir, ec);
    std::ofstream summary(suite.output_dir / "summary.csv");
    if (!summary) throw IoError("cannot write suite summary.csv");
    summary << "experiment_id,system,method,status,nrmse,valid_time_steps,lobe_sign_changes,"
               "bounded,train_wall_time_s\n";
    json suite_json = json::array();
    for (const SuiteOutcome& outcome : outcomes) {
        if (outcome.ok) {
            const ExperimentReport& r = *outcome.report;
            summary << outcome.experiment_id << ',' << dynamics::to_string(r.config.system) << ','
                    << to_string(r.config.method) << ",ok," << format_double(r.report.nrmse) << ','
                    << r.report.valid_time_steps << ',' << r.report.lobe_sign_changes << ','
                    << (r.report.bounded ? "true" : "false") << ','
                    << format_double(r.report.train_wall_time_s) << '\n';
            suite_json.push_back(report_to_json(r));
        } else {
            summary << outcome.experiment_id << ",,,failed,,,,,\n";
            suite_json.push_back(
                {{"experiment_id", outcome.experiment_id}, {"error", outcome.error}});
        }
    }
    std::ofstream report_out(suite.output_dir / "suite_report.json");
    if (!report_out) throw IoError("cannot write suite_report.json");
    report_out << suite_json.dump(2) << '\n';
    return outcomes;
}

}  // namespace chaos::harness
