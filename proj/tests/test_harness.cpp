#include "chaosbench/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chaosbench/errors.hpp"
#include "chaosbench/version.hpp"

using namespace chaos;
using namespace chaos::harness;
namespace fs = std::filesystem;

namespace {

// Desk-scale config that runs in well under a second per method.
ExperimentConfig tiny_config(Method method, double noise = 0.0) {
    ExperimentConfig config;
    config.experiment_id = "tiny-" + to_string(method);
    config.system = dynamics::SystemId::lorenz;
    config.method = method;
    config.total_points = 700;
    config.dt = 0.01;
    config.noise_magnitude = noise;
    config.seed = 3;
    switch (method) {
        case Method::rc:
            config.split = {60, 440, 200};
            config.esn.n_units = 150;
            break;
        case Method::ngrc:
            config.split = {2, 498, 200};
            break;
        case Method::lstm:
            config.split = {0, 500, 200};
            config.lstm.epochs = 5;
            config.lstm.window_length = 8;
            break;
    }
    return config;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config json round trip and unknown-key rejection") {
    nlohmann::json j = {
        {"experiment_id", "demo"},
        {"system", "lorenz"},
        {"method", "ngrc"},
        {"total_points", 1000},
        {"split", {{"warmup", 2}, {"train", 700}, {"test", 200}}},
        {"seed", 9},
        {"method_overrides", {{"k", 3}, {"regularization", 1e-4}}},
    };
    const ExperimentConfig config = experiment_from_json(j);
    CHECK(config.ngrc.delays == 3);
    CHECK(config.ngrc.regularization == 1e-4);
    CHECK(config.seed == 9);
    CHECK(config.data_rtol == 1e-3);

    SUBCASE("unknown top-level key") {
        j["typo_key"] = 1;
        CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
    }
    SUBCASE("unknown override key") {
        j["method_overrides"]["n_units"] = 10;  // not an ngrc knob
        CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
    }
    SUBCASE("missing required key") {
        j.erase("system");
        CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
    }
    SUBCASE("split accounting must fit in total_points") {
        j["split"]["test"] = 5000;
        CHECK_THROWS_AS(experiment_from_json(j), ConfigError);
    }
}

TEST_CASE("every documented preset is constructible and valid") {
    const std::vector<std::string> ids = preset_ids();
    CHECK(ids.size() == 12 + 8 + 1 + 32);
    for (const std::string& id : ids) {
        CAPTURE(id);
        const ExperimentConfig config = preset(id);
        CHECK(config.experiment_id == id);
        CHECK_NOTHROW(validate(config));
    }
    CHECK_THROWS_AS(preset("task9-nothing"), ConfigError);

    const ExperimentConfig task1 = preset("task1-lorenz-ngrc");
    CHECK(task1.total_points == 5000);
    CHECK(task1.split.warmup == 2);
    CHECK(task1.split.train == 3998);
    CHECK(task1.split.test == 1000);

    const ExperimentConfig small = preset("task1small-lorenz-rc");
    CHECK(small.split.warmup == 250);
    CHECK(small.split.train == 500);
    CHECK(small.split.test == 4250);

    const ExperimentConfig noisy = preset("task2-lorenz-ngrc-noise5.0");
    CHECK(noisy.noise_magnitude == 5.0);
    CHECK(noisy.split.train == 3750);

    const ExperimentConfig long_run = preset("task1long-chen-ngrc");
    CHECK(long_run.total_points == 10000);
    CHECK(long_run.split.test == 5000);
}

TEST_CASE("execute produces sane reports for all three methods") {
    for (Method method : {Method::ngrc, Method::rc, Method::lstm}) {
        CAPTURE(to_string(method));
        const ExperimentConfig config = tiny_config(method);
        const Trajectory data = generate_data(config);
        const ExecutionResult result = execute(config, data, data);
        CHECK(result.report.train_wall_time_s > 0.0);
        CHECK(result.truth_window.n_steps() == 200);
        if (!result.diverged) CHECK(result.forecast.n_steps() == 200);
        CHECK(result.forecast.data.allFinite());
        CHECK(result.readout.size() > 0);
        // Forecast rows line up with the truth window in time.
        CHECK(result.forecast.t0 == doctest::Approx(result.truth_window.t0));
    }
}

TEST_CASE("split accounting: regression rows are exact") {
    const ExperimentConfig rc = tiny_config(Method::rc);
    const Trajectory data = generate_data(rc);
    CHECK(execute(rc, data, data).regression_rows == rc.split.train - 1);

    const ExperimentConfig ng = tiny_config(Method::ngrc);
    const Trajectory data2 = generate_data(ng);
    CHECK(execute(ng, data2, data2).regression_rows == ng.split.train - 1);

    const ExperimentConfig ls = tiny_config(Method::lstm);
    const Trajectory data3 = generate_data(ls);
    CHECK(execute(ls, data3, data3).regression_rows ==
          ls.split.train - ls.lstm.window_length);
}

TEST_CASE("no leakage: weights depend only on warm-up plus training rows") {
    for (Method method : {Method::ngrc, Method::rc, Method::lstm}) {
        CAPTURE(to_string(method));
        const ExperimentConfig config = tiny_config(method);
        const Trajectory data = generate_data(config);

        Trajectory mutated = data;
        const int train_rows = config.split.warmup + config.split.train;
        mutated.data.bottomRows(mutated.n_steps() - train_rows).setConstant(1234.5);

        const ExecutionResult a = execute(config, data, data);
        const ExecutionResult b = execute(config, mutated, data);
        REQUIRE(a.readout.size() == b.readout.size());
        CHECK(a.readout == b.readout);
    }
}

TEST_CASE("end-to-end determinism under a fixed seed") {
    for (double noise : {0.0, 1.0}) {
        CAPTURE(noise);
        const ExperimentConfig config = tiny_config(Method::ngrc, noise);
        const Trajectory d1 = generate_data(config);
        const Trajectory d2 = generate_data(config);
        CHECK(d1.data == d2.data);
        const Trajectory ref = noise > 0.0 ? generate_reference(config) : d1;
        const ExecutionResult a = execute(config, d1, ref);
        const ExecutionResult b = execute(config, d2, ref);
        CHECK(a.forecast.data == b.forecast.data);
        CHECK(a.readout == b.readout);
    }
}

TEST_CASE("run_experiment writes every artifact in the manifest") {
    TempDir dir("chaosbench_run_test");
    ExperimentConfig config = tiny_config(Method::ngrc);
    config.output_dir = dir.path / "exp";
    const ExperimentReport report = run_experiment(config);
    CHECK(report.toolkit_version == std::string(kToolkitVersion));
    CHECK(report.artifacts.size() >= 5);
    for (const std::string& name : report.artifacts) {
        CAPTURE(name);
        CHECK(fs::exists(config.output_dir / name));
    }
    // Report JSON parses and carries stable keys.
    const nlohmann::json j = nlohmann::json::parse(read_file(config.output_dir / "report.json"));
    CHECK(j.contains("experiment"));
    CHECK(j.contains("metrics"));
    CHECK(j["metrics"].contains("nrmse"));
    CHECK(j["metrics"].contains("valid_time_steps"));
    CHECK(j.contains("method_params"));
}

TEST_CASE("rerunning an experiment yields byte-identical prediction CSVs") {
    TempDir dir("chaosbench_determinism");
    for (double noise : {0.0, 2.0}) {
        CAPTURE(noise);
        ExperimentConfig config = tiny_config(Method::rc, noise);
        config.output_dir = dir.path / (noise > 0 ? "a_noisy" : "a");
        run_experiment(config);
        ExperimentConfig again = config;
        again.output_dir = dir.path / (noise > 0 ? "b_noisy" : "b");
        run_experiment(again);
        CHECK(read_file(config.output_dir / "prediction.csv") ==
              read_file(again.output_dir / "prediction.csv"));
        CHECK(read_file(config.output_dir / "data.csv") ==
              read_file(again.output_dir / "data.csv"));
    }
}

TEST_CASE("suites") {
    TempDir dir("chaosbench_suite_test");

    SUBCASE("empty suite file") {
        const fs::path path = dir.path / "empty.json";
        std::ofstream(path) << R"({"experiments": []})";
        const Suite suite = load_suite(path);
        CHECK(run_suite(suite).empty());
    }

    SUBCASE("duplicate ids are rejected") {
        const fs::path path = dir.path / "dup.json";
        std::ofstream(path) << R"({"experiments": ["task1-lorenz-ngrc", "task1-lorenz-ngrc"]})";
        CHECK_THROWS_AS(load_suite(path), ConfigError);
    }

    SUBCASE("one bad experiment does not sink the suite") {
        Suite suite;
        suite.output_dir = dir.path / "out";
        suite.experiments.push_back(tiny_config(Method::ngrc));
        ExperimentConfig broken = tiny_config(Method::rc);
        broken.experiment_id = "broken";
        broken.esn.n_units = 150;
        broken.esn.connectivity = 1e-9;  // empty reservoir, init fails
        suite.experiments.push_back(broken);
        suite.experiments.push_back(tiny_config(Method::lstm));

        const auto outcomes = run_suite(suite);
        REQUIRE(outcomes.size() == 3);
        CHECK(outcomes[0].ok);
        CHECK_FALSE(outcomes[1].ok);
        CHECK(outcomes[1].error.find("init_reservoir") != std::string::npos);
        CHECK(outcomes[2].ok);
        CHECK(fs::exists(dir.path / "out" / "summary.csv"));
        CHECK(fs::exists(dir.path / "out" / "suite_report.json"));
    }
}
