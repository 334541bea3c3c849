#include "chaosbench/ngrc.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

#include "chaosbench/dynamics.hpp"
#include "chaosbench/errors.hpp"

using namespace chaos;
using namespace chaos::ngrc;

namespace {

NgrcConfig config_with(int k, int s, int p) {
    NgrcConfig cfg;
    cfg.delays = k;
    cfg.stride = s;
    cfg.order = p;
    return cfg;
}

// Independent monomial counter: enumerate all p-tuples over n_lin variables
// and deduplicate them as sorted multisets.
int brute_force_monomials(int n_lin, int p) {
    std::set<std::vector<int>> unique;
    std::vector<int> tuple(p, 0);
    while (true) {
        std::vector<int> key = tuple;
        std::sort(key.begin(), key.end());
        unique.insert(key);
        int pos = p - 1;
        while (pos >= 0 && tuple[pos] == n_lin - 1) --pos;
        if (pos < 0) break;
        ++tuple[pos];
        for (int i = pos + 1; i < p; ++i) tuple[i] = 0;
    }
    return static_cast<int>(unique.size());
}

Trajectory constant_series(int rows, const Eigen::Vector3d& value) {
    Trajectory traj;
    traj.dt = 0.01;
    traj.data = value.transpose().replicate(rows, 1);
    return traj;
}

}  // namespace

TEST_CASE("feature counts match brute-force enumeration") {
    const FeatureLayout paper = FeatureLayout::make(3, config_with(2, 1, 2));
    CHECK(paper.n_lin == 6);
    CHECK(paper.n_nonlin == 21);
    CHECK(paper.n_total == 28);

    for (int d = 1; d <= 4; ++d)
        for (int k = 1; k <= 3; ++k)
            for (int p = 2; p <= 3; ++p) {
                const FeatureLayout layout = FeatureLayout::make(d, config_with(k, 1, p));
                CAPTURE(d);
                CAPTURE(k);
                CAPTURE(p);
                CHECK(layout.n_nonlin == brute_force_monomials(d * k, p));
                if (p == 2) CHECK(layout.n_total == 1 + d * k + d * k * (d * k + 1) / 2);
                std::set<std::vector<int>> unique(layout.monomials.begin(),
                                                  layout.monomials.end());
                CHECK(unique.size() == layout.monomials.size());
            }
}

TEST_CASE("build_features hand-checked values") {
    SUBCASE("single variable, k=1, p=2") {
        const NgrcConfig cfg = config_with(1, 1, 2);
        const FeatureLayout layout = FeatureLayout::make(1, cfg);
        Eigen::MatrixXd window(1, 1);
        window << 3.0;
        const Eigen::VectorXd f = build_features(window, cfg, layout);
        REQUIRE(f.size() == 3);
        CHECK(f[0] == 1.0);
        CHECK(f[1] == 3.0);
        CHECK(f[2] == 9.0);
    }

    SUBCASE("two variables, k=1, p=2") {
        const NgrcConfig cfg = config_with(1, 1, 2);
        const FeatureLayout layout = FeatureLayout::make(2, cfg);
        Eigen::MatrixXd window(1, 2);
        window << 2.0, 5.0;
        const Eigen::VectorXd f = build_features(window, cfg, layout);
        REQUIRE(f.size() == 6);
        CHECK(f[0] == 1.0);
        CHECK(f[1] == 2.0);
        CHECK(f[2] == 5.0);
        CHECK(f[3] == 4.0);
        CHECK(f[4] == 10.0);
        CHECK(f[5] == 25.0);
    }

    SUBCASE("delay taps pull the right rows") {
        const NgrcConfig cfg = config_with(2, 2, 2);
        const FeatureLayout layout = FeatureLayout::make(1, cfg);
        Eigen::MatrixXd window(3, 1);
        window << 7.0, 9.0, 11.0;  // taps land on rows 2 and 0
        const Eigen::VectorXd f = build_features(window, cfg, layout);
        CHECK(f[1] == 11.0);
        CHECK(f[2] == 7.0);
    }

    SUBCASE("window shorter than (k-1)s+1 is rejected") {
        const NgrcConfig cfg = config_with(2, 3, 2);
        const FeatureLayout layout = FeatureLayout::make(2, cfg);
        CHECK_THROWS_AS(build_features(Eigen::MatrixXd::Zero(3, 2), cfg, layout),
                        InsufficientDataError);
        CHECK_NOTHROW(build_features(Eigen::MatrixXd::Zero(4, 2), cfg, layout));
    }

    SUBCASE("pure function: identical windows give identical vectors") {
        const NgrcConfig cfg = config_with(2, 1, 2);
        const FeatureLayout layout = FeatureLayout::make(3, cfg);
        const Eigen::MatrixXd window = Eigen::MatrixXd::Random(2, 3);
        CHECK(build_features(window, cfg, layout) == build_features(window, cfg, layout));
    }
}

TEST_CASE("training on a constant series keeps the forecast at the constant") {
    const Eigen::Vector3d value(1.5, -2.0, 4.0);
    const Trajectory series = constant_series(60, value);
    const NgrcModel model = train(series, NgrcConfig{});
    const ForecastResult out = model.forecast(series.data, 500);
    REQUIRE_FALSE(out.diverged);
    for (Eigen::Index t = 0; t < out.trajectory.n_steps(); ++t)
        CHECK((out.trajectory.data.row(t).transpose() - value).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("training reduces to the published closed form") {
    // Reconstruct W = z O' (O O' + beta I)^(-1) on a small well-conditioned
    // instance and compare against the module output.
    auto [spec, x0] = dynamics::make_benchmark(dynamics::SystemId::lorenz);
    Trajectory series = dynamics::integrate(spec, x0, 0.01, 40);
    series.data /= 50.0;  // keep the Gram matrix benign for the inverse route
    NgrcConfig cfg = config_with(1, 1, 2);  // n_total = 10
    cfg.predict_increment = false;
    cfg.regularization = 1e-4;
    const FeatureLayout layout = FeatureLayout::make(3, cfg);
    REQUIRE(layout.n_total == 10);

    const NgrcModel model = train(series, cfg);

    const int warmup = cfg.warmup_steps();
    const Eigen::Index pairs = series.n_steps() - 1 - warmup;
    Eigen::MatrixXd o_total(layout.n_total, pairs);  // features as columns
    Eigen::MatrixXd z(3, pairs);
    for (Eigen::Index i = 0; i < pairs; ++i) {
        o_total.col(i) = build_features(series.data.topRows(warmup + i + 1), cfg, layout);
        z.col(i) = series.data.row(warmup + i + 1).transpose();
    }
    const Eigen::MatrixXd closed_form =
        z * o_total.transpose() *
        (Eigen::MatrixXd(o_total * o_total.transpose()) +
         cfg.regularization * Eigen::MatrixXd::Identity(layout.n_total, layout.n_total))
            .inverse();
    CHECK((model.w_out() - closed_form).norm() / closed_form.norm() < 1e-10);
}

TEST_CASE("warm-up minimality: s*k accepted, s*k-1 rejected") {
    auto [spec, x0] = dynamics::make_benchmark(dynamics::SystemId::lorenz);
    const Trajectory series = dynamics::integrate(spec, x0, 0.01, 50);
    const NgrcConfig cfg = config_with(2, 2, 2);  // s*k = 4
    CHECK_NOTHROW(train(series, cfg, 4));
    CHECK_THROWS_AS(train(series, cfg, 3), InsufficientDataError);
    CHECK_THROWS_AS(train(series.slice(0, 5), cfg, 4), InsufficientDataError);
}

TEST_CASE("forecast behavior") {
    auto [spec, x0] = dynamics::make_benchmark(dynamics::SystemId::lorenz);
    dynamics::IntegratorOptions loose;
    loose.rtol = 1e-3;
    loose.atol = 1e-6;
    const Trajectory series =
        dynamics::integrate(spec, x0, 0.01, 600, std::nullopt, loose);
    const NgrcModel model = train(series, NgrcConfig{});

    SUBCASE("zero steps gives an empty trajectory") {
        CHECK(model.forecast(series.data, 0).trajectory.n_steps() == 0);
    }

    SUBCASE("bit-identical under identical tails") {
        const ForecastResult a = model.forecast(series.data, 300);
        const ForecastResult b = model.forecast(series.data, 300);
        CHECK(a.trajectory.data == b.trajectory.data);
    }

    SUBCASE("short history is rejected") {
        CHECK_THROWS_AS(model.forecast(series.data.topRows(1), 10), InsufficientDataError);
    }

    SUBCASE("divergence is flagged with the step index") {
        // A model trained on a tiny sliver of data blows up in closed loop
        // once pushed far beyond the data manifold.
        Trajectory ramp;
        ramp.dt = 0.01;
        ramp.data.resize(8, 3);
        for (int i = 0; i < 8; ++i)
            ramp.data.row(i) =
                Eigen::RowVector3d(std::pow(4.0, i), std::pow(3.0, i), std::pow(5.0, i));
        NgrcConfig cfg;
        cfg.regularization = 1e-10;
        const NgrcModel bad = train(ramp, cfg);
        const ForecastResult out = bad.forecast(ramp.data, 400);
        CHECK(out.diverged);
        CHECK(out.trajectory.n_steps() == static_cast<Eigen::Index>(out.divergence_step));
        CHECK(out.trajectory.data.allFinite());
    }
}

TEST_CASE("export_weights emits one labeled row per feature") {
    auto [spec, x0] = dynamics::make_benchmark(dynamics::SystemId::lorenz);
    const Trajectory series = dynamics::integrate(spec, x0, 0.01, 200);
    const NgrcModel model = train(series, NgrcConfig{});

    const WeightTable table = model.export_weights();
    REQUIRE(table.weights.rows() == 28);
    REQUIRE(table.weights.cols() == 3);
    REQUIRE(table.feature.size() == 28);
    CHECK(table.feature[0] == "const");
    CHECK(table.feature[1] == "x[t]");
    CHECK(table.feature[4] == "x[t-1]");
    std::set<std::string> unique(table.feature.begin(), table.feature.end());
    CHECK(unique.size() == table.feature.size());

    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "ngrc_weights_test.csv";
    model.write_weights_csv(path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "feature,dim_x,dim_y,dim_z");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 28);
    std::filesystem::remove(path);

    NgrcModel untrained(NgrcConfig{}, FeatureLayout::make(3, NgrcConfig{}));
    CHECK_THROWS_AS(untrained.export_weights(), InvalidInputError);
}

TEST_CASE("save/load round trip replays forecasts bit-for-bit") {
    auto [spec, x0] = dynamics::make_benchmark(dynamics::SystemId::lorenz);
    const Trajectory series = dynamics::integrate(spec, x0, 0.01, 300);
    const NgrcModel model = train(series, NgrcConfig{});

    const std::filesystem::path path = std::filesystem::temp_directory_path() / "ngrc_model.bin";
    model.save(path);
    const NgrcModel loaded = NgrcModel::load(path);
    std::filesystem::remove(path);

    const ForecastResult a = model.forecast(series.data, 150);
    const ForecastResult b = loaded.forecast(series.data, 150);
    CHECK(a.trajectory.data == b.trajectory.data);
    CHECK(loaded.layout().n_total == model.layout().n_total);
}
