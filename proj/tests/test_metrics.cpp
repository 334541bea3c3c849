#include "chaosbench/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "chaosbench/dynamics.hpp"
#include "chaosbench/errors.hpp"

using namespace chaos;
using namespace chaos::metrics;

namespace {

Trajectory from_matrix(const Eigen::MatrixXd& data, double dt = 0.01) {
    Trajectory traj;
    traj.dt = dt;
    traj.data = data;
    return traj;
}

Trajectory random_traj(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> gauss(0.0, 2.0);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
    return from_matrix(m);
}

}  // namespace

TEST_CASE("rmse basics") {
    std::mt19937_64 rng(2);
    const Trajectory a = random_traj(rng, 30, 3);
    CHECK(rmse(a, a).cwiseAbs().maxCoeff() == 0.0);

    const Trajectory zeros = from_matrix(Eigen::MatrixXd::Zero(10, 3));
    const Trajectory ones = from_matrix(Eigen::MatrixXd::Ones(10, 3));
    CHECK((rmse(ones, zeros) - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff() < 1e-15);

    SUBCASE("matches the direct formula on random input") {
        const Trajectory p = random_traj(rng, 50, 3);
        const Trajectory t = random_traj(rng, 50, 3);
        const Eigen::VectorXd got = rmse(p, t);
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int i = 0; i < 50; ++i) acc += std::pow(p.data(i, j) - t.data(i, j), 2);
            CHECK(std::abs(got[j] - std::sqrt(acc / 50.0)) <= 1e-12);
        }
    }

    SUBCASE("symmetry") {
        const Trajectory p = random_traj(rng, 20, 3);
        const Trajectory t = random_traj(rng, 20, 3);
        CHECK(rmse(p, t) == rmse(t, p));
    }

    SUBCASE("length mismatch errors") {
        const Trajectory p = random_traj(rng, 20, 3);
        const Trajectory t = random_traj(rng, 21, 3);
        CHECK_THROWS_AS(rmse(p, t), InvalidInputError);
    }
}

TEST_CASE("nrmse rejects zero-variance truth dimensions") {
    std::mt19937_64 rng(3);
    const Trajectory p = random_traj(rng, 20, 3);
    Trajectory flat = p;
    flat.data.col(1).setConstant(4.0);
    CHECK_THROWS_AS(nrmse(p, flat), InvalidInputError);
    CHECK(nrmse(p, random_traj(rng, 20, 3)) > 0.0);
}

TEST_CASE("valid_time") {
    std::mt19937_64 rng(7);
    const Trajectory truth = random_traj(rng, 200, 3);

    SUBCASE("perfect prediction runs the full length") {
        CHECK(valid_time(truth, truth) == 200);
    }

    SUBCASE("an immediately wild prediction scores zero") {
        Trajectory p = truth;
        p.data.row(0).array() += 1e5;
        CHECK(valid_time(p, truth) == 0);
    }

    SUBCASE("constructed failure at step 100") {
        const Eigen::RowVectorXd mean = truth.data.colwise().mean();
        const double scale = std::sqrt(
            (truth.data.rowwise() - mean).array().square().rowwise().sum().mean());
        Trajectory p = truth;
        for (int i = 100; i < 200; ++i) p.data.row(i).array() += 10.0 * scale;
        CHECK(valid_time(p, truth, 0.4) == 100);
    }

    SUBCASE("monotone in the threshold") {
        std::mt19937_64 rng2(8);
        Trajectory p = truth;
        p.data += 0.3 * random_traj(rng2, 200, 3).data;
        int prev = 0;
        for (double threshold : {0.1, 0.2, 0.4, 0.8, 1.6}) {
            const int vt = valid_time(p, truth, threshold);
            CHECK(vt >= prev);
            prev = vt;
        }
    }
}

TEST_CASE("attractor_box_and_lobes") {
    SUBCASE("constant positive trajectory never switches lobes") {
        const Trajectory flat = from_matrix(Eigen::MatrixXd::Constant(40, 3, 2.5));
        const BoxAndLobes out = attractor_box_and_lobes(flat);
        CHECK(out.lobe_sign_changes == 0);
        CHECK(out.box_min[0] == 2.5);
        CHECK(out.box_max[0] == 2.5);
    }

    SUBCASE("alternating signs count every flip") {
        Eigen::MatrixXd data(10, 3);
        for (int i = 0; i < 10; ++i) data.row(i).setConstant(i % 2 == 0 ? 1.0 : -1.0);
        CHECK(attractor_box_and_lobes(from_matrix(data)).lobe_sign_changes == 9);
    }

    SUBCASE("zero samples are skipped, not counted") {
        Eigen::MatrixXd data(5, 3);
        data.col(0) << 1.0, 0.0, 1.0, 0.0, -1.0;
        CHECK(attractor_box_and_lobes(from_matrix(data)).lobe_sign_changes == 1);
    }

    SUBCASE("lorenz ground truth visits both lobes many times") {
        auto [spec, x0] = dynamics::make_benchmark(dynamics::SystemId::lorenz);
        const Trajectory traj = dynamics::integrate(spec, x0, 0.01, 4250);
        CHECK(attractor_box_and_lobes(traj).lobe_sign_changes >= 10);
    }
}

TEST_CASE("time_training wall-clock wrapper") {
    SUBCASE("a zero-work callable costs less than a millisecond") {
        CHECK(time_training([] {}) < 1e-3);
    }

    SUBCASE("two timings of the same deterministic work agree within 50%") {
        volatile double sink = 0.0;
        auto work = [&] {
            double acc = 0.0;
            for (int i = 1; i < 4'000'000; ++i) acc += 1.0 / static_cast<double>(i);
            sink = acc;
        };
        const double first = time_training(work);
        const double second = time_training(work);
        CHECK(std::abs(first - second) < 0.5 * std::max(first, second));
    }
}
