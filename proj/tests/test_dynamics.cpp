#include "chaosbench/dynamics.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "chaosbench/errors.hpp"

using namespace chaos;
using namespace chaos::dynamics;
using Eigen::Vector3d;

namespace {

SystemSpec lorenz_spec() { return make_benchmark(SystemId::lorenz).first; }

}  // namespace

TEST_CASE("eval_rhs matches the written equations at hand-checked points") {
    CHECK(eval_rhs(lorenz_spec(), Vector3d::Zero()).norm() == 0.0);

    SystemSpec rossler = make_benchmark(SystemId::rossler).first;
    const Vector3d at_origin = eval_rhs(rossler, Vector3d::Zero());
    CHECK(at_origin[0] == 0.0);
    CHECK(at_origin[1] == 0.0);
    CHECK(at_origin[2] == doctest::Approx(0.2).epsilon(1e-15));

    SystemSpec chen;
    chen.system_id = SystemId::chen;
    chen.params = {{"a", 40.0}, {"b", 28.0}, {"c", 3.0}};
    const Vector3d v = eval_rhs(chen, Vector3d(1.0, 1.0, 0.0));
    CHECK(v[0] == 0.0);
    CHECK(v[1] == doctest::Approx(-34.0).epsilon(1e-15));
    CHECK(v[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("analytically derived fixed points have tiny residuals") {
    // Lorenz: y = x, z = rho - 1, x = sqrt(beta*(rho-1)) = sqrt(72).
    const double x = std::sqrt(72.0);
    CHECK(eval_rhs(lorenz_spec(), Vector3d(x, x, 27.0)).norm() <= 1e-9);
    CHECK(eval_rhs(lorenz_spec(), Vector3d(-x, -x, 27.0)).norm() <= 1e-9);

    // Rossler: z solves a*z^2 - c*z + b = 0, then x = a*z, y = -z.
    {
        auto spec = make_benchmark(SystemId::rossler).first;
        const double a = 0.2, b = 0.2, c = 5.7;
        const double disc = std::sqrt(c * c - 4.0 * a * b);
        for (double z : {(c - disc) / (2.0 * a), (c + disc) / (2.0 * a)})
            CHECK(eval_rhs(spec, Vector3d(a * z, -z, z)).norm() <= 1e-9);
    }

    // Chen (a=35, b=3, c=28): y = x, z = 2c - a, x = sqrt(b*(2c-a)).
    {
        auto spec = make_benchmark(SystemId::chen).first;
        const double z = 2.0 * 28.0 - 35.0;
        const double xc = std::sqrt(3.0 * z);
        CHECK(eval_rhs(spec, Vector3d(xc, xc, z)).norm() <= 1e-9);
        CHECK(eval_rhs(spec, Vector3d(-xc, -xc, z)).norm() <= 1e-9);
    }

    // Qi (a=35, b=7, c=10): with w solving w^2 - (2a-c)w + a = 0,
    // z = a - c - w, y = w*x, x = sqrt(b*z/w).
    {
        auto spec = make_benchmark(SystemId::qi).first;
        const double a = 35.0, b = 7.0, c = 10.0;
        const double disc = std::sqrt((2.0 * a - c) * (2.0 * a - c) - 4.0 * a);
        for (double w : {((2.0 * a - c) - disc) / 2.0, ((2.0 * a - c) + disc) / 2.0}) {
            const double z = a - c - w;
            if (z / w <= 0.0) continue;
            const double xq = std::sqrt(b * z / w);
            CHECK(eval_rhs(spec, Vector3d(xq, w * xq, z)).norm() <= 1e-9);
            CHECK(eval_rhs(spec, Vector3d(-xq, -w * xq, z)).norm() <= 1e-9);
        }
    }
}

TEST_CASE("eval_rhs rejects bad specs") {
    SystemSpec broken;
    broken.system_id = SystemId::lorenz;
    broken.params = {{"sigma", 10.0}, {"rho", 28.0}};  // beta missing
    CHECK_THROWS_AS(eval_rhs(broken, Vector3d::Zero()), InvalidSpecError);
    broken.params["beta"] = std::nan("");
    CHECK_THROWS_AS(eval_rhs(broken, Vector3d::Zero()), InvalidSpecError);
}

TEST_CASE("make_benchmark carries the published presets") {
    auto [lorenz, x0] = make_benchmark(SystemId::lorenz);
    CHECK(lorenz.params.at("sigma") == 10.0);
    CHECK(lorenz.params.at("rho") == 28.0);
    CHECK(lorenz.params.at("beta") == doctest::Approx(8.0 / 3.0).epsilon(1e-16));

    auto qi = make_benchmark(SystemId::qi).first;
    CHECK(qi.params.at("a") == 35.0);
    CHECK(qi.params.at("b") == 7.0);
    CHECK(qi.params.at("c") == 10.0);

    for (SystemId id : {SystemId::lorenz, SystemId::rossler, SystemId::chen, SystemId::qi}) {
        const Vector3d start = make_benchmark(id).second;
        CHECK(start == Vector3d(17.6771581, 12.9313791, 43.9140433));
    }
}

TEST_CASE("integrate produces the documented shapes") {
    auto [spec, x0] = make_benchmark(SystemId::lorenz);

    SUBCASE("single step returns exactly x0") {
        const Trajectory traj = integrate(spec, x0, 0.01, 1);
        CHECK(traj.n_steps() == 1);
        CHECK(traj.data.row(0).transpose() == x0);
    }

    SUBCASE("paper-scale run: 5000 samples, finite and bounded") {
        const Trajectory traj = integrate(spec, x0, 0.01, 5000);
        CHECK(traj.n_steps() == 5000);
        CHECK(traj.dim() == 3);
        CHECK(traj.data.allFinite());
        CHECK(traj.data.cwiseAbs().maxCoeff() < 300.0);
        CHECK(traj.time(4999) == doctest::Approx(49.99).epsilon(1e-12));
    }
}

TEST_CASE("integrate is deterministic, including under noise") {
    auto [spec, x0] = make_benchmark(SystemId::lorenz);
    const Trajectory a = integrate(spec, x0, 0.01, 400);
    const Trajectory b = integrate(spec, x0, 0.01, 400);
    CHECK(a.data == b.data);

    NoiseConfig noise{1.5, 77};
    const Trajectory c = integrate(spec, x0, 0.01, 400, noise);
    const Trajectory d = integrate(spec, x0, 0.01, 400, noise);
    CHECK(c.data == d.data);
    CHECK(c.data != a.data);

    // Different seed, different realization.
    const Trajectory e = integrate(spec, x0, 0.01, 400, NoiseConfig{1.5, 78});
    CHECK(e.data != c.data);
}

TEST_CASE("noise magnitude zero is exactly the deterministic path") {
    auto [spec, x0] = make_benchmark(SystemId::rossler);
    const Trajectory plain = integrate(spec, x0, 0.01, 300);
    const Trajectory zeroed = integrate(spec, x0, 0.01, 300, NoiseConfig{0.0, 123});
    CHECK(plain.data == zeroed.data);
}

TEST_CASE("self-convergence: halving dt moves the first 5 time units < 1e-3") {
    auto [spec, x0] = make_benchmark(SystemId::lorenz);

    for (auto method : {IntegratorOptions::Method::rk23, IntegratorOptions::Method::rk4}) {
        IntegratorOptions options;
        options.method = method;
        const Trajectory coarse = integrate(spec, x0, 0.01, 2000, std::nullopt, options);
        const Trajectory fine = integrate(spec, x0, 0.005, 4000, std::nullopt, options);
        double worst = 0.0;
        for (int i = 0; i < 500; ++i)
            worst = std::max(worst,
                             (coarse.data.row(i) - fine.data.row(2 * i)).cwiseAbs().maxCoeff());
        CAPTURE(static_cast<int>(method));
        CHECK(worst < 1e-3);
    }
}

TEST_CASE("divergence bound reports the offending sample") {
    auto [spec, x0] = make_benchmark(SystemId::lorenz);
    IntegratorOptions options;
    options.divergence_bound = 49.5;  // just above |x0|, crossed mid-run
    CHECK_THROWS_AS(integrate(spec, x0, 0.01, 2000, std::nullopt, options), DivergenceError);
    try {
        integrate(spec, x0, 0.01, 2000, std::nullopt, options);
    } catch (const DivergenceError& e) {
        CHECK(e.step_index > 0);
        CHECK(e.step_index < 2000);
    }
}

TEST_CASE("integrate validates its inputs") {
    auto [spec, x0] = make_benchmark(SystemId::lorenz);
    CHECK_THROWS_AS(integrate(spec, x0, 0.0, 10), InvalidInputError);
    CHECK_THROWS_AS(integrate(spec, x0, 0.01, 0), InvalidInputError);
    CHECK_THROWS_AS(integrate(spec, Vector3d(std::nan(""), 0, 0), 0.01, 10), InvalidInputError);
}

TEST_CASE("csv export round-trips at full precision") {
    auto [spec, x0] = make_benchmark(SystemId::lorenz);
    const Trajectory traj = integrate(spec, x0, 0.01, 50);
    std::ostringstream out;
    write_csv(traj, out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x,y,z");
    for (int i = 0; i < 50; ++i) {
        std::string line;
        REQUIRE(std::getline(in, line));
        const char* p = line.c_str();
        char* end = nullptr;
        CHECK(std::strtod(p, &end) == traj.time(i));
        for (int j = 0; j < 3; ++j) {
            p = end + 1;  // skip comma
            CHECK(std::strtod(p, &end) == traj.data(i, j));
        }
    }
}
