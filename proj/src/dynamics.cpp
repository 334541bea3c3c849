#include "chaosbench/dynamics.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "chaosbench/errors.hpp"

namespace chaos::dynamics {

std::string to_string(SystemId id) {
    switch (id) {
        case SystemId::lorenz: return "lorenz";
        case SystemId::rossler: return "rossler";
        case SystemId::chen: return "chen";
        case SystemId::qi: return "qi";
    }
    throw InvalidSpecError("unknown system id");
}

SystemId system_from_string(const std::string& name) {
    if (name == "lorenz") return SystemId::lorenz;
    if (name == "rossler") return SystemId::rossler;
    if (name == "chen") return SystemId::chen;
    if (name == "qi") return SystemId::qi;
    throw InvalidSpecError("unknown system '" + name + "'");
}

namespace {

double get_param(const SystemSpec& spec, const char* name) {
    auto it = spec.params.find(name);
    if (it == spec.params.end())
        throw InvalidSpecError("missing parameter '" + std::string(name) + "' for system " +
                               to_string(spec.system_id));
    if (!std::isfinite(it->second))
        throw InvalidSpecError("non-finite parameter '" + std::string(name) + "' for system " +
                               to_string(spec.system_id));
    return it->second;
}

using Rhs = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

/// Validates the parameter set once and returns a fast closure over it.
Rhs make_rhs(const SystemSpec& spec) {
    switch (spec.system_id) {
        case SystemId::lorenz: {
            const double sigma = get_param(spec, "sigma");
            const double rho = get_param(spec, "rho");
            const double beta = get_param(spec, "beta");
            return [=](const Eigen::Vector3d& u) {
                return Eigen::Vector3d(sigma * (u[1] - u[0]), u[0] * (rho - u[2]) - u[1],
                                       u[0] * u[1] - beta * u[2]);
            };
        }
        case SystemId::rossler: {
            const double a = get_param(spec, "a");
            const double b = get_param(spec, "b");
            const double c = get_param(spec, "c");
            return [=](const Eigen::Vector3d& u) {
                return Eigen::Vector3d(-u[1] - u[2], u[0] + a * u[1], (u[0] - c) * u[2] + b);
            };
        }
        case SystemId::chen: {
            const double a = get_param(spec, "a");
            const double b = get_param(spec, "b");
            const double c = get_param(spec, "c");
            return [=](const Eigen::Vector3d& u) {
                return Eigen::Vector3d(a * (u[1] - u[0]),
                                       (c - a) * u[0] - u[0] * u[2] + c * u[1],
                                       u[0] * u[1] - b * u[2]);
            };
        }
        case SystemId::qi: {
            const double a = get_param(spec, "a");
            const double b = get_param(spec, "b");
            const double c = get_param(spec, "c");
            return [=](const Eigen::Vector3d& u) {
                return Eigen::Vector3d(a * (u[1] - u[0]) + u[1] * u[2],
                                       (a - c) * u[0] - u[1] - u[0] * u[2],
                                       u[0] * u[1] - b * u[2]);
            };
        }
    }
    throw InvalidSpecError("unknown system id");
}

void check_sample(const Eigen::Vector3d& y, double bound, int index) {
    if (!y.allFinite()) throw DivergenceError("state became non-finite", static_cast<std::size_t>(index));
    if (y.norm() > bound) throw DivergenceError("state norm exceeded divergence bound", static_cast<std::size_t>(index));
}

double rms_norm(const Eigen::Vector3d& v) { return std::sqrt(v.squaredNorm() / 3.0); }

Eigen::Vector3d rk4_step(const Rhs& f, const Eigen::Vector3d& y, double h) {
    const Eigen::Vector3d k1 = f(y);
    const Eigen::Vector3d k2 = f(y + 0.5 * h * k1);
    const Eigen::Vector3d k3 = f(y + 0.5 * h * k2);
    const Eigen::Vector3d k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Adaptive Bogacki-Shampine 3(2) pair with a cubic dense-output interpolant,
/// sampling the solution at t = i*dt for i in [0, n_steps). Step size control
/// follows the usual proportional rule with safety 0.9 and factor clamp
/// [0.2, 10]; the error norm is the RMS of the local error over
/// atol + rtol*max(|y|, |y_new|).
void integrate_rk23(const Rhs& f, const Eigen::Vector3d& x0, double dt, int n_steps,
                    const IntegratorOptions& opt, Eigen::MatrixXd& out) {
    constexpr double kSafety = 0.9;
    constexpr double kMinFactor = 0.2;
    constexpr double kMaxFactor = 10.0;
    const double t_end = static_cast<double>(n_steps - 1) * dt;

    Eigen::Vector3d y = x0;
    Eigen::Vector3d fy = f(y);
    double t = 0.0;
    int next_sample = 1;

    // Initial step selection in the style of Hairer/Wanner.
    auto scale_for = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        return (Eigen::Vector3d(opt.atol, opt.atol, opt.atol) +
                opt.rtol * a.cwiseAbs().cwiseMax(b.cwiseAbs()))
            .eval();
    };
    double h;
    {
        const Eigen::Vector3d scale = scale_for(y, y);
        const double d0 = rms_norm(y.cwiseQuotient(scale));
        const double d1 = rms_norm(fy.cwiseQuotient(scale));
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        const Eigen::Vector3d y1 = y + h0 * fy;
        const Eigen::Vector3d f1 = f(y1);
        const double d2 = rms_norm((f1 - fy).cwiseQuotient(scale)) / h0;
        double h1 = (d1 <= 1e-15 && d2 <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                 : std::pow(0.01 / std::max(d1, d2), 1.0 / 3.0);
        h = std::min({100.0 * h0, h1, t_end});
    }

    bool rejected = false;
    while (next_sample < n_steps) {
        const double min_step = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
        if (!(h >= min_step) || !std::isfinite(h))
            throw DivergenceError("integrator step size underflow", static_cast<std::size_t>(next_sample));
        if (t + h > t_end) h = t_end - t;

        const Eigen::Vector3d k1 = fy;
        const Eigen::Vector3d k2 = f(y + h * 0.5 * k1);
        const Eigen::Vector3d k3 = f(y + h * 0.75 * k2);
        const Eigen::Vector3d y_new = y + h * ((2.0 / 9.0) * k1 + (1.0 / 3.0) * k2 + (4.0 / 9.0) * k3);
        const Eigen::Vector3d k4 = f(y_new);
        const Eigen::Vector3d err =
            h * ((5.0 / 72.0) * k1 - (1.0 / 12.0) * k2 - (1.0 / 9.0) * k3 + (1.0 / 8.0) * k4);

        double err_norm;
        if (y_new.allFinite()) {
            err_norm = rms_norm(err.cwiseQuotient(scale_for(y, y_new)));
        } else {
            err_norm = std::numeric_limits<double>::infinity();
        }

        if (!(err_norm < 1.0)) {
            h *= std::max(kMinFactor, kSafety * std::pow(err_norm, -1.0 / 3.0));
            rejected = true;
            continue;
        }

        // Cubic interpolant: y(t + x*h) = y + h * Q * (x, x^2, x^3).
        Eigen::Matrix<double, 3, 3> q;
        q.col(0) = k1;
        q.col(1) = -(4.0 / 3.0) * k1 + k2 + (4.0 / 3.0) * k3 - k4;
        q.col(2) = (5.0 / 9.0) * k1 - (2.0 / 3.0) * k2 - (8.0 / 9.0) * k3 + k4;
        const double t_new = t + h;
        while (next_sample < n_steps) {
            const double ts = static_cast<double>(next_sample) * dt;
            if (ts > t_new && t_new < t_end) break;
            const double x = (ts - t) / h;
            const Eigen::Vector3d p(x, x * x, x * x * x);
            const Eigen::Vector3d ys = y + h * (q * p);
            check_sample(ys, opt.divergence_bound, next_sample);
            out.row(next_sample) = ys.transpose();
            ++next_sample;
        }

        t = t_new;
        y = y_new;
        fy = k4;  // first-same-as-last
        double factor = (err_norm == 0.0)
                            ? kMaxFactor
                            : std::min(kMaxFactor, kSafety * std::pow(err_norm, -1.0 / 3.0));
        if (rejected) factor = std::min(1.0, factor);
        h *= factor;
        rejected = false;
    }
}

}  // namespace

Eigen::Vector3d eval_rhs(const SystemSpec& spec, const Eigen::Vector3d& state) {
    if (!state.allFinite()) throw InvalidInputError("eval_rhs: non-finite state");
    return make_rhs(spec)(state);
}

Trajectory integrate(const SystemSpec& spec, const Eigen::Vector3d& x0, double dt, int n_steps,
                     const std::optional<NoiseConfig>& noise, const IntegratorOptions& options) {
    if (!(dt > 0.0)) throw InvalidInputError("integrate: dt must be positive");
    if (n_steps < 1) throw InvalidInputError("integrate: n_steps must be at least 1");
    if (!x0.allFinite()) throw InvalidInputError("integrate: non-finite initial state");
    if (noise && noise->magnitude < 0.0) throw InvalidInputError("integrate: negative noise magnitude");

    const Rhs f = make_rhs(spec);

    Trajectory traj;
    traj.t0 = 0.0;
    traj.dt = dt;
    traj.data.resize(n_steps, 3);
    traj.data.row(0) = x0.transpose();
    check_sample(x0, options.divergence_bound, 0);
    if (n_steps == 1) return traj;

    if (noise && noise->magnitude > 0.0) {
        // Piecewise-constant stochastic drift: one N(0,1) draw per component,
        // held fixed across the RK4 stages of each dt step.
        std::mt19937_64 rng(noise->seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::Vector3d y = x0;
        for (int i = 1; i < n_steps; ++i) {
            Eigen::Vector3d eps;
            for (int j = 0; j < 3; ++j) eps[j] = gauss(rng);
            const Eigen::Vector3d drift = noise->magnitude * eps;
            auto g = [&](const Eigen::Vector3d& u) -> Eigen::Vector3d { return f(u) + drift; };
            y = rk4_step(g, y, dt);
            check_sample(y, options.divergence_bound, i);
            traj.data.row(i) = y.transpose();
        }
        return traj;
    }

    if (options.method == IntegratorOptions::Method::rk4) {
        Eigen::Vector3d y = x0;
        for (int i = 1; i < n_steps; ++i) {
            y = rk4_step(f, y, dt);
            check_sample(y, options.divergence_bound, i);
            traj.data.row(i) = y.transpose();
        }
        return traj;
    }

    integrate_rk23(f, x0, dt, n_steps, options, traj.data);
    return traj;
}

std::pair<SystemSpec, Eigen::Vector3d> make_benchmark(SystemId id) {
    SystemSpec spec;
    spec.system_id = id;
    switch (id) {
        case SystemId::lorenz:
            spec.params = {{"sigma", 10.0}, {"rho", 28.0}, {"beta", 8.0 / 3.0}};
            break;
        case SystemId::rossler:
            spec.params = {{"a", 0.2}, {"b", 0.2}, {"c", 5.7}};
            break;
        case SystemId::chen:
            // Double-scroll chaotic parameter set (Lu & Chen 2002). The values
            // printed in some references (a=40, b=28, c=3) make the origin a
            // global sink for this equation form, so they cannot produce the
            // advertised attractor.
            spec.params = {{"a", 35.0}, {"b", 3.0}, {"c", 28.0}};
            break;
        case SystemId::qi:
            spec.params = {{"a", 35.0}, {"b", 7.0}, {"c", 10.0}};
            break;
    }
    return {spec, Eigen::Vector3d(17.6771581, 12.9313791, 43.9140433)};
}

}  // namespace chaos::dynamics
