#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "chaosbench/trajectory.hpp"

namespace chaos::dynamics {

enum class SystemId { lorenz, rossler, chen, qi };

std::string to_string(SystemId id);
SystemId system_from_string(const std::string& name);

/// A chaotic ODE identifier plus its parameter set. All four benchmark
/// systems are three-dimensional.
struct SystemSpec {
    SystemId system_id = SystemId::lorenz;
    std::map<std::string, double> params;
    int dim = 3;
};

/// Process noise on the right-hand side: magnitude multiplies a unit
/// Gaussian draw per state component. magnitude == 0 behaves exactly like
/// no noise at all.
struct NoiseConfig {
    double magnitude = 0.0;
    std::uint64_t seed = 0;
};

/// Integrator selection. rk23 is adaptive Bogacki-Shampine with dense output
/// sampled at exact multiples of dt; rk4 is fixed-step at dt. Noisy runs
/// always use fixed-step stepping so one Gaussian draw per component can be
/// held constant across a step's internal stages.
struct IntegratorOptions {
    enum class Method { rk23, rk4 };
    Method method = Method::rk23;
    double rtol = 1e-6;
    double atol = 1e-9;
    double divergence_bound = 1e6;  // on the state 2-norm
};

/// Right-hand side f(state) of the selected system, evaluated exactly as
/// written. Throws InvalidSpecError on a missing or non-finite parameter.
Eigen::Vector3d eval_rhs(const SystemSpec& spec, const Eigen::Vector3d& state);

/// Integrate n_steps samples spaced dt apart starting from x0 (row 0 is x0
/// itself). Deterministic for identical inputs including the noise seed.
/// Throws DivergenceError with the offending sample index if the state norm
/// exceeds the divergence bound or becomes non-finite.
Trajectory integrate(const SystemSpec& spec, const Eigen::Vector3d& x0, double dt, int n_steps,
                     const std::optional<NoiseConfig>& noise = std::nullopt,
                     const IntegratorOptions& options = {});

/// Benchmark parameter preset and the shared initial condition
/// (17.6771581, 12.9313791, 43.9140433).
std::pair<SystemSpec, Eigen::Vector3d> make_benchmark(SystemId id);

}  // namespace chaos::dynamics
