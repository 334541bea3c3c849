#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <utility>

#include "chaosbench/trajectory.hpp"

namespace chaos::metrics {

/// Forecast quality and cost summary for one experiment.
struct ForecastReport {
    Eigen::VectorXd rmse_per_dim;
    double nrmse = 0.0;
    int valid_time_steps = 0;
    double valid_time_seconds = 0.0;
    int lobe_sign_changes = 0;  // x-coordinate sign flips
    bool bounded = false;
    double train_wall_time_s = 0.0;
};

/// Per-dimension root-mean-square error. Lengths and dimensions must match.
Eigen::VectorXd rmse(const Trajectory& pred, const Trajectory& truth);

/// Mean over dimensions of rmse / std(truth dimension). Errors on a
/// zero-variance truth dimension.
double nrmse(const Trajectory& pred, const Trajectory& truth);

/// First step at which ||pred - truth||_2 / S exceeds the threshold, where S
/// is the RMS deviation of the truth from its mean over the whole comparison
/// window. Returns the forecast length if the threshold is never exceeded.
int valid_time(const Trajectory& pred, const Trajectory& truth, double threshold = 0.4);

struct BoxAndLobes {
    Eigen::VectorXd box_min;
    Eigen::VectorXd box_max;
    int lobe_sign_changes = 0;
};

/// Per-dimension bounding box plus the count of x-coordinate sign changes
/// (zero samples are skipped, transitions counted between nonzero signs).
BoxAndLobes attractor_box_and_lobes(const Trajectory& traj);

/// Monotonic wall time around a training call, in seconds.
template <typename Callable>
double time_training(Callable&& callable) {
    const auto start = std::chrono::steady_clock::now();
    std::forward<Callable>(callable)();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace chaos::metrics
