#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <iosfwd>

namespace chaos {

/// Uniformly sampled multivariate time series. Row i holds the state at
/// time t0 + i*dt; the time stamps are derived, never stored.
struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    Eigen::MatrixXd data;  // n_steps x dim

    Eigen::Index n_steps() const { return data.rows(); }
    Eigen::Index dim() const { return data.cols(); }
    double time(Eigen::Index i) const { return t0 + static_cast<double>(i) * dt; }

    /// Rows [first, first+count) as a trajectory with shifted origin.
    Trajectory slice(Eigen::Index first, Eigen::Index count) const;
};

/// Closed-loop forecast output. When a model's prediction becomes non-finite
/// or leaves the divergence bound, the trajectory is truncated at that step
/// and the flag is set instead of propagating NaNs.
struct ForecastResult {
    Trajectory trajectory;
    bool diverged = false;
    std::size_t divergence_step = 0;  // valid only when diverged
};

/// CSV export with header `t,x,y,z` (coordinate names for 3-dimensional data,
/// x0..x{d-1} otherwise) at full round-trip precision.
void write_csv(const Trajectory& traj, std::ostream& out);
void write_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace chaos
