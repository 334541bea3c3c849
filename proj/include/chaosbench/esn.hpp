#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <filesystem>

#include "chaosbench/trajectory.hpp"

namespace chaos::esn {

/// Reservoir hyperparameters. The defaults are the desk-scale configuration;
/// paper_preset() switches n_units to the published 4000.
struct EsnConfig {
    int n_units = 1000;
    double leak_rate = 0.3;         // gamma in the leaky update
    double spectral_radius = 1.25;
    double connectivity = 0.1;      // fraction of nonzero recurrent weights
    double regularization = 1e-8;   // ridge beta for the readout
    double input_scaling = 1.0;
    double bias_scaling = 0.0;
    std::uint64_t seed = 0;

    static EsnConfig paper_preset();
};

/// |largest eigenvalue| of a sparse matrix. Up to 1024 rows this is a dense
/// eigensolve (random reservoirs often carry top moduli tied within 1e-4,
/// where vector iterations stall); above that, power iteration with a
/// two-step Krylov fit whose quadratic roots track the dominant eigenvalue
/// or complex pair. Throws InitializationError when the iteration does not
/// converge within max_matvecs.
double estimate_spectral_radius(const Eigen::SparseMatrix<double>& m, int max_matvecs = 200000,
                                double tol = 1e-10);

/// Echo State Network: fixed random input weights, sparse recurrent weights
/// rescaled to the configured spectral radius, fixed bias, tanh activation,
/// and a ridge-trained linear readout. w_in, w and bias never change after
/// construction; drive/train/forecast mutate only the reservoir state.
class EsnModel {
public:
    /// Direct construction from explicit matrices (tests, deserialization).
    EsnModel(EsnConfig config, Eigen::MatrixXd w_in, Eigen::SparseMatrix<double> w,
             Eigen::VectorXd bias);

    const EsnConfig& config() const { return config_; }
    int dim() const { return static_cast<int>(w_in_.cols()); }
    const Eigen::MatrixXd& w_in() const { return w_in_; }
    const Eigen::SparseMatrix<double>& w() const { return w_; }
    const Eigen::VectorXd& bias() const { return bias_; }
    const Eigen::MatrixXd& w_out() const { return w_out_; }  // dim x n_units, empty until trained
    const Eigen::VectorXd& reservoir_state() const { return state_; }
    bool trained() const { return trained_; }
    double train_seconds() const { return train_seconds_; }

    void set_reservoir_state(const Eigen::VectorXd& state);
    void reset_state() { state_.setZero(); }

    /// Teacher-forced run: applies the leaky update once per input row
    /// starting from the current reservoir state and returns every
    /// post-update state (n_rows x n_units). The final state is kept.
    Eigen::MatrixXd drive(const Eigen::Ref<const Eigen::MatrixXd>& inputs);

    /// Drives the reservoir over the whole series, discards the first
    /// warmup_steps states, and ridge-fits the readout mapping the state at
    /// step t to the series row t+1. Wall time spent here is recorded.
    void train_readout(const Trajectory& series, int warmup_steps);

    /// Closed loop: y = w_out * state is emitted and fed back as the next
    /// input. Predictions are in the same (scaled) units as the training
    /// series; time stamps continue the training series.
    ForecastResult forecast(int n_steps);

    void save(const std::filesystem::path& path) const;
    static EsnModel load(const std::filesystem::path& path);

private:
    EsnConfig config_;
    Eigen::MatrixXd w_in_;             // n_units x dim
    Eigen::SparseMatrix<double> w_;    // n_units x n_units
    Eigen::VectorXd bias_;             // n_units
    Eigen::MatrixXd w_out_;            // dim x n_units
    Eigen::VectorXd state_;            // n_units
    bool trained_ = false;
    double train_seconds_ = 0.0;
    double dt_ = 0.0;
    double next_t_ = 0.0;

    void step(const Eigen::Ref<const Eigen::VectorXd>& input);
};

/// Builds the random reservoir for the given configuration and input
/// dimension: w_in entries are +-input_scaling with equal probability, bias
/// is uniform in [-bias_scaling, bias_scaling], and w is a Bernoulli
/// (connectivity) mask of uniform [-1,1] values rescaled so its measured
/// spectral radius equals config.spectral_radius. Deterministic per seed.
EsnModel init_reservoir(const EsnConfig& config, int dim);

}  // namespace chaos::esn
