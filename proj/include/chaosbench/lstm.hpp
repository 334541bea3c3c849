#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "chaosbench/trajectory.hpp"

namespace chaos::lstm {

/// Minimal single-layer LSTM with a linear head, trained one-step-ahead.
/// Defaults follow the published setup (input 3, hidden 16, 300 epochs);
/// window length, learning rate and batch size are the recorded choices for
/// details the source protocol leaves open.
struct LstmConfig {
    int input_dim = 3;
    int hidden_size = 16;
    int epochs = 300;
    int window_length = 16;
    double learning_rate = 1e-3;
    int batch_size = 32;
    std::uint64_t seed = 0;
    double grad_clip_norm = 5.0;  // global-norm clip on the BPTT gradient

    static LstmConfig paper_preset();
};

/// Gate weights (W: h x d, U: h x h, b: h) plus the linear output head.
struct LstmParams {
    Eigen::MatrixXd w_f, w_i, w_o, w_c;
    Eigen::MatrixXd u_f, u_i, u_o, u_c;
    Eigen::VectorXd b_f, b_i, b_o, b_c;
    Eigen::MatrixXd w_head;  // d x h
    Eigen::VectorXd b_head;  // d

    /// uniform(-1/sqrt(h), 1/sqrt(h)) matrices, zero biases, +1 on the
    /// forget-gate bias. Deterministic per seed.
    static LstmParams init(const LstmConfig& config);

    int hidden() const { return static_cast<int>(u_f.rows()); }
    int input_dim() const { return static_cast<int>(w_f.cols()); }
    bool all_finite() const;
};

/// Activations retained for backpropagation through time.
struct GateCache {
    Eigen::VectorXd x, h_prev, c_prev;
    Eigen::VectorXd f, i, o, ctil, c, tanh_c;
};

struct CellOutput {
    Eigen::VectorXd h, c;
    GateCache cache;
};

/// One forward pass of the gated cell:
///   f,i,o = logistic(Wx + Uh + b),  ctil = tanh(Wx + Uh + b)
///   c = f.*c_prev + i.*ctil,        h = o.*tanh(c)
CellOutput forward_cell(const LstmParams& params, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev);

/// Runs the cell over the window rows from zero state and applies the head:
/// prediction = w_head * h_L + b_head.
Eigen::VectorXd forward_sequence(const LstmParams& params,
                                 const Eigen::Ref<const Eigen::MatrixXd>& window);

/// Trained model plus its training record.
struct LstmModel {
    LstmConfig config;
    LstmParams params;
    std::vector<double> loss_curve;  // mean per-sample MSE per epoch
    double train_seconds = 0.0;
    double dt = 0.0;
    double next_t = 0.0;

    void save(const std::filesystem::path& path) const;
    static LstmModel load(const std::filesystem::path& path);
    void write_loss_csv(const std::filesystem::path& path) const;
};

/// Minimizes the one-step-ahead MSE over all admissible windows with
/// mini-batch Adam. The series is expected in scaled units. Throws
/// TrainingError with the epoch index if the loss becomes non-finite.
LstmModel train(const Trajectory& series, const LstmConfig& config);

/// Closed-loop rollout from the seed window (scaled units, window_length
/// rows): predict, append, slide.
ForecastResult forecast(const LstmModel& model, const Eigen::Ref<const Eigen::MatrixXd>& seed_window,
                        int n_steps);

/// Mean-over-dims squared error of forward_sequence(window) against target,
/// with its analytic BPTT gradient.
std::pair<double, LstmParams> loss_and_gradient(const LstmParams& params,
                                                const Eigen::Ref<const Eigen::MatrixXd>& window,
                                                const Eigen::VectorXd& target);

/// Compares analytic BPTT gradients of the single-window MSE loss against
/// central finite differences (step 1e-5) for every parameter. Returns the
/// largest |analytic - numeric| relative to the gradient's overall inf-norm.
double gradient_check(const LstmParams& params, const Eigen::Ref<const Eigen::MatrixXd>& window,
                      const Eigen::VectorXd& target);

}  // namespace chaos::lstm
