#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chaosbench/numerics.hpp"
#include "chaosbench/trajectory.hpp"

namespace chaos::ngrc {

/// NVAR hyperparameters. Defaults are the published preset
/// (k=2, s=1, p=2, beta=2.5e-6).
struct NgrcConfig {
    int delays = 2;                  // k, number of taps
    int stride = 1;                  // s, steps between taps
    int order = 2;                   // p, polynomial order of the nonlinear part
    double regularization = 2.5e-6;  // beta
    double constant_feature = 1.0;   // c
    bool predict_increment = true;   // readout targets x_{i+1}-x_i instead of x_{i+1}
    bool use_minmax_scaling = false; // NG-RC consumes raw data unless configured

    /// Minimum history needed to build one feature vector: taps reach back
    /// (k-1)*s steps from the current one.
    int min_history() const { return (delays - 1) * stride + 1; }
    /// Warm-up requirement, s*k steps.
    int warmup_steps() const { return delays * stride; }
};

/// Shape of the feature vector [c, O_lin, O_nonlin]: O_lin stacks the d
/// state components at each of the k taps; O_nonlin holds one entry per
/// unique monomial of degree `order` over the O_lin entries, enumerated as
/// lexicographic index multisets.
struct FeatureLayout {
    int input_dim = 0;  // d
    int n_lin = 0;      // d*k
    int n_nonlin = 0;
    int n_total = 0;    // 1 + n_lin + n_nonlin
    std::vector<std::vector<int>> monomials;  // sorted index multisets into O_lin

    static FeatureLayout make(int input_dim, const NgrcConfig& config);

    /// Human-readable name per feature ("const", "x[t]", "x[t-1]*z[t]", ...).
    std::vector<std::string> feature_names(const NgrcConfig& config) const;
};

/// Feature vector for the newest step of `window` (rows ordered oldest to
/// newest; at least (k-1)*s+1 rows). Pure function of its inputs.
Eigen::VectorXd build_features(const Eigen::Ref<const Eigen::MatrixXd>& window,
                               const NgrcConfig& config, const FeatureLayout& layout);

struct WeightTable {
    std::vector<std::string> feature;  // one label per row
    Eigen::MatrixXd weights;           // n_total x d, column per output dimension
};

class NgrcModel {
public:
    NgrcModel(NgrcConfig config, FeatureLayout layout) : config_(std::move(config)), layout_(std::move(layout)) {}

    const NgrcConfig& config() const { return config_; }
    const FeatureLayout& layout() const { return layout_; }
    const Eigen::MatrixXd& w_out() const { return w_out_; }  // d x n_total
    const std::optional<numerics::MinMaxScaler>& scaler() const { return scaler_; }
    bool trained() const { return trained_; }
    double train_seconds() const { return train_seconds_; }

    /// Rolls the readout forward: features from the sliding window, predict,
    /// append, slide. history_tail is in original data units and must supply
    /// at least (k-1)*s+1 rows; time stamps continue the training series.
    ForecastResult forecast(const Eigen::Ref<const Eigen::MatrixXd>& history_tail,
                            int n_steps) const;

    /// Labeled readout weights, one row per feature. Requires a trained model.
    WeightTable export_weights() const;
    void write_weights_csv(const std::filesystem::path& path) const;

    void save(const std::filesystem::path& path) const;
    static NgrcModel load(const std::filesystem::path& path);

    friend NgrcModel train(const Trajectory& series, const NgrcConfig& config, int warmup_steps);

private:
    NgrcConfig config_;
    FeatureLayout layout_;
    Eigen::MatrixXd w_out_;
    std::optional<numerics::MinMaxScaler> scaler_;
    bool trained_ = false;
    double train_seconds_ = 0.0;
    double dt_ = 0.0;
    double next_t_ = 0.0;
};

/// Ridge-fits the readout over every admissible step of the series. Steps
/// before warmup_steps (default s*k; passing less than s*k is rejected) are
/// reserved for warm-up and contribute no regression rows. Wall time is
/// recorded on the returned model.
NgrcModel train(const Trajectory& series, const NgrcConfig& config, int warmup_steps = -1);

}  // namespace chaos::ngrc
