#pragma once

#include <Eigen/Dense>

#include "chaosbench/trajectory.hpp"

namespace chaos::numerics {

/// Tikhonov-regularized least squares min_w ||Xw - z||^2 + beta*||w||^2.
struct RidgeProblem {
    Eigen::MatrixXd features;  // n_samples x n_features
    Eigen::MatrixXd targets;   // n_samples x n_outputs
    double regularization = 0.0;
};

/// Solves the ridge problem, returning an n_features x n_outputs weight
/// matrix whose normal-equation residual (X'X + beta*I)w - X'z has max-norm
/// at most 1e-8 * (1 + ||X'z||_inf).
///
/// beta > 0 uses a Cholesky factorization of the regularized Gram matrix with
/// iterative refinement, falling back to an SVD of X if the factorization
/// fails. beta == 0 requires X to have full column rank (QR with column
/// pivoting; RankDeficiencyError otherwise).
Eigen::MatrixXd ridge_solve(const RidgeProblem& problem);

/// Per-dimension affine map onto [0,1] fitted to column-wise extrema.
/// A constant dimension (max == min) maps every value to 0.5 and
/// inverse-transforms back to that constant.
struct MinMaxScaler {
    Eigen::VectorXd per_dim_min;
    Eigen::VectorXd per_dim_max;

    Eigen::Index dim() const { return per_dim_min.size(); }
};

MinMaxScaler fit_minmax(const Eigen::Ref<const Eigen::MatrixXd>& data);
MinMaxScaler fit_minmax(const Trajectory& traj);

Eigen::MatrixXd transform(const MinMaxScaler& scaler, const Eigen::Ref<const Eigen::MatrixXd>& points);
Eigen::MatrixXd inverse_transform(const MinMaxScaler& scaler,
                                  const Eigen::Ref<const Eigen::MatrixXd>& points);

}  // namespace chaos::numerics
