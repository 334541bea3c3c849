#include "chaosbench/numerics.hpp"

#include <Eigen/SVD>

#include "chaosbench/errors.hpp"

namespace chaos::numerics {

namespace {

Eigen::MatrixXd ridge_via_svd(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z, double beta) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    Eigen::VectorXd filter(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) filter[i] = s[i] / (s[i] * s[i] + beta);
    return svd.matrixV() * filter.asDiagonal() * (svd.matrixU().transpose() * z);
}

}  // namespace

Eigen::MatrixXd ridge_solve(const RidgeProblem& problem) {
    const Eigen::MatrixXd& x = problem.features;
    const Eigen::MatrixXd& z = problem.targets;
    const double beta = problem.regularization;

    if (x.rows() < 1) throw InvalidInputError("ridge_solve: empty feature matrix");
    if (x.rows() != z.rows())
        throw InvalidInputError("ridge_solve: feature/target row mismatch");
    if (beta < 0.0) throw InvalidInputError("ridge_solve: negative regularization");
    if (!x.allFinite() || !z.allFinite())
        throw InvalidInputError("ridge_solve: non-finite input");

    if (beta == 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
        if (qr.rank() < x.cols())
            throw RankDeficiencyError("ridge_solve: rank-deficient design matrix at beta = 0");
        return qr.solve(z);
    }

    const Eigen::MatrixXd gram =
        Eigen::MatrixXd(x.transpose() * x) + beta * Eigen::MatrixXd::Identity(x.cols(), x.cols());
    const Eigen::MatrixXd rhs = x.transpose() * z;

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) return ridge_via_svd(x, z, beta);

    Eigen::MatrixXd w = llt.solve(rhs);
    // Two rounds of iterative refinement keep the normal-equation residual
    // near roundoff even when the Gram matrix is badly conditioned.
    for (int round = 0; round < 2; ++round) w += llt.solve(rhs - gram * w);

    if (!w.allFinite()) return ridge_via_svd(x, z, beta);
    return w;
}

MinMaxScaler fit_minmax(const Eigen::Ref<const Eigen::MatrixXd>& data) {
    if (data.rows() < 1) throw InvalidInputError("fit_minmax: empty data");
    MinMaxScaler scaler;
    scaler.per_dim_min = data.colwise().minCoeff();
    scaler.per_dim_max = data.colwise().maxCoeff();
    return scaler;
}

MinMaxScaler fit_minmax(const Trajectory& traj) { return fit_minmax(traj.data); }

Eigen::MatrixXd transform(const MinMaxScaler& scaler,
                          const Eigen::Ref<const Eigen::MatrixXd>& points) {
    if (points.cols() != scaler.dim())
        throw InvalidInputError("transform: dimension mismatch");
    Eigen::MatrixXd out(points.rows(), points.cols());
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
        const double lo = scaler.per_dim_min[j];
        const double span = scaler.per_dim_max[j] - lo;
        if (span == 0.0) {
            out.col(j).setConstant(0.5);
        } else {
            out.col(j) = (points.col(j).array() - lo) / span;
        }
    }
    return out;
}

Eigen::MatrixXd inverse_transform(const MinMaxScaler& scaler,
                                  const Eigen::Ref<const Eigen::MatrixXd>& points) {
    if (points.cols() != scaler.dim())
        throw InvalidInputError("inverse_transform: dimension mismatch");
    Eigen::MatrixXd out(points.rows(), points.cols());
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
        const double lo = scaler.per_dim_min[j];
        const double span = scaler.per_dim_max[j] - lo;
        if (span == 0.0) {
            out.col(j).setConstant(lo);
        } else {
            out.col(j) = lo + points.col(j).array() * span;
        }
    }
    return out;
}

}  // namespace chaos::numerics
