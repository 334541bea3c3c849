#include "chaosbench/metrics.hpp"

#include <cmath>

#include "chaosbench/errors.hpp"

namespace chaos::metrics {

namespace {

void check_pair(const Trajectory& pred, const Trajectory& truth) {
    if (pred.n_steps() != truth.n_steps())
        throw InvalidInputError("metrics: prediction/truth length mismatch");
    if (pred.dim() != truth.dim())
        throw InvalidInputError("metrics: prediction/truth dimension mismatch");
    if (pred.n_steps() < 1) throw InvalidInputError("metrics: empty trajectories");
}

}  // namespace

Eigen::VectorXd rmse(const Trajectory& pred, const Trajectory& truth) {
    check_pair(pred, truth);
    const Eigen::MatrixXd diff = pred.data - truth.data;
    return (diff.array().square().colwise().mean()).sqrt().matrix().transpose();
}

double nrmse(const Trajectory& pred, const Trajectory& truth) {
    check_pair(pred, truth);
    const Eigen::VectorXd err = rmse(pred, truth);
    const Eigen::RowVectorXd mean = truth.data.colwise().mean();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < truth.dim(); ++j) {
        const double var = (truth.data.col(j).array() - mean[j]).square().mean();
        if (var == 0.0)
            throw InvalidInputError("nrmse: zero-variance truth dimension");
        acc += err[j] / std::sqrt(var);
    }
    return acc / static_cast<double>(truth.dim());
}

int valid_time(const Trajectory& pred, const Trajectory& truth, double threshold) {
    check_pair(pred, truth);
    if (!(threshold > 0.0)) throw InvalidInputError("valid_time: threshold must be positive");
    const Eigen::RowVectorXd mean = truth.data.colwise().mean();
    const double scale =
        std::sqrt((truth.data.rowwise() - mean).array().square().rowwise().sum().mean());
    if (scale == 0.0) throw InvalidInputError("valid_time: constant truth trajectory");
    for (Eigen::Index t = 0; t < pred.n_steps(); ++t) {
        const double err = (pred.data.row(t) - truth.data.row(t)).norm() / scale;
        if (err > threshold) return static_cast<int>(t);
    }
    return static_cast<int>(pred.n_steps());
}

BoxAndLobes attractor_box_and_lobes(const Trajectory& traj) {
    if (traj.n_steps() < 1) throw InvalidInputError("attractor_box_and_lobes: empty trajectory");
    BoxAndLobes out;
    out.box_min = traj.data.colwise().minCoeff();
    out.box_max = traj.data.colwise().maxCoeff();
    int changes = 0;
    int prev_sign = 0;
    for (Eigen::Index t = 0; t < traj.n_steps(); ++t) {
        const double x = traj.data(t, 0);
        const int sign = x > 0.0 ? 1 : (x < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (prev_sign != 0 && sign != prev_sign) ++changes;
        prev_sign = sign;
    }
    out.lobe_sign_changes = changes;
    return out;
}

}  // namespace chaos::metrics
