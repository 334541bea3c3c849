#include "chaosbench/esn.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <complex>
#include <fstream>
#include <random>
#include <vector>

#include "chaosbench/errors.hpp"
#include "chaosbench/numerics.hpp"
#include "chaosbench/serialize.hpp"

namespace chaos::esn {

EsnConfig EsnConfig::paper_preset() {
    EsnConfig cfg;
    cfg.n_units = 4000;
    return cfg;
}

namespace {

void validate(const EsnConfig& cfg) {
    if (cfg.n_units < 1) throw InvalidInputError("esn: n_units must be positive");
    if (!(cfg.leak_rate > 0.0 && cfg.leak_rate <= 1.0))
        throw InvalidInputError("esn: leak_rate must be in (0, 1]");
    if (!(cfg.spectral_radius > 0.0)) throw InvalidInputError("esn: spectral_radius must be positive");
    if (!(cfg.connectivity > 0.0 && cfg.connectivity <= 1.0))
        throw InvalidInputError("esn: connectivity must be in (0, 1]");
    if (cfg.regularization < 0.0) throw InvalidInputError("esn: negative regularization");
    if (cfg.bias_scaling < 0.0) throw InvalidInputError("esn: negative bias_scaling");
}

}  // namespace

double estimate_spectral_radius(const Eigen::SparseMatrix<double>& m, int max_matvecs, double tol) {
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw InvalidInputError("estimate_spectral_radius: matrix not square");
    if (n == 1) return std::abs(m.coeff(0, 0));

    if (n <= 1024) {
        // Random reservoirs routinely carry several eigenvalue moduli tied
        // within 1e-4, where vector iterations stall; at these sizes the
        // dense solve is cheap and exact.
        Eigen::EigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(m), false);
        if (eig.info() != Eigen::Success)
            throw InitializationError("spectral radius estimate: dense eigensolve failed");
        return eig.eigenvalues().cwiseAbs().maxCoeff();
    }

    // Power iteration with a two-step Krylov fit. Each iteration solves the
    // least-squares recurrence A^2 v ~ a*(A v) + b*v over the last three
    // iterates; the roots of z^2 - a z - b then approximate the top TWO
    // eigenvalues, so a real dominant eigenvalue, a complex pair, and a tight
    // top-two cluster all converge at the |lambda_3 / lambda_1| rate. No
    // restarts, hence no Ritz locking.
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::VectorXd v0(n);
    for (Eigen::Index i = 0; i < n; ++i) v0[i] = unit(rng);
    v0.normalize();

    Eigen::VectorXd v1 = m * v0;
    int matvecs = 1;
    double r1 = v1.norm();
    if (r1 == 0.0) return 0.0;
    v1 /= r1;

    double estimate = r1;
    // Estimates this many iterations apart must agree for the plateau exit;
    // the root is accurate well before the subspace residual fully decays.
    constexpr int kWindow = 200;
    std::vector<double> history;
    while (matvecs < max_matvecs) {
        Eigen::VectorXd v2 = m * v1;
        ++matvecs;
        const double r2 = v2.norm();
        if (r2 == 0.0) return 0.0;  // Krylov space hit the kernel
        v2 /= r2;

        // min_{a,b} || r1*r2*v2 - a*(r1*v1) - b*v0 ||
        Eigen::MatrixXd basis(n, 2);
        basis.col(0) = r1 * v1;
        basis.col(1) = v0;
        const Eigen::Vector2d coeff =
            basis.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve((r1 * r2) * v2);
        const double residual = (r1 * r2 * v2 - basis * coeff).norm() / (r1 * r2);

        const double a = coeff[0];
        const double b = coeff[1];
        const double disc = a * a / 4.0 + b;
        double radius;
        if (disc >= 0.0) {
            const double root = std::sqrt(disc);
            radius = std::max(std::abs(a / 2.0 + root), std::abs(a / 2.0 - root));
        } else {
            radius = std::sqrt(a * a / 4.0 - disc);  // complex pair modulus
        }
        if (!std::isfinite(radius))
            throw InitializationError("spectral radius estimate became non-finite");

        estimate = radius;
        history.push_back(radius);
        const std::size_t k = history.size();
        const bool plateau =
            k > kWindow &&
            std::abs(history[k - 1] - history[k - 1 - kWindow]) <= 1e-9 * std::abs(estimate);
        if (residual <= tol || plateau) return estimate;

        v0 = v1;
        v1 = v2;
        r1 = r2;
    }
    throw InitializationError("spectral radius estimate did not converge within the matvec cap");
}

EsnModel::EsnModel(EsnConfig config, Eigen::MatrixXd w_in, Eigen::SparseMatrix<double> w,
                   Eigen::VectorXd bias)
    : config_(std::move(config)), w_in_(std::move(w_in)), w_(std::move(w)), bias_(std::move(bias)) {
    if (w_.rows() != w_.cols() || w_.rows() != w_in_.rows() || bias_.size() != w_.rows())
        throw InvalidInputError("esn: inconsistent matrix shapes");
    state_ = Eigen::VectorXd::Zero(w_.rows());
}

EsnModel init_reservoir(const EsnConfig& config, int dim) {
    validate(config);
    if (dim < 1) throw InvalidInputError("esn: input dimension must be positive");
    const int n = config.n_units;

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit01(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);

    // Input weights: +-input_scaling signs. With data scaled to [0,1] the
    // sign-balanced dense map keeps tanh in its active range.
    Eigen::MatrixXd w_in(n, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim; ++j)
            w_in(i, j) = (unit01(rng) < 0.5 ? -1.0 : 1.0) * config.input_scaling;

    Eigen::VectorXd bias = Eigen::VectorXd::Zero(n);
    if (config.bias_scaling > 0.0)
        for (int i = 0; i < n; ++i) bias[i] = config.bias_scaling * sym(rng);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(config.connectivity * n * n * 1.1) + 16);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (unit01(rng) < config.connectivity) triplets.emplace_back(i, j, sym(rng));
    Eigen::SparseMatrix<double> w(n, n);
    w.setFromTriplets(triplets.begin(), triplets.end());

    double measured;
    try {
        measured = estimate_spectral_radius(w);
    } catch (const InitializationError& e) {
        throw InitializationError(std::string("init_reservoir: ") + e.what());
    }
    if (!(measured > 0.0) || !std::isfinite(measured))
        throw InitializationError("init_reservoir: reservoir matrix has zero spectral radius");
    w *= config.spectral_radius / measured;

    return EsnModel(config, std::move(w_in), std::move(w), std::move(bias));
}

void EsnModel::set_reservoir_state(const Eigen::VectorXd& state) {
    if (state.size() != state_.size()) throw InvalidInputError("esn: reservoir state size mismatch");
    state_ = state;
}

void EsnModel::step(const Eigen::Ref<const Eigen::VectorXd>& input) {
    const double g = config_.leak_rate;
    state_ = (1.0 - g) * state_ +
             g * (w_ * state_ + w_in_ * input + bias_).array().tanh().matrix();
}

Eigen::MatrixXd EsnModel::drive(const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
    if (inputs.cols() != w_in_.cols()) throw InvalidInputError("esn drive: input dimension mismatch");
    Eigen::MatrixXd states(inputs.rows(), state_.size());
    for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
        step(inputs.row(t).transpose());
        if (!state_.allFinite())
            throw DivergenceError("esn drive: reservoir state became non-finite",
                                  static_cast<std::size_t>(t));
        states.row(t) = state_.transpose();
    }
    return states;
}

void EsnModel::train_readout(const Trajectory& series, int warmup_steps) {
    const Eigen::Index n = series.n_steps();
    if (warmup_steps < 0) throw InvalidInputError("esn train: negative warmup");
    if (n < warmup_steps + 2)
        throw InsufficientDataError("esn train: need more than warmup_steps + 1 rows");

    const auto start = std::chrono::steady_clock::now();
    const Eigen::MatrixXd states = drive(series.data);
    const Eigen::Index pairs = n - 1 - warmup_steps;
    numerics::RidgeProblem problem;
    problem.features = states.middleRows(warmup_steps, pairs);
    problem.targets = series.data.middleRows(warmup_steps + 1, pairs);
    problem.regularization = config_.regularization;
    w_out_ = numerics::ridge_solve(problem).transpose();
    train_seconds_ =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    trained_ = true;
    dt_ = series.dt;
    next_t_ = series.time(n);  // the reservoir state sits one step past the series
}

ForecastResult EsnModel::forecast(int n_steps) {
    if (!trained_) throw InvalidInputError("esn forecast: model is not trained");
    if (n_steps < 0) throw InvalidInputError("esn forecast: negative horizon");

    ForecastResult result;
    result.trajectory.t0 = next_t_;
    result.trajectory.dt = dt_;
    result.trajectory.data.resize(n_steps, w_out_.rows());
    constexpr double kBound = 1e6;
    for (int t = 0; t < n_steps; ++t) {
        const Eigen::VectorXd y = w_out_ * state_;
        if (!y.allFinite() || y.norm() > kBound) {
            result.diverged = true;
            result.divergence_step = static_cast<std::size_t>(t);
            result.trajectory.data.conservativeResize(t, Eigen::NoChange);
            return result;
        }
        result.trajectory.data.row(t) = y.transpose();
        step(y);
    }
    return result;
}

void EsnModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    io::write_magic(out, "CBESN1\n");
    io::write_u64(out, config_.seed);
    io::write_u64(out, static_cast<std::uint64_t>(config_.n_units));
    io::write_f64(out, config_.leak_rate);
    io::write_f64(out, config_.spectral_radius);
    io::write_f64(out, config_.connectivity);
    io::write_f64(out, config_.regularization);
    io::write_f64(out, config_.input_scaling);
    io::write_f64(out, config_.bias_scaling);
    io::write_matrix(out, w_in_);
    io::write_sparse(out, w_);
    io::write_vector(out, bias_);
    io::write_u64(out, trained_ ? 1 : 0);
    io::write_matrix(out, w_out_);
    io::write_vector(out, state_);
    io::write_f64(out, train_seconds_);
    io::write_f64(out, dt_);
    io::write_f64(out, next_t_);
    if (!out) throw IoError("failed writing " + path.string());
}

EsnModel EsnModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    io::expect_magic(in, "CBESN1\n");
    EsnConfig cfg;
    cfg.seed = io::read_u64(in);
    cfg.n_units = static_cast<int>(io::read_u64(in));
    cfg.leak_rate = io::read_f64(in);
    cfg.spectral_radius = io::read_f64(in);
    cfg.connectivity = io::read_f64(in);
    cfg.regularization = io::read_f64(in);
    cfg.input_scaling = io::read_f64(in);
    cfg.bias_scaling = io::read_f64(in);
    Eigen::MatrixXd w_in = io::read_matrix(in);
    Eigen::SparseMatrix<double> w = io::read_sparse(in);
    Eigen::VectorXd bias = io::read_vector(in);
    EsnModel model(cfg, std::move(w_in), std::move(w), std::move(bias));
    model.trained_ = io::read_u64(in) != 0;
    model.w_out_ = io::read_matrix(in);
    model.state_ = io::read_vector(in);
    model.train_seconds_ = io::read_f64(in);
    model.dt_ = io::read_f64(in);
    model.next_t_ = io::read_f64(in);
    return model;
}

}  // namespace chaos::esn
