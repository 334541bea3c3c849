#include "chaosbench/ngrc.hpp"

#include <chrono>
#include <fstream>

#include "chaosbench/errors.hpp"
#include "chaosbench/serialize.hpp"

namespace chaos::ngrc {

namespace {

void validate(const NgrcConfig& cfg) {
    if (cfg.delays < 1) throw InvalidInputError("ngrc: delays (k) must be at least 1");
    if (cfg.stride < 1) throw InvalidInputError("ngrc: stride (s) must be at least 1");
    if (cfg.order < 1) throw InvalidInputError("ngrc: order (p) must be at least 1");
    if (cfg.regularization < 0.0) throw InvalidInputError("ngrc: negative regularization");
}

std::string dim_name(int d, int j) {
    if (d == 3) return std::string(1, "xyz"[j]);
    return "x" + std::to_string(j);
}

}  // namespace

FeatureLayout FeatureLayout::make(int input_dim, const NgrcConfig& config) {
    validate(config);
    if (input_dim < 1) throw InvalidInputError("ngrc: input dimension must be positive");

    FeatureLayout layout;
    layout.input_dim = input_dim;
    layout.n_lin = input_dim * config.delays;

    // Unique monomials of degree exactly p over the linear features:
    // non-decreasing index tuples, lexicographic. Order 1 adds nothing
    // beyond O_lin, so its nonlinear block is empty.
    if (config.order >= 2) {
        std::vector<int> idx(config.order, 0);
        while (true) {
            layout.monomials.push_back(idx);
            int pos = config.order - 1;
            while (pos >= 0 && idx[pos] == layout.n_lin - 1) --pos;
            if (pos < 0) break;
            const int next = idx[pos] + 1;
            for (int i = pos; i < config.order; ++i) idx[i] = next;
        }
    }
    layout.n_nonlin = static_cast<int>(layout.monomials.size());
    layout.n_total = 1 + layout.n_lin + layout.n_nonlin;
    return layout;
}

std::vector<std::string> FeatureLayout::feature_names(const NgrcConfig& config) const {
    auto lin_name = [&](int l) {
        const int tap = l / input_dim;
        const int j = l % input_dim;
        std::string name = dim_name(input_dim, j);
        if (tap == 0) return name + "[t]";
        return name + "[t-" + std::to_string(tap * config.stride) + "]";
    };
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n_total));
    names.push_back("const");
    for (int l = 0; l < n_lin; ++l) names.push_back(lin_name(l));
    for (const auto& mono : monomials) {
        std::string name;
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (i) name += '*';
            name += lin_name(mono[i]);
        }
        names.push_back(name);
    }
    return names;
}

Eigen::VectorXd build_features(const Eigen::Ref<const Eigen::MatrixXd>& window,
                               const NgrcConfig& config, const FeatureLayout& layout) {
    if (window.cols() != layout.input_dim)
        throw InvalidInputError("build_features: dimension mismatch");
    if (window.rows() < config.min_history())
        throw InsufficientDataError("build_features: window shorter than (k-1)*s + 1 rows");

    const Eigen::Index last = window.rows() - 1;
    Eigen::VectorXd features(layout.n_total);
    features[0] = config.constant_feature;
    Eigen::VectorXd lin(layout.n_lin);
    for (int tap = 0; tap < config.delays; ++tap)
        lin.segment(tap * layout.input_dim, layout.input_dim) =
            window.row(last - static_cast<Eigen::Index>(tap) * config.stride).transpose();
    features.segment(1, layout.n_lin) = lin;
    for (int q = 0; q < layout.n_nonlin; ++q) {
        double prod = 1.0;
        for (int idx : layout.monomials[q]) prod *= lin[idx];
        features[1 + layout.n_lin + q] = prod;
    }
    return features;
}

NgrcModel train(const Trajectory& series, const NgrcConfig& config, int warmup_steps) {
    validate(config);
    const FeatureLayout layout = FeatureLayout::make(static_cast<int>(series.dim()), config);
    const int warmup = warmup_steps < 0 ? config.warmup_steps() : warmup_steps;
    if (warmup < config.warmup_steps())
        throw InsufficientDataError("ngrc train: warm-up shorter than s*k steps");
    const Eigen::Index n = series.n_steps();
    if (n < warmup + 2)
        throw InsufficientDataError("ngrc train: need at least warm-up + 2 rows");

    const auto start = std::chrono::steady_clock::now();

    NgrcModel model(config, layout);
    Eigen::MatrixXd data = series.data;
    if (config.use_minmax_scaling) {
        model.scaler_ = numerics::fit_minmax(data);
        data = numerics::transform(*model.scaler_, data);
    }

    const Eigen::Index pairs = n - 1 - warmup;
    numerics::RidgeProblem problem;
    problem.features.resize(pairs, layout.n_total);
    problem.targets.resize(pairs, layout.input_dim);
    for (Eigen::Index i = warmup; i < n - 1; ++i) {
        problem.features.row(i - warmup) =
            build_features(data.topRows(i + 1), config, layout).transpose();
        if (config.predict_increment) {
            problem.targets.row(i - warmup) = data.row(i + 1) - data.row(i);
        } else {
            problem.targets.row(i - warmup) = data.row(i + 1);
        }
    }
    problem.regularization = config.regularization;
    model.w_out_ = numerics::ridge_solve(problem).transpose();

    model.train_seconds_ =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    model.trained_ = true;
    model.dt_ = series.dt;
    model.next_t_ = series.time(n);
    return model;
}

ForecastResult NgrcModel::forecast(const Eigen::Ref<const Eigen::MatrixXd>& history_tail,
                                   int n_steps) const {
    if (!trained_) throw InvalidInputError("ngrc forecast: model is not trained");
    if (n_steps < 0) throw InvalidInputError("ngrc forecast: negative horizon");
    const int hist = config_.min_history();
    if (history_tail.cols() != layout_.input_dim)
        throw InvalidInputError("ngrc forecast: dimension mismatch");
    if (history_tail.rows() < hist)
        throw InsufficientDataError("ngrc forecast: history shorter than (k-1)*s + 1 rows");

    Eigen::MatrixXd window = history_tail.bottomRows(hist);
    if (scaler_) window = numerics::transform(*scaler_, window);

    ForecastResult result;
    result.trajectory.t0 = next_t_;
    result.trajectory.dt = dt_;
    result.trajectory.data.resize(n_steps, layout_.input_dim);
    constexpr double kBound = 1e6;
    for (int t = 0; t < n_steps; ++t) {
        const Eigen::VectorXd features = build_features(window, config_, layout_);
        Eigen::VectorXd pred = w_out_ * features;
        if (config_.predict_increment) pred += window.row(window.rows() - 1).transpose();
        if (!pred.allFinite() || pred.norm() > kBound) {
            result.diverged = true;
            result.divergence_step = static_cast<std::size_t>(t);
            result.trajectory.data.conservativeResize(t, Eigen::NoChange);
            if (scaler_)
                result.trajectory.data =
                    numerics::inverse_transform(*scaler_, result.trajectory.data);
            return result;
        }
        result.trajectory.data.row(t) = pred.transpose();
        if (hist > 1) window.topRows(hist - 1) = window.bottomRows(hist - 1).eval();
        window.row(hist - 1) = pred.transpose();
    }
    if (scaler_)
        result.trajectory.data = numerics::inverse_transform(*scaler_, result.trajectory.data);
    return result;
}

WeightTable NgrcModel::export_weights() const {
    if (!trained_) throw InvalidInputError("ngrc export_weights: model is not trained");
    WeightTable table;
    table.feature = layout_.feature_names(config_);
    table.weights = w_out_.transpose();  // n_total x d
    return table;
}

void NgrcModel::write_weights_csv(const std::filesystem::path& path) const {
    const WeightTable table = export_weights();
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "feature";
    for (int j = 0; j < layout_.input_dim; ++j) out << ",dim_" << dim_name(layout_.input_dim, j);
    out << '\n';
    for (Eigen::Index i = 0; i < table.weights.rows(); ++i) {
        out << table.feature[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < table.weights.cols(); ++j)
            out << ',' << format_double(table.weights(i, j));
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

void NgrcModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    io::write_magic(out, "CBNGRC1\n");
    io::write_u64(out, static_cast<std::uint64_t>(layout_.input_dim));
    io::write_u64(out, static_cast<std::uint64_t>(config_.delays));
    io::write_u64(out, static_cast<std::uint64_t>(config_.stride));
    io::write_u64(out, static_cast<std::uint64_t>(config_.order));
    io::write_f64(out, config_.regularization);
    io::write_f64(out, config_.constant_feature);
    io::write_u64(out, config_.predict_increment ? 1 : 0);
    io::write_u64(out, config_.use_minmax_scaling ? 1 : 0);
    io::write_u64(out, trained_ ? 1 : 0);
    io::write_matrix(out, w_out_);
    io::write_u64(out, scaler_ ? 1 : 0);
    if (scaler_) {
        io::write_vector(out, scaler_->per_dim_min);
        io::write_vector(out, scaler_->per_dim_max);
    }
    io::write_f64(out, train_seconds_);
    io::write_f64(out, dt_);
    io::write_f64(out, next_t_);
    if (!out) throw IoError("failed writing " + path.string());
}

NgrcModel NgrcModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    io::expect_magic(in, "CBNGRC1\n");
    const int input_dim = static_cast<int>(io::read_u64(in));
    NgrcConfig cfg;
    cfg.delays = static_cast<int>(io::read_u64(in));
    cfg.stride = static_cast<int>(io::read_u64(in));
    cfg.order = static_cast<int>(io::read_u64(in));
    cfg.regularization = io::read_f64(in);
    cfg.constant_feature = io::read_f64(in);
    cfg.predict_increment = io::read_u64(in) != 0;
    cfg.use_minmax_scaling = io::read_u64(in) != 0;
    NgrcModel model(cfg, FeatureLayout::make(input_dim, cfg));
    model.trained_ = io::read_u64(in) != 0;
    model.w_out_ = io::read_matrix(in);
    if (io::read_u64(in) != 0) {
        numerics::MinMaxScaler scaler;
        scaler.per_dim_min = io::read_vector(in);
        scaler.per_dim_max = io::read_vector(in);
        model.scaler_ = scaler;
    }
    model.train_seconds_ = io::read_f64(in);
    model.dt_ = io::read_f64(in);
    model.next_t_ = io::read_f64(in);
    return model;
}

}  // namespace chaos::ngrc
