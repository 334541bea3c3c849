#include "chaosbench/lstm.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "chaosbench/errors.hpp"
#include "chaosbench/serialize.hpp"

namespace chaos::lstm {

namespace {

Eigen::MatrixXd logistic(const Eigen::MatrixXd& a) {
    return (1.0 / (1.0 + (-a.array()).exp())).matrix();
}

/// The ten parameter tensors in a fixed order, for uniform iteration by the
/// optimizer and the gradient checker. Biases are viewed as 1-column blocks.
struct ParamRefs {
    std::vector<Eigen::Map<Eigen::VectorXd>> flat;
    std::vector<const char*> names;

    explicit ParamRefs(LstmParams& p) {
        auto add = [&](Eigen::MatrixXd& m, const char* name) {
            flat.emplace_back(m.data(), m.size());
            names.push_back(name);
        };
        auto addv = [&](Eigen::VectorXd& v, const char* name) {
            flat.emplace_back(v.data(), v.size());
            names.push_back(name);
        };
        add(p.w_f, "w_f"); add(p.w_i, "w_i"); add(p.w_o, "w_o"); add(p.w_c, "w_c");
        add(p.u_f, "u_f"); add(p.u_i, "u_i"); add(p.u_o, "u_o"); add(p.u_c, "u_c");
        addv(p.b_f, "b_f"); addv(p.b_i, "b_i"); addv(p.b_o, "b_o"); addv(p.b_c, "b_c");
        add(p.w_head, "w_head"); addv(p.b_head, "b_head");
    }
};

LstmParams zeros_like(const LstmParams& p) {
    LstmParams g;
    g.w_f = Eigen::MatrixXd::Zero(p.w_f.rows(), p.w_f.cols());
    g.w_i = g.w_f; g.w_o = g.w_f; g.w_c = g.w_f;
    g.u_f = Eigen::MatrixXd::Zero(p.u_f.rows(), p.u_f.cols());
    g.u_i = g.u_f; g.u_o = g.u_f; g.u_c = g.u_f;
    g.b_f = Eigen::VectorXd::Zero(p.b_f.size());
    g.b_i = g.b_f; g.b_o = g.b_f; g.b_c = g.b_f;
    g.w_head = Eigen::MatrixXd::Zero(p.w_head.rows(), p.w_head.cols());
    g.b_head = Eigen::VectorXd::Zero(p.b_head.size());
    return g;
}

/// Per-step activations for a whole mini-batch (columns are samples).
struct BatchCache {
    std::vector<Eigen::MatrixXd> x, h_prev, c_prev, f, i, o, ctil, c, tanh_c;
};

/// Batched forward over L steps from zero state. Returns the head output
/// (d x batch) and fills the cache when requested.
Eigen::MatrixXd forward_batch(const LstmParams& p, const std::vector<Eigen::MatrixXd>& xs,
                              BatchCache* cache) {
    const int h = p.hidden();
    const Eigen::Index batch = xs.empty() ? 0 : xs.front().cols();
    Eigen::MatrixXd hs = Eigen::MatrixXd::Zero(h, batch);
    Eigen::MatrixXd cs = Eigen::MatrixXd::Zero(h, batch);
    for (const Eigen::MatrixXd& x : xs) {
        Eigen::MatrixXd f = logistic((p.w_f * x + p.u_f * hs).colwise() + p.b_f);
        Eigen::MatrixXd i = logistic((p.w_i * x + p.u_i * hs).colwise() + p.b_i);
        Eigen::MatrixXd o = logistic((p.w_o * x + p.u_o * hs).colwise() + p.b_o);
        Eigen::MatrixXd ctil = ((p.w_c * x + p.u_c * hs).colwise() + p.b_c).array().tanh();
        Eigen::MatrixXd c = f.cwiseProduct(cs) + i.cwiseProduct(ctil);
        Eigen::MatrixXd tc = c.array().tanh();
        Eigen::MatrixXd hn = o.cwiseProduct(tc);
        if (cache) {
            cache->x.push_back(x);
            cache->h_prev.push_back(hs);
            cache->c_prev.push_back(cs);
            cache->f.push_back(f);
            cache->i.push_back(i);
            cache->o.push_back(o);
            cache->ctil.push_back(ctil);
            cache->c.push_back(c);
            cache->tanh_c.push_back(tc);
        }
        hs = std::move(hn);
        cs = std::move(c);
    }
    return (p.w_head * hs).colwise() + p.b_head;
}

/// BPTT for the mean-over-samples, mean-over-dims squared error. residual is
/// prediction - target (d x batch).
LstmParams backward_batch(const LstmParams& p, const BatchCache& cache,
                          const Eigen::MatrixXd& residual) {
    const Eigen::Index batch = residual.cols();
    const double d = static_cast<double>(residual.rows());
    LstmParams g = zeros_like(p);

    const Eigen::MatrixXd dpred = (2.0 / (d * static_cast<double>(batch))) * residual;
    const Eigen::MatrixXd& h_last =
        cache.o.back().cwiseProduct(cache.tanh_c.back());
    g.w_head = dpred * h_last.transpose();
    g.b_head = dpred.rowwise().sum();

    Eigen::MatrixXd dh = p.w_head.transpose() * dpred;
    Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(p.hidden(), batch);
    for (int t = static_cast<int>(cache.x.size()) - 1; t >= 0; --t) {
        const Eigen::MatrixXd& f = cache.f[t];
        const Eigen::MatrixXd& i = cache.i[t];
        const Eigen::MatrixXd& o = cache.o[t];
        const Eigen::MatrixXd& ctil = cache.ctil[t];
        const Eigen::MatrixXd& tc = cache.tanh_c[t];

        const Eigen::MatrixXd dout = dh.cwiseProduct(tc);
        dc += dh.cwiseProduct(o).cwiseProduct(
            (1.0 - tc.array().square()).matrix());
        const Eigen::MatrixXd dctil = dc.cwiseProduct(i);
        const Eigen::MatrixXd din = dc.cwiseProduct(ctil);
        const Eigen::MatrixXd df = dc.cwiseProduct(cache.c_prev[t]);

        const Eigen::MatrixXd da_f = df.cwiseProduct(f).cwiseProduct((1.0 - f.array()).matrix());
        const Eigen::MatrixXd da_i = din.cwiseProduct(i).cwiseProduct((1.0 - i.array()).matrix());
        const Eigen::MatrixXd da_o = dout.cwiseProduct(o).cwiseProduct((1.0 - o.array()).matrix());
        const Eigen::MatrixXd da_c = dctil.cwiseProduct((1.0 - ctil.array().square()).matrix());

        const Eigen::MatrixXd& x = cache.x[t];
        const Eigen::MatrixXd& h_prev = cache.h_prev[t];
        g.w_f += da_f * x.transpose();
        g.w_i += da_i * x.transpose();
        g.w_o += da_o * x.transpose();
        g.w_c += da_c * x.transpose();
        g.u_f += da_f * h_prev.transpose();
        g.u_i += da_i * h_prev.transpose();
        g.u_o += da_o * h_prev.transpose();
        g.u_c += da_c * h_prev.transpose();
        g.b_f += da_f.rowwise().sum();
        g.b_i += da_i.rowwise().sum();
        g.b_o += da_o.rowwise().sum();
        g.b_c += da_c.rowwise().sum();

        dh = p.u_f.transpose() * da_f + p.u_i.transpose() * da_i + p.u_o.transpose() * da_o +
             p.u_c.transpose() * da_c;
        dc = dc.cwiseProduct(f);
    }
    return g;
}

struct Adam {
    double lr, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    int t = 0;
    std::vector<Eigen::VectorXd> m, v;

    Adam(double lr_, LstmParams& p) : lr(lr_) {
        ParamRefs refs(p);
        for (auto& block : refs.flat) {
            m.push_back(Eigen::VectorXd::Zero(block.size()));
            v.push_back(Eigen::VectorXd::Zero(block.size()));
        }
    }

    void step(LstmParams& p, LstmParams& grads, double clip_norm) {
        ParamRefs pr(p);
        ParamRefs gr(grads);
        double sq = 0.0;
        for (auto& g : gr.flat) sq += g.squaredNorm();
        const double norm = std::sqrt(sq);
        if (clip_norm > 0.0 && norm > clip_norm) {
            const double scale = clip_norm / norm;
            for (auto& g : gr.flat) g *= scale;
        }
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, t);
        const double bc2 = 1.0 - std::pow(beta2, t);
        for (std::size_t k = 0; k < pr.flat.size(); ++k) {
            m[k] = beta1 * m[k] + (1.0 - beta1) * gr.flat[k];
            v[k] = beta2 * v[k] + (1.0 - beta2) * gr.flat[k].cwiseProduct(gr.flat[k]);
            pr.flat[k] -= (lr * (m[k] / bc1).array() / ((v[k] / bc2).array().sqrt() + eps)).matrix();
        }
    }
};

}  // namespace

LstmConfig LstmConfig::paper_preset() { return LstmConfig{}; }

LstmParams LstmParams::init(const LstmConfig& config) {
    if (config.hidden_size < 1 || config.input_dim < 1)
        throw InvalidInputError("lstm: hidden_size and input_dim must be positive");
    const int h = config.hidden_size;
    const int d = config.input_dim;
    const double bound = 1.0 / std::sqrt(static_cast<double>(h));
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> dist(-bound, bound);

    LstmParams p;
    auto fill = [&](Eigen::MatrixXd& m, int rows, int cols) {
        m.resize(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
    };
    fill(p.w_f, h, d); fill(p.w_i, h, d); fill(p.w_o, h, d); fill(p.w_c, h, d);
    fill(p.u_f, h, h); fill(p.u_i, h, h); fill(p.u_o, h, h); fill(p.u_c, h, h);
    p.b_f = Eigen::VectorXd::Ones(h);  // forget-gate offset keeps early memory open
    p.b_i = Eigen::VectorXd::Zero(h);
    p.b_o = Eigen::VectorXd::Zero(h);
    p.b_c = Eigen::VectorXd::Zero(h);
    fill(p.w_head, d, h);
    p.b_head = Eigen::VectorXd::Zero(d);
    return p;
}

bool LstmParams::all_finite() const {
    return w_f.allFinite() && w_i.allFinite() && w_o.allFinite() && w_c.allFinite() &&
           u_f.allFinite() && u_i.allFinite() && u_o.allFinite() && u_c.allFinite() &&
           b_f.allFinite() && b_i.allFinite() && b_o.allFinite() && b_c.allFinite() &&
           w_head.allFinite() && b_head.allFinite();
}

CellOutput forward_cell(const LstmParams& params, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev) {
    if (x.size() != params.input_dim() || h_prev.size() != params.hidden() ||
        c_prev.size() != params.hidden())
        throw InvalidInputError("forward_cell: dimension mismatch");
    CellOutput out;
    GateCache& cache = out.cache;
    cache.x = x;
    cache.h_prev = h_prev;
    cache.c_prev = c_prev;
    cache.f = logistic(params.w_f * x + params.u_f * h_prev + params.b_f);
    cache.i = logistic(params.w_i * x + params.u_i * h_prev + params.b_i);
    cache.o = logistic(params.w_o * x + params.u_o * h_prev + params.b_o);
    cache.ctil = (params.w_c * x + params.u_c * h_prev + params.b_c).array().tanh();
    assert((cache.f.array() >= 0.0).all() && (cache.f.array() <= 1.0).all());
    assert((cache.i.array() >= 0.0).all() && (cache.i.array() <= 1.0).all());
    assert((cache.o.array() >= 0.0).all() && (cache.o.array() <= 1.0).all());
    assert((cache.ctil.array().abs() <= 1.0).all());
    cache.c = cache.f.cwiseProduct(c_prev) + cache.i.cwiseProduct(cache.ctil);
    cache.tanh_c = cache.c.array().tanh();
    out.h = cache.o.cwiseProduct(cache.tanh_c);
    out.c = cache.c;
    return out;
}

Eigen::VectorXd forward_sequence(const LstmParams& params,
                                 const Eigen::Ref<const Eigen::MatrixXd>& window) {
    if (window.cols() != params.input_dim())
        throw InvalidInputError("forward_sequence: dimension mismatch");
    Eigen::VectorXd h = Eigen::VectorXd::Zero(params.hidden());
    Eigen::VectorXd c = Eigen::VectorXd::Zero(params.hidden());
    for (Eigen::Index t = 0; t < window.rows(); ++t) {
        CellOutput out = forward_cell(params, window.row(t).transpose(), h, c);
        h = std::move(out.h);
        c = std::move(out.c);
    }
    return params.w_head * h + params.b_head;
}

LstmModel train(const Trajectory& series, const LstmConfig& config) {
    const Eigen::Index n = series.n_steps();
    const int window = config.window_length;
    if (series.dim() != config.input_dim)
        throw InvalidInputError("lstm train: series dimension does not match config");
    if (window < 1 || config.batch_size < 1 || config.epochs < 0)
        throw InvalidInputError("lstm train: bad window/batch/epoch configuration");
    if (n <= window + 1)
        throw InsufficientDataError("lstm train: series length must exceed window_length + 1");

    LstmModel model;
    model.config = config;
    model.params = LstmParams::init(config);
    model.dt = series.dt;
    model.next_t = series.time(n);

    // Windows end at rows [window-1, n-2]; each predicts the following row.
    std::vector<Eigen::Index> ends(static_cast<std::size_t>(n - window));
    std::iota(ends.begin(), ends.end(), static_cast<Eigen::Index>(window - 1));

    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 shuffle_rng(config.seed ^ 0xd1b54a32d192ed03ull);
    Adam adam(config.learning_rate, model.params);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(ends.begin(), ends.end(), shuffle_rng);
        double loss_sum = 0.0;
        for (std::size_t first = 0; first < ends.size(); first += config.batch_size) {
            const std::size_t batch =
                std::min<std::size_t>(config.batch_size, ends.size() - first);
            std::vector<Eigen::MatrixXd> xs(window,
                                            Eigen::MatrixXd(config.input_dim, batch));
            Eigen::MatrixXd targets(config.input_dim, batch);
            for (std::size_t b = 0; b < batch; ++b) {
                const Eigen::Index end = ends[first + b];
                for (int t = 0; t < window; ++t)
                    xs[t].col(b) = series.data.row(end - window + 1 + t).transpose();
                targets.col(b) = series.data.row(end + 1).transpose();
            }
            BatchCache cache;
            const Eigen::MatrixXd pred = forward_batch(model.params, xs, &cache);
            const Eigen::MatrixXd residual = pred - targets;
            const double loss =
                residual.squaredNorm() / (static_cast<double>(config.input_dim) * batch);
            if (!std::isfinite(loss)) throw TrainingError("lstm train: loss diverged", epoch);
            loss_sum += loss * static_cast<double>(batch);

            LstmParams grads = backward_batch(model.params, cache, residual);
            adam.step(model.params, grads, config.grad_clip_norm);
            if (!model.params.all_finite())
                throw TrainingError("lstm train: parameters became non-finite", epoch);
        }
        model.loss_curve.push_back(loss_sum / static_cast<double>(ends.size()));
    }
    model.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return model;
}

ForecastResult forecast(const LstmModel& model, const Eigen::Ref<const Eigen::MatrixXd>& seed_window,
                        int n_steps) {
    const int window = model.config.window_length;
    if (seed_window.rows() != window || seed_window.cols() != model.config.input_dim)
        throw InvalidInputError("lstm forecast: seed window must be window_length x input_dim");
    if (n_steps < 0) throw InvalidInputError("lstm forecast: negative horizon");

    Eigen::MatrixXd win = seed_window;
    ForecastResult result;
    result.trajectory.t0 = model.next_t;
    result.trajectory.dt = model.dt;
    result.trajectory.data.resize(n_steps, model.config.input_dim);
    constexpr double kBound = 1e6;
    for (int t = 0; t < n_steps; ++t) {
        const Eigen::VectorXd pred = forward_sequence(model.params, win);
        if (!pred.allFinite() || pred.norm() > kBound) {
            result.diverged = true;
            result.divergence_step = static_cast<std::size_t>(t);
            result.trajectory.data.conservativeResize(t, Eigen::NoChange);
            return result;
        }
        result.trajectory.data.row(t) = pred.transpose();
        win.topRows(window - 1) = win.bottomRows(window - 1).eval();
        win.row(window - 1) = pred.transpose();
    }
    return result;
}

std::pair<double, LstmParams> loss_and_gradient(const LstmParams& params,
                                                const Eigen::Ref<const Eigen::MatrixXd>& window,
                                                const Eigen::VectorXd& target) {
    // Batched path with batch size 1.
    std::vector<Eigen::MatrixXd> xs;
    for (Eigen::Index t = 0; t < window.rows(); ++t)
        xs.push_back(window.row(t).transpose());
    BatchCache cache;
    const Eigen::MatrixXd pred = forward_batch(params, xs, &cache);
    const Eigen::MatrixXd residual = pred - target;
    const double loss = residual.squaredNorm() / static_cast<double>(target.size());
    return {loss, backward_batch(params, cache, residual)};
}

double gradient_check(const LstmParams& params, const Eigen::Ref<const Eigen::MatrixXd>& window,
                      const Eigen::VectorXd& target) {
    const double d = static_cast<double>(target.size());
    auto loss_of = [&](const LstmParams& p) {
        const Eigen::VectorXd r = forward_sequence(p, window) - target;
        return r.squaredNorm() / d;
    };

    LstmParams analytic = loss_and_gradient(params, window, target).second;

    LstmParams numeric = zeros_like(params);
    LstmParams probe = params;
    ParamRefs probe_refs(probe);
    ParamRefs numeric_refs(numeric);
    const double delta = 1e-5;
    for (std::size_t k = 0; k < probe_refs.flat.size(); ++k) {
        for (Eigen::Index idx = 0; idx < probe_refs.flat[k].size(); ++idx) {
            const double saved = probe_refs.flat[k][idx];
            probe_refs.flat[k][idx] = saved + delta;
            const double up = loss_of(probe);
            probe_refs.flat[k][idx] = saved - delta;
            const double down = loss_of(probe);
            probe_refs.flat[k][idx] = saved;
            numeric_refs.flat[k][idx] = (up - down) / (2.0 * delta);
        }
    }

    ParamRefs analytic_refs(analytic);
    double scale = 1e-12;
    for (std::size_t k = 0; k < analytic_refs.flat.size(); ++k) {
        scale = std::max(scale, analytic_refs.flat[k].cwiseAbs().maxCoeff());
        scale = std::max(scale, numeric_refs.flat[k].cwiseAbs().maxCoeff());
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < analytic_refs.flat.size(); ++k)
        worst = std::max(worst,
                         (analytic_refs.flat[k] - numeric_refs.flat[k]).cwiseAbs().maxCoeff());
    return worst / scale;
}

void LstmModel::write_loss_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "epoch,train_mse\n";
    for (std::size_t e = 0; e < loss_curve.size(); ++e)
        out << e << ',' << format_double(loss_curve[e]) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

void LstmModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    io::write_magic(out, "CBLSTM1\n");
    io::write_u64(out, config.seed);
    io::write_u64(out, static_cast<std::uint64_t>(config.input_dim));
    io::write_u64(out, static_cast<std::uint64_t>(config.hidden_size));
    io::write_u64(out, static_cast<std::uint64_t>(config.epochs));
    io::write_u64(out, static_cast<std::uint64_t>(config.window_length));
    io::write_f64(out, config.learning_rate);
    io::write_u64(out, static_cast<std::uint64_t>(config.batch_size));
    io::write_f64(out, config.grad_clip_norm);
    LstmParams copy = params;
    ParamRefs refs(copy);
    for (const auto& block : refs.flat) {
        io::write_u64(out, static_cast<std::uint64_t>(block.size()));
        for (Eigen::Index i = 0; i < block.size(); ++i) io::write_f64(out, block[i]);
    }
    io::write_u64(out, loss_curve.size());
    for (double v : loss_curve) io::write_f64(out, v);
    io::write_f64(out, train_seconds);
    io::write_f64(out, dt);
    io::write_f64(out, next_t);
    if (!out) throw IoError("failed writing " + path.string());
}

LstmModel LstmModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    io::expect_magic(in, "CBLSTM1\n");
    LstmModel model;
    model.config.seed = io::read_u64(in);
    model.config.input_dim = static_cast<int>(io::read_u64(in));
    model.config.hidden_size = static_cast<int>(io::read_u64(in));
    model.config.epochs = static_cast<int>(io::read_u64(in));
    model.config.window_length = static_cast<int>(io::read_u64(in));
    model.config.learning_rate = io::read_f64(in);
    model.config.batch_size = static_cast<int>(io::read_u64(in));
    model.config.grad_clip_norm = io::read_f64(in);
    model.params = LstmParams::init(model.config);  // shapes; values overwritten below
    ParamRefs refs(model.params);
    for (auto& block : refs.flat) {
        const auto size = static_cast<Eigen::Index>(io::read_u64(in));
        if (size != block.size()) throw IoError("lstm load: parameter size mismatch");
        for (Eigen::Index i = 0; i < size; ++i) block[i] = io::read_f64(in);
    }
    const auto curve = io::read_u64(in);
    model.loss_curve.resize(curve);
    for (auto& v : model.loss_curve) v = io::read_f64(in);
    model.train_seconds = io::read_f64(in);
    model.dt = io::read_f64(in);
    model.next_t = io::read_f64(in);
    return model;
}

}  // namespace chaos::lstm
