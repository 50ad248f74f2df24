#ifndef GRIDSTORM_NET_HPP
#define GRIDSTORM_NET_HPP

#include <Eigen/Dense>

#include "gridstorm/features.hpp"

namespace gridstorm {

enum class Family : int { mlp = 0, rnn = 1, lstm = 2 };
enum class Activation : int { relu = 0, sigmoid = 1, tanh = 2 };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::mlp: return "mlp";
        case Family::rnn: return "rnn";
        default: return "lstm";
    }
}

inline const char* to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        default: return "tanh";
    }
}

inline Family family_from_string(const std::string& s) {
    if (s == "mlp" || s == "nn") return Family::mlp;
    if (s == "rnn") return Family::rnn;
    if (s == "lstm") return Family::lstm;
    throw ConfigError("unknown model family '" + s + "'");
}

inline Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "sigmoid") return Activation::sigmoid;
    if (s == "tanh") return Activation::tanh;
    throw ConfigError("unknown activation '" + s + "'");
}

/// Architecture and window geometry. `layer_sizes` lists hidden widths; a
/// scalar linear head follows the last hidden layer, so the defaults give a
/// 4-layer feed-forward net and 3-layer recurrent nets.
struct ModelSpec {
    Family family = Family::mlp;
    std::vector<int> layer_sizes;
    Activation activation = Activation::relu;
    double dropout_rate = 0.1;
    int H = 24;
    int k = 1;
    int d = 0;  // per-step feature dimension

    static ModelSpec defaults(Family family, int H, int k, int d) {
        ModelSpec s;
        s.family = family;
        s.H = H;
        s.k = k;
        s.d = d;
        if (family == Family::mlp) {
            s.layer_sizes = {512, 256, 128};
            s.activation = Activation::relu;
        } else {
            s.layer_sizes = {64, 32};
            s.activation = Activation::tanh;
        }
        return s;
    }

    int steps() const { return H + 1; }
    int input_dim() const { return family == Family::mlp ? d * steps() : d; }

    void validate() const {
        if (layer_sizes.empty()) throw ShapeError("model needs at least one hidden layer");
        for (int h : layer_sizes) {
            if (h < 1) throw ShapeError("hidden layer width must be >= 1");
        }
        if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
            throw ConfigError("dropout_rate must lie in [0, 1)");
        }
        if (H < 1 || k < 1 || d < 1) throw ShapeError("invalid window geometry");
    }
};

/// Bookkeeping carried with a trained model.
struct TrainingMeta {
    int epochs_run = 0;
    double final_train_loss = 0.0;
    std::uint64_t seed = 0;
    bool substitute = false;
    std::vector<double> val_mape_trace;  // percent, one entry per epoch
};

/// A parameterized forecaster. For the MLP, Wh stays empty and Wx holds the
/// dense layer matrices; for LSTM layers Wx/Wh/b stack the four gates in the
/// order [input, forget, candidate, output].
struct ForecastModel {
    ModelSpec spec;
    std::vector<Eigen::MatrixXd> Wx;
    std::vector<Eigen::MatrixXd> Wh;
    std::vector<Eigen::VectorXd> b;
    Eigen::VectorXd head_w;
    double head_b = 0.0;
    TrainingMeta meta;

    int layers() const { return static_cast<int>(spec.layer_sizes.size()); }
};

/// Forecast outputs are reported inside [0, 1.5]: scaled targets live in
/// [0, 1] and adversarial inputs may push the raw head output past them.
constexpr double kPredictClampLo = 0.0;
constexpr double kPredictClampHi = 1.5;

inline double clamp_output(double y) {
    return std::min(kPredictClampHi, std::max(kPredictClampLo, y));
}

// ---------------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------------

namespace detail {

inline Eigen::MatrixXd uniform_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double bound) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(-bound, bound);
    }
    return m;
}

}  // namespace detail

/// Fan-in scaled uniform init; deterministic per seed. LSTM forget-gate
/// biases start at 1.0.
inline ForecastModel init_model(const ModelSpec& spec, std::uint64_t seed) {
    spec.validate();
    ForecastModel m;
    m.spec = spec;
    m.meta.seed = seed;
    Rng rng(seed ^ 0x6d6f64656cULL);

    const int L = static_cast<int>(spec.layer_sizes.size());
    int in_dim = spec.input_dim();
    for (int l = 0; l < L; ++l) {
        const int h = spec.layer_sizes[static_cast<std::size_t>(l)];
        const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
        switch (spec.family) {
            case Family::mlp:
                m.Wx.push_back(detail::uniform_matrix(rng, h, in_dim, bound));
                m.b.push_back(Eigen::VectorXd::Zero(h));
                break;
            case Family::rnn:
                m.Wx.push_back(detail::uniform_matrix(rng, h, in_dim, bound));
                m.Wh.push_back(detail::uniform_matrix(rng, h, h, 1.0 / std::sqrt(static_cast<double>(h))));
                m.b.push_back(Eigen::VectorXd::Zero(h));
                break;
            case Family::lstm: {
                m.Wx.push_back(detail::uniform_matrix(rng, 4 * h, in_dim, bound));
                m.Wh.push_back(detail::uniform_matrix(rng, 4 * h, h, 1.0 / std::sqrt(static_cast<double>(h))));
                Eigen::VectorXd bias = Eigen::VectorXd::Zero(4 * h);
                bias.segment(h, h).setConstant(1.0);  // forget gate
                m.b.push_back(std::move(bias));
                break;
            }
        }
        in_dim = h;
    }
    const double head_bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    m.head_w = detail::uniform_matrix(rng, in_dim, 1, head_bound).col(0);
    m.head_b = 0.0;
    return m;
}

// ---------------------------------------------------------------------------
// Batched forward/backward
//
// Inputs use the stacked layout: one column per window, rows grouped by time
// step, i.e. rows [t*d, (t+1)*d) hold step t. The same storage feeds the MLP
// (flat) and the recurrent families (stepwise views).
// ---------------------------------------------------------------------------

namespace detail {

inline void apply_activation(Activation act, Eigen::MatrixXd& z) {
    switch (act) {
        case Activation::relu:
            z = z.cwiseMax(0.0);
            break;
        case Activation::sigmoid:
            z = ((-z.array()).exp() + 1.0).inverse().matrix();
            break;
        case Activation::tanh:
            z = z.array().tanh().matrix();
            break;
    }
}

/// Derivative expressed through the activation value. relu'(0) is taken as 0
/// (one-sided subgradient).
inline Eigen::ArrayXXd activation_deriv(Activation act, const Eigen::MatrixXd& a) {
    switch (act) {
        case Activation::relu:
            return (a.array() > 0.0).cast<double>();
        case Activation::sigmoid:
            return a.array() * (1.0 - a.array());
        default:
            return 1.0 - a.array().square();
    }
}

inline Eigen::ArrayXXd sigmoid_array(const Eigen::ArrayXXd& z) { return 1.0 / (1.0 + (-z).exp()); }

}  // namespace detail

/// Per-call forward state kept for the backward pass.
struct ForwardCache {
    bool train_mode = false;
    Eigen::MatrixXd input;  // stacked, d*(H+1) x B

    // MLP: activations per layer (post-activation, pre-dropout) and masks.
    // Recurrent: hidden states per layer per step, masks per layer per step.
    std::vector<Eigen::MatrixXd> mlp_act;
    std::vector<Eigen::MatrixXd> mlp_mask;

    std::vector<std::vector<Eigen::MatrixXd>> h;      // [layer][step]
    std::vector<std::vector<Eigen::MatrixXd>> mask;   // [layer][step]
    std::vector<std::vector<Eigen::MatrixXd>> c;      // lstm cell state
    std::vector<std::vector<Eigen::MatrixXd>> tc;     // tanh(c)
    std::vector<std::vector<Eigen::MatrixXd>> gi, gf, gg, go;

    Eigen::MatrixXd head_in;  // top activation fed to the head (post-dropout)
};

/// Parameter gradients; shapes mirror ForecastModel.
struct Grads {
    std::vector<Eigen::MatrixXd> Wx;
    std::vector<Eigen::MatrixXd> Wh;
    std::vector<Eigen::VectorXd> b;
    Eigen::VectorXd head_w;
    double head_b = 0.0;

    static Grads zeros_like(const ForecastModel& m) {
        Grads g;
        for (const auto& w : m.Wx) g.Wx.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        for (const auto& w : m.Wh) g.Wh.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        for (const auto& v : m.b) g.b.push_back(Eigen::VectorXd::Zero(v.size()));
        g.head_w = Eigen::VectorXd::Zero(m.head_w.size());
        g.head_b = 0.0;
        return g;
    }

    double squared_norm() const {
        double s = 0.0;
        for (const auto& w : Wx) s += w.squaredNorm();
        for (const auto& w : Wh) s += w.squaredNorm();
        for (const auto& v : b) s += v.squaredNorm();
        s += head_w.squaredNorm();
        s += head_b * head_b;
        return s;
    }

    void scale(double f) {
        for (auto& w : Wx) w *= f;
        for (auto& w : Wh) w *= f;
        for (auto& v : b) v *= f;
        head_w *= f;
        head_b *= f;
    }
};

inline void apply_sgd_step(ForecastModel& m, const Grads& g, double lr) {
    for (std::size_t l = 0; l < m.Wx.size(); ++l) m.Wx[l] -= lr * g.Wx[l];
    for (std::size_t l = 0; l < m.Wh.size(); ++l) m.Wh[l] -= lr * g.Wh[l];
    for (std::size_t l = 0; l < m.b.size(); ++l) m.b[l] -= lr * g.b[l];
    m.head_w -= lr * g.head_w;
    m.head_b -= lr * g.head_b;
}

namespace detail {

inline Eigen::MatrixXd dropout_mask(Rng& rng, Eigen::Index rows, Eigen::Index cols, double rate) {
    Eigen::MatrixXd m(rows, cols);
    const double keep = 1.0 - rate;
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = rng.uniform() < keep ? 1.0 / keep : 0.0;
        }
    }
    return m;
}

}  // namespace detail

/// Raw (unclamped) head outputs for a stacked input batch. When `train_rng`
/// is non-null, inverted dropout masks are drawn and recorded in the cache.
inline Eigen::RowVectorXd forward_raw(const ForecastModel& m, const Eigen::MatrixXd& input,
                                      ForwardCache* cache = nullptr, Rng* train_rng = nullptr) {
    const ModelSpec& spec = m.spec;
    const Eigen::Index B = input.cols();
    if (input.rows() != spec.d * spec.steps()) {
        throw ShapeError("input rows " + std::to_string(input.rows()) + " != d*(H+1) = " +
                         std::to_string(spec.d * spec.steps()));
    }
    const bool train_mode = train_rng != nullptr && spec.dropout_rate > 0.0;
    ForwardCache local;
    ForwardCache& cc = cache ? *cache : local;
    cc.train_mode = train_mode;
    if (cache) cc.input = input;

    const int L = m.layers();
    Eigen::MatrixXd top;

    if (spec.family == Family::mlp) {
        cc.mlp_act.clear();
        cc.mlp_mask.clear();
        Eigen::MatrixXd a = input;
        for (int l = 0; l < L; ++l) {
            Eigen::MatrixXd z = (m.Wx[static_cast<std::size_t>(l)] * a).colwise() + m.b[static_cast<std::size_t>(l)];
            detail::apply_activation(spec.activation, z);
            if (cache) cc.mlp_act.push_back(z);
            if (train_mode) {
                Eigen::MatrixXd mask = detail::dropout_mask(*train_rng, z.rows(), z.cols(), spec.dropout_rate);
                z = z.cwiseProduct(mask);
                if (cache) cc.mlp_mask.push_back(std::move(mask));
            } else if (cache) {
                cc.mlp_mask.emplace_back();
            }
            a = std::move(z);
        }
        top = std::move(a);
    } else {
        const int T = spec.steps();
        cc.h.assign(static_cast<std::size_t>(L), {});
        cc.mask.assign(static_cast<std::size_t>(L), {});
        if (spec.family == Family::lstm) {
            cc.c.assign(static_cast<std::size_t>(L), {});
            cc.tc.assign(static_cast<std::size_t>(L), {});
            cc.gi.assign(static_cast<std::size_t>(L), {});
            cc.gf.assign(static_cast<std::size_t>(L), {});
            cc.gg.assign(static_cast<std::size_t>(L), {});
            cc.go.assign(static_cast<std::size_t>(L), {});
        }

        std::vector<Eigen::MatrixXd> h_prev(static_cast<std::size_t>(L));
        std::vector<Eigen::MatrixXd> c_prev(static_cast<std::size_t>(L));
        for (int l = 0; l < L; ++l) {
            const int hw = spec.layer_sizes[static_cast<std::size_t>(l)];
            h_prev[static_cast<std::size_t>(l)] = Eigen::MatrixXd::Zero(hw, B);
            c_prev[static_cast<std::size_t>(l)] = Eigen::MatrixXd::Zero(hw, B);
        }

        Eigen::MatrixXd layer_in;
        for (int t = 0; t < T; ++t) {
            layer_in = input.middleRows(static_cast<Eigen::Index>(t) * spec.d, spec.d);
            for (int l = 0; l < L; ++l) {
                const auto lu = static_cast<std::size_t>(l);
                const int hw = spec.layer_sizes[lu];
                if (spec.family == Family::rnn) {
                    Eigen::MatrixXd z = (m.Wx[lu] * layer_in + m.Wh[lu] * h_prev[lu]).colwise() + m.b[lu];
                    detail::apply_activation(spec.activation, z);
                    h_prev[lu] = z;
                } else {
                    Eigen::MatrixXd z = (m.Wx[lu] * layer_in + m.Wh[lu] * h_prev[lu]).colwise() + m.b[lu];
                    Eigen::MatrixXd gi = detail::sigmoid_array(z.topRows(hw).array()).matrix();
                    Eigen::MatrixXd gf = detail::sigmoid_array(z.middleRows(hw, hw).array()).matrix();
                    Eigen::MatrixXd gg = z.middleRows(2 * hw, hw);
                    detail::apply_activation(spec.activation, gg);
                    Eigen::MatrixXd go = detail::sigmoid_array(z.bottomRows(hw).array()).matrix();
                    Eigen::MatrixXd c = gf.cwiseProduct(c_prev[lu]) + gi.cwiseProduct(gg);
                    Eigen::MatrixXd tc = c.array().tanh().matrix();
                    h_prev[lu] = go.cwiseProduct(tc);
                    c_prev[lu] = c;
                    if (cache) {
                        cc.c[lu].push_back(std::move(c));
                        cc.tc[lu].push_back(std::move(tc));
                        cc.gi[lu].push_back(std::move(gi));
                        cc.gf[lu].push_back(std::move(gf));
                        cc.gg[lu].push_back(std::move(gg));
                        cc.go[lu].push_back(std::move(go));
                    }
                }
                if (cache) cc.h[lu].push_back(h_prev[lu]);

                // Dropout applies to the output consumed by the next layer
                // (and the head), not to the recurrent path.
                if (train_mode) {
                    Eigen::MatrixXd mask = detail::dropout_mask(*train_rng, hw, B, spec.dropout_rate);
                    layer_in = h_prev[lu].cwiseProduct(mask);
                    if (cache) cc.mask[lu].push_back(std::move(mask));
                } else {
                    layer_in = h_prev[lu];
                    if (cache) cc.mask[lu].emplace_back();
                }
            }
        }
        top = layer_in;  // dropped top-layer state of the final step
    }

    if (cache) cc.head_in = top;
    Eigen::RowVectorXd y = (m.head_w.transpose() * top).array() + m.head_b;
    return y;
}

/// Reverse pass from per-column output gradients `dy`. Either gradient sink
/// may be null. Input gradients come back in the stacked layout.
inline void backward(const ForecastModel& m, const ForwardCache& cc, const Eigen::RowVectorXd& dy,
                     Grads* param_grads, Eigen::MatrixXd* input_grads) {
    const ModelSpec& spec = m.spec;
    const Eigen::Index B = cc.input.cols();
    const int L = m.layers();

    if (param_grads) {
        param_grads->head_w += cc.head_in * dy.transpose();
        param_grads->head_b += dy.sum();
    }
    Eigen::MatrixXd dtop = m.head_w * dy;  // h x B

    if (spec.family == Family::mlp) {
        Eigen::MatrixXd da = std::move(dtop);
        for (int l = L - 1; l >= 0; --l) {
            const auto lu = static_cast<std::size_t>(l);
            if (cc.train_mode) da = da.cwiseProduct(cc.mlp_mask[lu]);
            const Eigen::MatrixXd dz =
                da.cwiseProduct(detail::activation_deriv(spec.activation, cc.mlp_act[lu]).matrix());
            const Eigen::MatrixXd& below = (l == 0) ? cc.input : cc.mlp_act[lu - 1];
            if (param_grads) {
                Eigen::MatrixXd below_dropped = below;
                if (l > 0 && cc.train_mode) below_dropped = below.cwiseProduct(cc.mlp_mask[lu - 1]);
                param_grads->Wx[lu].noalias() += dz * below_dropped.transpose();
                param_grads->b[lu] += dz.rowwise().sum();
            }
            if (l > 0 || input_grads) {
                da.noalias() = m.Wx[lu].transpose() * dz;
            }
            if (l == 0 && input_grads) *input_grads = da;
        }
        return;
    }

    const int T = spec.steps();
    if (input_grads) *input_grads = Eigen::MatrixXd::Zero(spec.d * T, B);

    std::vector<Eigen::MatrixXd> dh(static_cast<std::size_t>(L));
    std::vector<Eigen::MatrixXd> dc(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l) {
        const int hw = spec.layer_sizes[static_cast<std::size_t>(l)];
        dh[static_cast<std::size_t>(l)] = Eigen::MatrixXd::Zero(hw, B);
        dc[static_cast<std::size_t>(l)] = Eigen::MatrixXd::Zero(hw, B);
    }
    // Head feeds from the dropped top state of the last step.
    if (cc.train_mode) {
        dh[static_cast<std::size_t>(L - 1)] = dtop.cwiseProduct(cc.mask[static_cast<std::size_t>(L - 1)].back());
    } else {
        dh[static_cast<std::size_t>(L - 1)] = std::move(dtop);
    }

    for (int t = T - 1; t >= 0; --t) {
        const auto tu = static_cast<std::size_t>(t);
        for (int l = L - 1; l >= 0; --l) {
            const auto lu = static_cast<std::size_t>(l);
            Eigen::MatrixXd dz;
            if (spec.family == Family::rnn) {
                dz = dh[lu].cwiseProduct(
                    detail::activation_deriv(spec.activation, cc.h[lu][tu]).matrix());
            } else {
                const int hw = spec.layer_sizes[lu];
                const auto& gi = cc.gi[lu][tu];
                const auto& gf = cc.gf[lu][tu];
                const auto& gg = cc.gg[lu][tu];
                const auto& go = cc.go[lu][tu];
                const auto& tc = cc.tc[lu][tu];
                Eigen::MatrixXd dct =
                    dc[lu] + dh[lu].cwiseProduct(go).cwiseProduct((1.0 - tc.array().square()).matrix());
                const Eigen::MatrixXd dgo = dh[lu].cwiseProduct(tc);
                const Eigen::MatrixXd dgi = dct.cwiseProduct(gg);
                const Eigen::MatrixXd dgg = dct.cwiseProduct(gi);
                const Eigen::MatrixXd c_before =
                    (t == 0) ? Eigen::MatrixXd::Zero(hw, B) : cc.c[lu][tu - 1];
                const Eigen::MatrixXd dgf = dct.cwiseProduct(c_before);
                dc[lu] = dct.cwiseProduct(gf);

                dz.resize(4 * hw, B);
                dz.topRows(hw) = dgi.cwiseProduct((gi.array() * (1.0 - gi.array())).matrix());
                dz.middleRows(hw, hw) = dgf.cwiseProduct((gf.array() * (1.0 - gf.array())).matrix());
                dz.middleRows(2 * hw, hw) =
                    dgg.cwiseProduct(detail::activation_deriv(spec.activation, gg).matrix());
                dz.bottomRows(hw) = dgo.cwiseProduct((go.array() * (1.0 - go.array())).matrix());
            }

            // Input to this layer at step t.
            Eigen::MatrixXd below_in;
            if (l == 0) {
                below_in = cc.input.middleRows(static_cast<Eigen::Index>(t) * spec.d, spec.d);
            } else {
                below_in = cc.h[lu - 1][tu];
                if (cc.train_mode) below_in = below_in.cwiseProduct(cc.mask[lu - 1][tu]);
            }

            if (param_grads) {
                param_grads->Wx[lu].noalias() += dz * below_in.transpose();
                if (t > 0) param_grads->Wh[lu].noalias() += dz * cc.h[lu][tu - 1].transpose();
                param_grads->b[lu] += dz.rowwise().sum();
            }

            // Through time within the layer.
            Eigen::MatrixXd dh_time = Eigen::MatrixXd::Zero(dh[lu].rows(), B);
            if (t > 0) dh_time.noalias() = m.Wh[lu].transpose() * dz;
            // Down to the layer below (or the input).
            Eigen::MatrixXd dx = m.Wx[lu].transpose() * dz;
            if (l == 0) {
                if (input_grads) {
                    input_grads->middleRows(static_cast<Eigen::Index>(t) * spec.d, spec.d) += dx;
                }
            } else {
                if (cc.train_mode) dx = dx.cwiseProduct(cc.mask[lu - 1][tu]);
                dh[lu - 1] += dx;
            }
            dh[lu] = std::move(dh_time);
        }
    }
}

// ---------------------------------------------------------------------------
// Window-level API
// ---------------------------------------------------------------------------

inline Eigen::VectorXd stack_window(const FeatureWindow& w) {
    return Eigen::Map<const Eigen::VectorXd>(w.steps.data(), w.steps.size());
}

inline void check_geometry(const ForecastModel& m, const FeatureWindow& w) {
    if (w.layout.dim() != m.spec.d || w.H != m.spec.H) {
        throw ShapeError("window geometry (d=" + std::to_string(w.layout.dim()) + ", H=" +
                         std::to_string(w.H) + ") does not match model (d=" +
                         std::to_string(m.spec.d) + ", H=" + std::to_string(m.spec.H) + ")");
    }
}

/// Unclamped head output; the quantity input gradients differentiate.
inline double predict_raw(const ForecastModel& m, const FeatureWindow& w) {
    check_geometry(m, w);
    return forward_raw(m, stack_window(w))(0);
}

/// Scaled-load forecast, clamped to [0, 1.5]. Deterministic: dropout is
/// inactive outside training.
inline double predict(const ForecastModel& m, const FeatureWindow& w) {
    return clamp_output(predict_raw(m, w));
}

inline Eigen::MatrixXd batch_inputs(const Dataset& ds, const std::vector<std::size_t>& windows) {
    const int rows = ds.layout().dim() * (ds.H() + 1);
    Eigen::MatrixXd input(rows, static_cast<Eigen::Index>(windows.size()));
    for (std::size_t j = 0; j < windows.size(); ++j) {
        const auto i = windows[j];
        if (i >= ds.window_count()) throw LengthError("window index out of range");
        input.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(
            ds.hourly().middleCols(static_cast<Eigen::Index>(i), ds.H() + 1).eval().data(), rows);
    }
    return input;
}

inline Eigen::VectorXd predict_batch(const ForecastModel& m, const Eigen::MatrixXd& stacked_inputs) {
    Eigen::RowVectorXd y = forward_raw(m, stacked_inputs);
    return y.transpose().unaryExpr([](double v) { return clamp_output(v); });
}

/// Exact reverse-mode gradient of the raw scalar output with respect to every
/// temperature entry in the window, step-major: entry = step * S + station.
/// ReLU kinks yield the one-sided subgradient with relu'(0) = 0.
inline Eigen::VectorXd input_gradient(const ForecastModel& m, const FeatureWindow& w) {
    check_geometry(m, w);
    ForwardCache cache;
    const Eigen::MatrixXd input = stack_window(w);
    forward_raw(m, input, &cache);
    Eigen::MatrixXd dinput;
    backward(m, cache, Eigen::RowVectorXd::Ones(1), nullptr, &dinput);

    const int S = w.layout.stations;
    Eigen::VectorXd g(w.temp_entries());
    for (int t = 0; t <= w.H; ++t) {
        for (int s = 0; s < S; ++s) {
            g(t * S + s) = dinput(static_cast<Eigen::Index>(t) * m.spec.d + w.layout.temp_index(s), 0);
        }
    }
    return g;
}

/// Temperature gradients for a batch of stacked inputs; one column per input.
inline Eigen::MatrixXd input_gradient_batch(const ForecastModel& m, const Eigen::MatrixXd& stacked,
                                            const WindowLayout& layout) {
    ForwardCache cache;
    forward_raw(m, stacked, &cache);
    Eigen::MatrixXd dinput;
    backward(m, cache, Eigen::RowVectorXd::Ones(stacked.cols()), nullptr, &dinput);

    const int S = layout.stations;
    const int T = m.spec.steps();
    Eigen::MatrixXd g(T * S, stacked.cols());
    for (int t = 0; t < T; ++t) {
        for (int s = 0; s < S; ++s) {
            g.row(t * S + s) = dinput.row(static_cast<Eigen::Index>(t) * m.spec.d + layout.temp_index(s));
        }
    }
    return g;
}

}  // namespace gridstorm

#endif  // GRIDSTORM_NET_HPP
