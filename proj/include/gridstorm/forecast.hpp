#ifndef GRIDSTORM_FORECAST_HPP
#define GRIDSTORM_FORECAST_HPP

#include "gridstorm/net.hpp"

namespace gridstorm {

struct TrainConfig {
    int epochs = 0;           // 0 = family default (20 mlp / 30 rnn, lstm)
    int batch_size = 64;
    double learning_rate = 0.0;  // 0 = family default (0.05 mlp / 0.01 recurrent)
    std::uint64_t seed = 1;

    static int default_epochs(Family f) { return f == Family::mlp ? 20 : 30; }
    static double default_lr(Family f) { return f == Family::mlp ? 0.02 : 0.01; }

    int resolved_epochs(Family f) const { return epochs > 0 ? epochs : default_epochs(f); }
    double resolved_lr(Family f) const { return learning_rate > 0 ? learning_rate : default_lr(f); }

    void validate() const {
        if (epochs < 0) throw ConfigError("epochs must be >= 1 (or 0 for the default)");
        if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
        if (learning_rate < 0) throw ConfigError("learning_rate must be > 0 (or 0 for the default)");
    }
};

constexpr double kRecurrentGradClip = 5.0;

/// Mean absolute percentage error over unscaled MW. Windows whose actual
/// load is zero are excluded; the count lands in *excluded when given.
inline double evaluate_mape(const ForecastModel& m, const Dataset& ds,
                            std::size_t* excluded = nullptr) {
    const std::size_t n = ds.window_count();
    if (n == 0) throw LengthError("empty dataset");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;

    double sum = 0.0;
    std::size_t used = 0, skipped = 0;
    const std::size_t chunk = 512;
    for (std::size_t first = 0; first < n; first += chunk) {
        const std::size_t count = std::min(chunk, n - first);
        std::vector<std::size_t> part(idx.begin() + static_cast<std::ptrdiff_t>(first),
                                      idx.begin() + static_cast<std::ptrdiff_t>(first + count));
        const Eigen::VectorXd yhat = predict_batch(m, batch_inputs(ds, part));
        for (std::size_t j = 0; j < count; ++j) {
            const double actual = ds.target_mw(first + j);
            if (actual == 0.0) {
                ++skipped;
                continue;
            }
            const double forecast = unscale_load(ds, yhat(static_cast<Eigen::Index>(j)));
            sum += std::abs(forecast - actual) / std::abs(actual);
            ++used;
        }
    }
    if (excluded) *excluded = skipped;
    if (used == 0) throw LengthError("no window with nonzero actual load");
    return 100.0 * sum / static_cast<double>(used);
}

/// Minimizes the mean L1 error with mini-batch SGD. The last tenth of the
/// dataset (at least one window) is held out per epoch for the validation
/// MAPE trace; recurrent families clip the global gradient norm at 5.
inline ForecastModel train(const ForecastModel& model, const Dataset& ds, const TrainConfig& cfg) {
    cfg.validate();
    ForecastModel m = model;
    const Family fam = m.spec.family;
    if (ds.layout().dim() != m.spec.d || ds.H() != m.spec.H || ds.k() != m.spec.k) {
        throw ShapeError("dataset geometry does not match model spec");
    }

    const std::size_t n = ds.window_count();
    const std::size_t n_val = std::max<std::size_t>(1, n / 10);
    const std::size_t n_train = n > n_val ? n - n_val : n;  // tiny sets validate on themselves
    const Dataset val = (n > n_val)
                            ? ds.slice_hours(n_train, ds.hours() - n_train)
                            : ds;

    const int epochs = cfg.resolved_epochs(fam);
    const double lr = cfg.resolved_lr(fam);
    const bool recurrent = fam != Family::mlp;

    Rng shuffle_rng(cfg.seed ^ 0x7368756666ULL);
    Rng dropout_rng(cfg.seed ^ 0x64726f70ULL);

    std::vector<std::size_t> order(n_train);
    for (std::size_t i = 0; i < n_train; ++i) order[i] = i;

    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(epochs));
    double last_train_loss = 0.0;
    int bad_epochs = 0;

    // Pre-training loss on the raw (unclamped) outputs; the divergence check
    // compares against this because clamped validation errors are bounded.
    std::vector<double> loss_trace;
    {
        double loss0 = 0.0;
        const std::size_t probe = std::min<std::size_t>(n_train, 512);
        std::vector<std::size_t> head(probe);
        for (std::size_t i = 0; i < probe; ++i) head[i] = i;
        const Eigen::RowVectorXd y0 = forward_raw(m, batch_inputs(ds, head));
        for (std::size_t j = 0; j < probe; ++j) {
            loss0 += std::abs(y0(static_cast<Eigen::Index>(j)) - ds.target_scaled(head[j]));
        }
        loss_trace.push_back(std::max(loss0 / static_cast<double>(probe), 1e-6));
    }

    for (int epoch = 0; epoch < epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (std::size_t first = 0; first < n_train; first += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size),
                                                            n_train - first);
            std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(first),
                                           order.begin() + static_cast<std::ptrdiff_t>(first + count));
            const Eigen::MatrixXd input = batch_inputs(ds, batch);

            ForwardCache cache;
            const Eigen::RowVectorXd y = forward_raw(m, input, &cache,
                                                     m.spec.dropout_rate > 0 ? &dropout_rng : nullptr);
            Eigen::RowVectorXd dy(count);
            for (std::size_t j = 0; j < count; ++j) {
                const double r = y(static_cast<Eigen::Index>(j)) - ds.target_scaled(batch[j]);
                epoch_loss += std::abs(r);
                // L1 subgradient; sign(0) = 0.
                dy(static_cast<Eigen::Index>(j)) = (r > 0.0) - (r < 0.0);
            }
            dy /= static_cast<double>(count);
            seen += count;

            Grads grads = Grads::zeros_like(m);
            backward(m, cache, dy, &grads, nullptr);
            if (recurrent) {
                const double norm = std::sqrt(grads.squared_norm());
                if (norm > kRecurrentGradClip) grads.scale(kRecurrentGradClip / norm);
            }
            apply_sgd_step(m, grads, lr);
        }
        last_train_loss = epoch_loss / static_cast<double>(seen);
        loss_trace.push_back(last_train_loss);

        const double val_mape = evaluate_mape(m, val);
        trace.push_back(val_mape);
        if (last_train_loss > 10.0 * loss_trace.front()) {
            if (++bad_epochs >= 3) {
                throw DivergenceError("training diverged: train loss " +
                                          std::to_string(last_train_loss) + " vs initial " +
                                          std::to_string(loss_trace.front()),
                                      loss_trace);
            }
        } else {
            bad_epochs = 0;
        }
    }

    m.meta.epochs_run = epochs;
    m.meta.final_train_loss = last_train_loss;
    m.meta.seed = cfg.seed;
    m.meta.val_mape_trace = std::move(trace);
    return m;
}

/// 24-hour (or shorter) rollout starting at hour index `start` of the
/// dataset. Forecasted loads are fed back as the load-history feature for
/// hours at or past `start`; temperature and calendar features come from the
/// dataset itself.
inline std::vector<double> rolling_forecast(const ForecastModel& m, const Dataset& ds,
                                            std::size_t start, int horizon = 24) {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    const int H = ds.H();
    const int k = ds.k();
    if (start < static_cast<std::size_t>(H + k)) {
        throw LengthError("not enough history before hour " + std::to_string(start));
    }
    if (start + static_cast<std::size_t>(horizon) > ds.hours()) {
        throw LengthError("rollout runs past the end of the dataset");
    }

    // Working copy of the scaled load row; forecasts overwrite actuals as we go.
    std::vector<double> working(ds.hours());
    for (std::size_t h = 0; h < ds.hours(); ++h) {
        working[h] = ds.hourly()(ds.layout().load_index(), static_cast<Eigen::Index>(h));
    }

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int j = 0; j < horizon; ++j) {
        const std::size_t target_hour = start + static_cast<std::size_t>(j);
        const std::size_t t_end = target_hour - static_cast<std::size_t>(k);
        const std::size_t w_index = t_end - static_cast<std::size_t>(H);
        FeatureWindow w = ds.window(w_index);
        for (int s = 0; s <= H; ++s) {
            const std::size_t hour = w_index + static_cast<std::size_t>(s);
            if (hour >= start) w.steps(ds.layout().load_index(), s) = working[hour];
        }
        const double yhat = predict(m, w);
        working[target_hour] = yhat;
        out.push_back(unscale_load(ds, yhat));
    }
    return out;
}

}  // namespace gridstorm

#endif  // GRIDSTORM_FORECAST_HPP
