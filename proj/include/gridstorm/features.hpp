#ifndef GRIDSTORM_FEATURES_HPP
#define GRIDSTORM_FEATURES_HPP

#include <Eigen/Dense>

#include "gridstorm/series.hpp"

namespace gridstorm {

// Per-step feature vector layout:
//   [0]                 scaled load
//   [1 .. S]            scaled temperature per station
//   [1+S .. 24+S]       hour-of-day one-hot (24)
//   [25+S]              weekend flag
//   [26+S .. 29+S]      season one-hot (4)
//   [30+S .. 32+S]      weather flag one-hot (3)
struct WindowLayout {
    int stations = 0;

    int dim() const { return 33 + stations; }
    int load_index() const { return 0; }
    int temp_index(int station) const { return 1 + station; }
    int hour_index() const { return 1 + stations; }
    int weekend_index() const { return 25 + stations; }
    int season_index() const { return 26 + stations; }
    int weather_index() const { return 30 + stations; }
};

struct MinMax {
    double min = 0.0;
    double max = 0.0;

    double scale(double x) const { return max > min ? (x - min) / (max - min) : 0.0; }
    double unscale(double v) const { return min + v * (max - min); }
    double range() const { return max - min; }
};

/// Affine [0,1] scaling fitted per feature; min == max scales to 0.
struct ScalingParams {
    MinMax load;
    std::vector<MinMax> temp;  // per station
};

/// One forecasting input: H+1 feature steps and the scaled load target k
/// hours past the last step. `steps` holds one column per time step.
struct FeatureWindow {
    int H = 0;
    int k = 0;
    WindowLayout layout;
    Eigen::MatrixXd steps;          // dim x (H+1)
    double target_scaled = 0.0;
    std::int64_t t_end_epoch = 0;   // timestamp of the last step
    std::vector<double> temp_range_f;  // °F per scaled unit, per station

    int temp_entries() const { return (H + 1) * layout.stations; }

    double& temp_at(int step, int station) {
        return steps(layout.temp_index(station), step);
    }
    double temp_at(int step, int station) const {
        return steps(layout.temp_index(station), step);
    }

    /// Flat temperature-entry index, step-major.
    int temp_entry_index(int step, int station) const { return step * layout.stations + station; }
    int entry_step(int entry) const { return entry / layout.stations; }
    int entry_station(int entry) const { return entry % layout.stations; }
};

/// Scaled hourly feature table plus window geometry. Windows are
/// materialized views over the shared table, so consecutive windows agree on
/// their overlapping history steps by construction.
class Dataset {
public:
    Dataset() = default;

    Dataset(WindowLayout layout, int H, int k, ScalingParams scaling,
            std::vector<std::int64_t> timestamps, Eigen::MatrixXd hourly)
        : layout_(layout), H_(H), k_(k), scaling_(std::move(scaling)),
          timestamps_(std::move(timestamps)), hourly_(std::move(hourly)) {
        if (hourly_.cols() != static_cast<Eigen::Index>(timestamps_.size())) {
            throw LengthError("hourly table and timestamps disagree");
        }
        if (hours() <= static_cast<std::size_t>(H_ + k_)) {
            throw LengthError("series too short for one window: " + std::to_string(hours()) +
                              " hours, need > " + std::to_string(H_ + k_));
        }
    }

    const WindowLayout& layout() const { return layout_; }
    int H() const { return H_; }
    int k() const { return k_; }
    const ScalingParams& scaling() const { return scaling_; }
    std::size_t hours() const { return timestamps_.size(); }
    const std::vector<std::int64_t>& timestamps() const { return timestamps_; }
    const Eigen::MatrixXd& hourly() const { return hourly_; }

    std::size_t window_count() const { return hours() - static_cast<std::size_t>(H_ + k_); }

    /// Window i covers hours [i, i+H]; its target is the load at hour i+H+k.
    FeatureWindow window(std::size_t i) const {
        if (i >= window_count()) throw LengthError("window index out of range");
        FeatureWindow w;
        w.H = H_;
        w.k = k_;
        w.layout = layout_;
        w.steps = hourly_.middleCols(static_cast<Eigen::Index>(i), H_ + 1);
        w.target_scaled = hourly_(layout_.load_index(), static_cast<Eigen::Index>(i) + H_ + k_);
        w.t_end_epoch = timestamps_[i + static_cast<std::size_t>(H_)];
        w.temp_range_f.resize(static_cast<std::size_t>(layout_.stations));
        for (int s = 0; s < layout_.stations; ++s) {
            w.temp_range_f[static_cast<std::size_t>(s)] = scaling_.temp[static_cast<std::size_t>(s)].range();
        }
        return w;
    }

    /// Hour index of the target of window i.
    std::size_t target_hour(std::size_t i) const { return i + static_cast<std::size_t>(H_ + k_); }
    std::int64_t target_epoch(std::size_t i) const { return timestamps_[target_hour(i)]; }

    double target_scaled(std::size_t i) const {
        return hourly_(layout_.load_index(), static_cast<Eigen::Index>(target_hour(i)));
    }
    double target_mw(std::size_t i) const { return scaling_.load.unscale(target_scaled(i)); }

    /// Chronological sub-range of hours [first, first+count).
    Dataset slice_hours(std::size_t first, std::size_t count) const {
        if (first + count > hours()) throw LengthError("slice out of range");
        std::vector<std::int64_t> ts(timestamps_.begin() + static_cast<std::ptrdiff_t>(first),
                                     timestamps_.begin() + static_cast<std::ptrdiff_t>(first + count));
        return Dataset(layout_, H_, k_, scaling_, std::move(ts),
                       hourly_.middleCols(static_cast<Eigen::Index>(first),
                                          static_cast<Eigen::Index>(count)));
    }

private:
    WindowLayout layout_;
    int H_ = 0;
    int k_ = 0;
    ScalingParams scaling_;
    std::vector<std::int64_t> timestamps_;
    Eigen::MatrixXd hourly_;  // dim x hours, all entries scaled/encoded
};

/// Fits the [0,1] scaling on the full raw series and builds the hourly
/// feature table; one window exists per hour t with H history hours before
/// it and a target k hours after it.
inline Dataset build_features(const RawSeries& raw, int H, int k) {
    raw.validate();
    if (H < 1 || k < 1) throw ConfigError("H and k must be >= 1");
    const std::size_t n = raw.size();
    if (n <= static_cast<std::size_t>(H + k)) {
        throw LengthError("series too short: " + std::to_string(n) + " hours, need > " +
                          std::to_string(H + k));
    }

    WindowLayout layout;
    layout.stations = raw.stations();

    ScalingParams scaling;
    scaling.load.min = *std::min_element(raw.load_mw.begin(), raw.load_mw.end());
    scaling.load.max = *std::max_element(raw.load_mw.begin(), raw.load_mw.end());
    scaling.temp.resize(static_cast<std::size_t>(layout.stations));
    for (int s = 0; s < layout.stations; ++s) {
        const auto& t = raw.temperature_f[static_cast<std::size_t>(s)];
        scaling.temp[static_cast<std::size_t>(s)].min = *std::min_element(t.begin(), t.end());
        scaling.temp[static_cast<std::size_t>(s)].max = *std::max_element(t.begin(), t.end());
    }

    Eigen::MatrixXd hourly = Eigen::MatrixXd::Zero(layout.dim(), static_cast<Eigen::Index>(n));
    for (std::size_t h = 0; h < n; ++h) {
        const auto col = static_cast<Eigen::Index>(h);
        hourly(layout.load_index(), col) = scaling.load.scale(raw.load_mw[h]);
        for (int s = 0; s < layout.stations; ++s) {
            hourly(layout.temp_index(s), col) =
                scaling.temp[static_cast<std::size_t>(s)].scale(raw.temperature_f[static_cast<std::size_t>(s)][h]);
        }
        const std::int64_t ts = raw.timestamps[h];
        hourly(layout.hour_index() + calendar::hour_of_day(ts), col) = 1.0;
        hourly(layout.weekend_index(), col) = calendar::is_weekend(ts) ? 1.0 : 0.0;
        hourly(layout.season_index() + calendar::season(ts), col) = 1.0;
        hourly(layout.weather_index() + static_cast<int>(raw.weather[h]), col) = 1.0;
    }

    return Dataset(layout, H, k, std::move(scaling), raw.timestamps, std::move(hourly));
}

/// Chronological split: the first floor(n * train_frac) windows train, the
/// rest test. No shuffling.
inline std::pair<Dataset, Dataset> split(const Dataset& ds, double train_frac) {
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw ConfigError("train_frac must lie strictly between 0 and 1");
    }
    const std::size_t n = ds.window_count();
    const std::size_t n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_frac));
    const std::size_t n_test = n - n_train;
    if (n_train == 0 || n_test == 0) {
        throw ConfigError("split leaves an empty side: " + std::to_string(n_train) + "/" +
                          std::to_string(n_test));
    }
    // Window i needs hours [i, i+H+k]; train covers windows [0, n_train),
    // test covers [n_train, n).
    Dataset train = ds.slice_hours(0, n_train + static_cast<std::size_t>(ds.H() + ds.k()));
    Dataset test = ds.slice_hours(n_train, ds.hours() - n_train);
    return {std::move(train), std::move(test)};
}

/// Affine inverse of the load scaling.
inline double unscale_load(const Dataset& ds, double v) { return ds.scaling().load.unscale(v); }

}  // namespace gridstorm

#endif  // GRIDSTORM_FEATURES_HPP
