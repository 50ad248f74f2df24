#ifndef GRIDSTORM_SERIES_HPP
#define GRIDSTORM_SERIES_HPP

#include <map>
#include <set>

#include "gridstorm/common.hpp"

namespace gridstorm {

enum class WeatherFlag : int { clear = 0, rain = 1, cloud = 2 };

inline const char* to_string(WeatherFlag f) {
    switch (f) {
        case WeatherFlag::clear: return "clear";
        case WeatherFlag::rain: return "rain";
        default: return "cloud";
    }
}

inline WeatherFlag weather_flag_from_string(const std::string& s, std::size_t row) {
    const std::string t = trim(s);
    if (t == "clear") return WeatherFlag::clear;
    if (t == "rain") return WeatherFlag::rain;
    if (t == "cloud") return WeatherFlag::cloud;
    throw ParseError("unknown weather flag '" + s + "'", row);
}

/// Hourly load, per-station temperature and a weather code, on a strictly
/// contiguous hourly grid.
struct RawSeries {
    std::vector<std::int64_t> timestamps;            // epoch seconds, UTC
    std::vector<double> load_mw;                     // per hour
    std::vector<std::vector<double>> temperature_f;  // [station][hour]
    std::vector<WeatherFlag> weather;                // per hour
    std::vector<std::string> station_names;

    std::size_t size() const { return timestamps.size(); }
    int stations() const { return static_cast<int>(temperature_f.size()); }

    void validate() const {
        const std::size_t n = size();
        if (n == 0) throw LengthError("empty series");
        if (load_mw.size() != n || weather.size() != n) {
            throw LengthError("series of unequal length");
        }
        for (const auto& st : temperature_f) {
            if (st.size() != n) throw LengthError("temperature series of unequal length");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!(load_mw[i] > 0.0)) {
                throw ConfigError("non-positive load at " + calendar::format_iso8601(timestamps[i]));
            }
            if (i > 0 && timestamps[i] - timestamps[i - 1] != calendar::kSecondsPerHour) {
                throw AlignmentError("timestamps not contiguous hourly",
                                     calendar::format_iso8601(timestamps[i]));
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Synthetic generator
//
// Desk-scale stand-in for the real load/weather feeds. The load rule is
//   load = base + sensitivity * (mean_temp - comfort)^2
//          + daily_amplitude * sin(2*pi*(hod-12)/24)
//          - weekly_amplitude * [weekend]
//          + N(0, noise_std)
// and per-station temperature follows seasonal + diurnal sinusoids around a
// base, with a fixed per-station offset and Gaussian noise.
// ---------------------------------------------------------------------------

struct SyntheticConfig {
    int days = 365;
    double base_load_mw = 8000.0;
    double temp_sensitivity = 6.0;   // MW per squared °F of comfort deviation
    double daily_amplitude_mw = 800.0;
    double weekly_amplitude_mw = 400.0;  // weekend offset, subtracted on Sat/Sun
    double noise_std_mw = 50.0;
    double comfort_temp_f = 65.0;
    std::uint64_t seed = 1;

    int stations = 4;
    double temp_base_f = 62.0;
    double temp_seasonal_amp_f = 12.0;
    double temp_diurnal_amp_f = 8.0;
    double temp_noise_std_f = 1.0;
    double station_spread_f = 2.0;  // even spacing of per-station offsets

    std::int64_t start_epoch = 1420070400;  // 2015-01-01T00:00:00Z

    void validate() const {
        if (days < 1) throw ConfigError("synthetic days must be >= 1");
        if (noise_std_mw < 0 || temp_noise_std_f < 0) throw ConfigError("noise std must be >= 0");
        if (stations < 1) throw ConfigError("need at least one station");
        if (base_load_mw <= 0) throw ConfigError("base load must be positive");
    }
};

inline RawSeries generate_synthetic(const SyntheticConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t n = static_cast<std::size_t>(cfg.days) * 24;
    constexpr double two_pi = 6.283185307179586476925286766559;

    RawSeries out;
    out.timestamps.resize(n);
    out.load_mw.resize(n);
    out.weather.resize(n);
    out.temperature_f.assign(static_cast<std::size_t>(cfg.stations), std::vector<double>(n));
    out.station_names.resize(static_cast<std::size_t>(cfg.stations));
    for (int s = 0; s < cfg.stations; ++s) {
        out.station_names[static_cast<std::size_t>(s)] = "station_" + std::to_string(s);
    }

    WeatherFlag day_flag = WeatherFlag::clear;
    for (std::size_t h = 0; h < n; ++h) {
        const std::int64_t ts = cfg.start_epoch +
                                static_cast<std::int64_t>(h) * calendar::kSecondsPerHour;
        out.timestamps[h] = ts;

        const double hod = static_cast<double>(calendar::hour_of_day(ts));
        const double day = static_cast<double>(h) / 24.0;
        const double seasonal = cfg.temp_seasonal_amp_f * std::sin(two_pi * (day - 80.0) / 365.0);
        const double diurnal = cfg.temp_diurnal_amp_f * std::sin(two_pi * (hod - 9.0) / 24.0);

        double mean_temp = 0.0;
        for (int s = 0; s < cfg.stations; ++s) {
            const double offset =
                (cfg.stations > 1)
                    ? cfg.station_spread_f * (static_cast<double>(s) - (cfg.stations - 1) / 2.0)
                    : 0.0;
            const double t = cfg.temp_base_f + seasonal + diurnal + offset +
                             rng.normal(0.0, cfg.temp_noise_std_f);
            out.temperature_f[static_cast<std::size_t>(s)][h] = t;
            mean_temp += t;
        }
        mean_temp /= cfg.stations;

        const double dev = mean_temp - cfg.comfort_temp_f;
        double load = cfg.base_load_mw + cfg.temp_sensitivity * dev * dev +
                      cfg.daily_amplitude_mw * std::sin(two_pi * (hod - 12.0) / 24.0) +
                      rng.normal(0.0, cfg.noise_std_mw);
        if (calendar::is_weekend(ts)) load -= cfg.weekly_amplitude_mw;
        if (load < 1.0) load = 1.0;  // keep the positivity invariant under extreme configs
        out.load_mw[h] = load;

        if (hod == 0.0 || h == 0) {
            const double u = rng.uniform();
            day_flag = u < 0.5 ? WeatherFlag::clear : (u < 0.8 ? WeatherFlag::cloud : WeatherFlag::rain);
        }
        out.weather[h] = day_flag;
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// CSV ingestion
//
// load file:    timestamp,load_mw
// weather file: timestamp,station,temp_f,flag
//
// Empty cells mark a row as missing; the whole hour is then dropped from the
// merged result and counted. A timestamp present in one input but not the
// other (or a station gap) is an alignment error, as is any hole left in the
// hourly grid after dropping.
// ---------------------------------------------------------------------------

struct IngestResult {
    RawSeries series;
    std::size_t dropped_rows = 0;
};

namespace detail {

inline int find_column(const std::vector<std::string>& header, const std::string& name,
                       const std::string& path) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) return static_cast<int>(i);
    }
    throw Error("missing column '" + name + "' in " + path);
}

}  // namespace detail

inline IngestResult ingest_csv(const std::string& load_path, const std::string& weather_path) {
    const csv::Table load_tab = csv::read_file(load_path);
    const csv::Table wx_tab = csv::read_file(weather_path);

    const int lc_ts = detail::find_column(load_tab.header, "timestamp", load_path);
    const int lc_mw = detail::find_column(load_tab.header, "load_mw", load_path);
    const int wc_ts = detail::find_column(wx_tab.header, "timestamp", weather_path);
    const int wc_st = detail::find_column(wx_tab.header, "station", weather_path);
    const int wc_tf = detail::find_column(wx_tab.header, "temp_f", weather_path);
    const int wc_fl = detail::find_column(wx_tab.header, "flag", weather_path);

    struct LoadCell {
        double value = 0.0;
        bool missing = false;
    };
    std::map<std::int64_t, LoadCell> load_map;
    for (std::size_t r = 0; r < load_tab.rows.size(); ++r) {
        const auto& row = load_tab.rows[r];
        const std::size_t lineno = load_tab.row_numbers[r];
        if (static_cast<int>(row.size()) <= std::max(lc_ts, lc_mw)) {
            throw ParseError("too few columns in " + load_path, lineno);
        }
        const std::int64_t ts = calendar::parse_iso8601(trim(row[static_cast<std::size_t>(lc_ts)]), lineno);
        if (load_map.count(ts)) {
            throw AlignmentError("duplicate timestamp in " + load_path,
                                 calendar::format_iso8601(ts));
        }
        LoadCell cell;
        const std::string raw = trim(row[static_cast<std::size_t>(lc_mw)]);
        if (raw.empty()) {
            cell.missing = true;
        } else {
            cell.value = parse_double(raw, lineno);
        }
        load_map[ts] = cell;
    }

    struct WxCell {
        double temp = 0.0;
        bool missing = false;
        WeatherFlag flag = WeatherFlag::clear;
        bool flag_missing = false;
    };
    std::set<std::string> station_set;
    std::map<std::int64_t, std::map<std::string, WxCell>> wx_map;
    for (std::size_t r = 0; r < wx_tab.rows.size(); ++r) {
        const auto& row = wx_tab.rows[r];
        const std::size_t lineno = wx_tab.row_numbers[r];
        if (static_cast<int>(row.size()) <= std::max(std::max(wc_ts, wc_st), std::max(wc_tf, wc_fl))) {
            throw ParseError("too few columns in " + weather_path, lineno);
        }
        const std::int64_t ts = calendar::parse_iso8601(trim(row[static_cast<std::size_t>(wc_ts)]), lineno);
        const std::string station = trim(row[static_cast<std::size_t>(wc_st)]);
        if (station.empty()) throw ParseError("empty station name", lineno);
        station_set.insert(station);
        WxCell cell;
        const std::string raw_t = trim(row[static_cast<std::size_t>(wc_tf)]);
        if (raw_t.empty()) {
            cell.missing = true;
        } else {
            cell.temp = parse_double(raw_t, lineno);
        }
        const std::string raw_f = trim(row[static_cast<std::size_t>(wc_fl)]);
        if (raw_f.empty()) {
            cell.flag_missing = true;
        } else {
            cell.flag = weather_flag_from_string(raw_f, lineno);
        }
        auto& per_ts = wx_map[ts];
        if (per_ts.count(station)) {
            throw AlignmentError("duplicate (timestamp, station) in " + weather_path,
                                 calendar::format_iso8601(ts));
        }
        per_ts[station] = cell;
    }

    if (load_map.empty() || wx_map.empty()) throw LengthError("empty input file");

    // Alignment: both files must describe exactly the same instants, every
    // station present at every instant.
    for (const auto& [ts, cell] : load_map) {
        (void)cell;
        if (!wx_map.count(ts)) {
            throw AlignmentError("timestamp missing from weather file", calendar::format_iso8601(ts));
        }
    }
    for (const auto& [ts, per_station] : wx_map) {
        if (!load_map.count(ts)) {
            throw AlignmentError("timestamp missing from load file", calendar::format_iso8601(ts));
        }
        for (const auto& st : station_set) {
            if (!per_station.count(st)) {
                throw AlignmentError("station '" + st + "' missing", calendar::format_iso8601(ts));
            }
        }
    }

    const std::vector<std::string> stations(station_set.begin(), station_set.end());
    IngestResult res;
    res.series.station_names = stations;
    res.series.temperature_f.assign(stations.size(), {});

    for (const auto& [ts, lcell] : load_map) {
        const auto& per_station = wx_map.at(ts);
        bool missing = lcell.missing;
        for (const auto& st : stations) {
            const auto& w = per_station.at(st);
            missing = missing || w.missing || w.flag_missing;
        }
        if (missing) {
            ++res.dropped_rows;
            continue;
        }
        res.series.timestamps.push_back(ts);
        res.series.load_mw.push_back(lcell.value);
        res.series.weather.push_back(per_station.at(stations.front()).flag);
        for (std::size_t s = 0; s < stations.size(); ++s) {
            res.series.temperature_f[s].push_back(per_station.at(stations[s]).temp);
        }
    }

    if (res.series.timestamps.empty()) throw LengthError("all rows dropped as missing");

    // Drops may not punch holes in the hourly grid.
    for (std::size_t i = 1; i < res.series.timestamps.size(); ++i) {
        if (res.series.timestamps[i] - res.series.timestamps[i - 1] != calendar::kSecondsPerHour) {
            throw AlignmentError("hourly gap after dropping missing rows",
                                 calendar::format_iso8601(res.series.timestamps[i]));
        }
    }
    res.series.validate();
    return res;
}

}  // namespace gridstorm

#endif  // GRIDSTORM_SERIES_HPP
