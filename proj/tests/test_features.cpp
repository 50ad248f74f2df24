#include <catch2/catch_amalgamated.hpp>

#include "gridstorm/features.hpp"

using namespace gridstorm;

namespace {

RawSeries tiny_series(std::size_t hours, int stations = 2, std::uint64_t seed = 5) {
    SyntheticConfig cfg;
    cfg.days = static_cast<int>((hours + 23) / 24);
    cfg.stations = stations;
    cfg.seed = seed;
    RawSeries s = generate_synthetic(cfg);
    s.timestamps.resize(hours);
    s.load_mw.resize(hours);
    s.weather.resize(hours);
    for (auto& st : s.temperature_f) st.resize(hours);
    return s;
}

}  // namespace

TEST_CASE("window count matches enumeration") {
    const RawSeries raw = tiny_series(100);
    const Dataset ds = build_features(raw, 24, 1);

    // Independent count: a window exists for every end-hour t with H hours of
    // history before it and a target k hours after it.
    std::size_t count = 0;
    for (std::size_t t = 0; t < raw.size(); ++t) {
        if (t >= 24 && t + 1 < raw.size()) ++count;
    }
    CHECK(count == 75);
    CHECK(ds.window_count() == count);
}

TEST_CASE("too-short series raises a length error") {
    const RawSeries raw = tiny_series(25);
    CHECK_THROWS_AS(build_features(raw, 24, 1), LengthError);
}

TEST_CASE("constant load scales to zero by convention") {
    RawSeries raw = tiny_series(60);
    for (auto& l : raw.load_mw) l = 5000.0;
    const Dataset ds = build_features(raw, 12, 1);
    const FeatureWindow w = ds.window(0);
    for (int t = 0; t <= w.H; ++t) CHECK(w.steps(ds.layout().load_index(), t) == 0.0);
    CHECK(unscale_load(ds, 0.0) == 5000.0);
}

TEST_CASE("calendar encoding: Sunday 03:00") {
    const RawSeries raw = tiny_series(26 * 24);
    const Dataset ds = build_features(raw, 24, 1);
    // 2015-01-04 (Sunday) 03:00 is hour 3*24 + 3 of a series starting Thursday.
    const std::size_t hour = 3 * 24 + 3;
    const auto& L = ds.layout();
    const auto col = static_cast<Eigen::Index>(hour);
    CHECK(ds.hourly()(L.hour_index() + 3, col) == 1.0);
    CHECK(ds.hourly()(L.weekend_index(), col) == 1.0);
    double hour_sum = 0.0;
    for (int h = 0; h < 24; ++h) hour_sum += ds.hourly()(L.hour_index() + h, col);
    CHECK(hour_sum == 1.0);
}

TEST_CASE("scaling round trip is identity within 1e-9 relative") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        MinMax mm;
        mm.min = rng.uniform(-100.0, 100.0);
        mm.max = mm.min + rng.uniform(0.5, 200.0);
        const double x = rng.uniform(mm.min, mm.max);
        const double rt = mm.unscale(mm.scale(x));
        CHECK(std::abs(rt - x) <= 1e-9 * std::max(1.0, std::abs(x)));
    }
    // Degenerate feature: min == max scales to 0 and unscales to the point.
    MinMax flat{42.0, 42.0};
    CHECK(flat.scale(42.0) == 0.0);
    CHECK(flat.unscale(flat.scale(42.0)) == 42.0);
}

TEST_CASE("consecutive windows share their overlapping steps") {
    const RawSeries raw = tiny_series(120, 3);
    const Dataset ds = build_features(raw, 24, 1);
    for (std::size_t i = 0; i + 1 < std::min<std::size_t>(ds.window_count(), 20); ++i) {
        const FeatureWindow a = ds.window(i);
        const FeatureWindow b = ds.window(i + 1);
        for (int t = 0; t < a.H; ++t) {
            CHECK(a.steps.col(t + 1) == b.steps.col(t));
        }
    }
}

TEST_CASE("one-hot blocks sum to one on every window") {
    const RawSeries raw = tiny_series(80, 2, 9);
    const Dataset ds = build_features(raw, 24, 1);
    const auto& L = ds.layout();
    for (std::size_t i = 0; i < ds.window_count(); i += 7) {
        const FeatureWindow w = ds.window(i);
        for (int t = 0; t <= w.H; ++t) {
            double hsum = 0, ssum = 0, wsum = 0;
            for (int j = 0; j < 24; ++j) hsum += w.steps(L.hour_index() + j, t);
            for (int j = 0; j < 4; ++j) ssum += w.steps(L.season_index() + j, t);
            for (int j = 0; j < 3; ++j) wsum += w.steps(L.weather_index() + j, t);
            CHECK(hsum == 1.0);
            CHECK(ssum == 1.0);
            CHECK(wsum == 1.0);
            for (Eigen::Index r = 0; r < w.steps.rows(); ++r) {
                CHECK(w.steps(r, t) >= 0.0);
                CHECK(w.steps(r, t) <= 1.0);
            }
        }
    }
}

TEST_CASE("chronological split") {
    const RawSeries raw125 = tiny_series(125);  // 100 windows at H=24, k=1
    const Dataset ds = build_features(raw125, 24, 1);
    REQUIRE(ds.window_count() == 100);

    const auto [train, test] = split(ds, 0.8);
    CHECK(train.window_count() == 80);
    CHECK(test.window_count() == 20);
    // Chronology: the first test window is the 81st overall.
    CHECK(test.window(0).t_end_epoch == ds.window(80).t_end_epoch);
    CHECK(train.window(0).t_end_epoch == ds.window(0).t_end_epoch);
    // Shared scaling.
    CHECK(train.scaling().load.min == ds.scaling().load.min);
    CHECK(test.scaling().load.max == ds.scaling().load.max);

    const RawSeries raw35 = tiny_series(35);  // 10 windows
    const Dataset ds10 = build_features(raw35, 24, 1);
    REQUIRE(ds10.window_count() == 10);
    const auto [a, b] = split(ds10, 0.5);
    CHECK(a.window_count() == 5);
    CHECK(b.window_count() == 5);

    const RawSeries raw26 = tiny_series(26);  // 1 window
    const Dataset ds1 = build_features(raw26, 24, 1);
    REQUIRE(ds1.window_count() == 1);
    CHECK_THROWS_AS(split(ds1, 0.8), ConfigError);
    CHECK_THROWS_AS(split(ds10, 0.0), ConfigError);
    CHECK_THROWS_AS(split(ds10, 1.0), ConfigError);
}

TEST_CASE("unscale_load endpoints and midpoint") {
    RawSeries raw = tiny_series(40);
    // Force the load range to [6500, 9500].
    raw.load_mw[0] = 6500.0;
    raw.load_mw[1] = 9500.0;
    for (std::size_t i = 2; i < raw.size(); ++i) {
        raw.load_mw[i] = 6500.0 + 3000.0 * static_cast<double>(i) / static_cast<double>(raw.size());
    }
    const Dataset ds = build_features(raw, 12, 1);
    CHECK(unscale_load(ds, 0.5) == Catch::Approx(8000.0));
    CHECK(unscale_load(ds, 0.0) == Catch::Approx(6500.0));
    CHECK(unscale_load(ds, 1.0) == Catch::Approx(9500.0));
}
