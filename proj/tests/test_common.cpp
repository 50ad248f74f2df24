#include <catch2/catch_amalgamated.hpp>

#include "gridstorm/common.hpp"

using namespace gridstorm;

TEST_CASE("calendar basics") {
    // 2015-01-01 00:00 UTC was a Thursday.
    const std::int64_t t0 = 1420070400;
    CHECK(calendar::weekday(t0) == 4);
    CHECK_FALSE(calendar::is_weekend(t0));
    CHECK(calendar::hour_of_day(t0) == 0);
    CHECK(calendar::season(t0) == 0);

    // 2015-01-04 was a Sunday.
    const std::int64_t sunday3am = t0 + 3 * 86400 + 3 * 3600;
    CHECK(calendar::weekday(sunday3am) == 0);
    CHECK(calendar::is_weekend(sunday3am));
    CHECK(calendar::hour_of_day(sunday3am) == 3);

    CHECK(calendar::season(calendar::parse_iso8601("2015-07-15T12:00:00Z")) == 2);
    CHECK(calendar::season(calendar::parse_iso8601("2015-04-01T00:00:00Z")) == 1);
    CHECK(calendar::season(calendar::parse_iso8601("2015-10-01T00:00:00Z")) == 3);
}

TEST_CASE("iso8601 round trip") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const std::int64_t t = 1420070400 + static_cast<std::int64_t>(rng.uniform_int(4000000)) * 3600;
        CHECK(calendar::parse_iso8601(calendar::format_iso8601(t)) == t);
    }
    CHECK_THROWS_AS(calendar::parse_iso8601("2015-13-01T00:00:00Z"), ParseError);
    CHECK_THROWS_AS(calendar::parse_iso8601("garbage"), ParseError);
}

TEST_CASE("csv writer quotes per RFC 4180") {
    std::ostringstream os;
    csv::write_row(os, {"a", "with,comma", "with\"quote", "plain"});
    CHECK(os.str() == "a,\"with,comma\",\"with\"\"quote\",plain\r\n");

    const auto fields = csv::split_line("a,\"with,comma\",\"with\"\"quote\",plain");
    REQUIRE(fields.size() == 4);
    CHECK(fields[1] == "with,comma");
    CHECK(fields[2] == "with\"quote");
}

TEST_CASE("rng determinism and moments") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng r(3);
    double sum = 0.0, sum2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        sum += x;
        sum2 += x * x;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(std::abs(sum2 / n - 1.0) < 0.05);
}

TEST_CASE("parallel_for covers every index once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}
