#ifndef GRIDSTORM_COMMON_HPP
#define GRIDSTORM_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gridstorm {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A cell that should hold a number (or a known token) does not parse.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t row)
        : Error(msg + " (row " + std::to_string(row) + ")"), row(row) {}
    std::size_t row;
};

/// Timestamps of two inputs (or of one series) do not line up.
struct AlignmentError : Error {
    AlignmentError(const std::string& msg, const std::string& instant)
        : Error(msg + " at " + instant), instant(instant) {}
    std::string instant;
};

/// Tensor/layer geometry does not match a model spec.
struct ShapeError : Error {
    using Error::Error;
};

/// Invalid configuration value.
struct ConfigError : Error {
    using Error::Error;
};

/// A series or dataset is too short for the requested operation.
struct LengthError : Error {
    using Error::Error;
};

/// Training loss exploded; carries the per-epoch validation trace.
struct DivergenceError : Error {
    DivergenceError(const std::string& msg, std::vector<double> trace)
        : Error(msg), trace(std::move(trace)) {}
    std::vector<double> trace;
};

/// Query budget of an oracle exhausted.
struct BudgetError : Error {
    BudgetError(long used, long budget)
        : Error("query budget exhausted: used " + std::to_string(used) + " of " +
                std::to_string(budget)),
          used(used), budget(budget) {}
    long used;
    long budget;
};

/// A perturbation sits on or outside the norm ball, so the log barrier is undefined.
struct BoundaryError : Error {
    using Error::Error;
};

/// No feasible commitment exists; carries the violating hours.
struct InfeasibleError : Error {
    InfeasibleError(const std::string& msg, std::vector<int> hours)
        : Error(msg), hours(std::move(hours)) {}
    std::vector<int> hours;
};

// ---------------------------------------------------------------------------
// Deterministic RNG
//
// Thin wrapper around a 64-bit xorshift-style generator with explicit
// uniform/normal transforms, so streams are reproducible independent of the
// standard library's distribution implementations.
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        // splitmix64 expansion of the seed; avoids weak low-entropy states.
        state_ = seed + 0x9e3779b97f4a7c15ULL;
        for (int i = 0; i < 4; ++i) next_u64();
        have_spare_ = false;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_int(i))]);
        }
    }

private:
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// ---------------------------------------------------------------------------
// UTC calendar helpers (hour resolution, no time zones)
// ---------------------------------------------------------------------------

namespace calendar {

constexpr std::int64_t kSecondsPerHour = 3600;
constexpr std::int64_t kSecondsPerDay = 86400;

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    int year;
    int month;
    int day;
};

inline CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

inline int hour_of_day(std::int64_t epoch_sec) {
    const std::int64_t sec = epoch_sec - floor_div(epoch_sec, kSecondsPerDay) * kSecondsPerDay;
    return static_cast<int>(sec / kSecondsPerHour);
}

/// 0 = Sunday ... 6 = Saturday.
inline int weekday(std::int64_t epoch_sec) {
    const std::int64_t days = floor_div(epoch_sec, kSecondsPerDay);
    return static_cast<int>(((days % 7) + 11) % 7);  // 1970-01-01 is a Thursday
}

inline bool is_weekend(std::int64_t epoch_sec) {
    const int wd = weekday(epoch_sec);
    return wd == 0 || wd == 6;
}

/// 0 = winter (DJF), 1 = spring (MAM), 2 = summer (JJA), 3 = autumn (SON).
inline int season(std::int64_t epoch_sec) {
    const CivilDate c = civil_from_days(floor_div(epoch_sec, kSecondsPerDay));
    switch (c.month) {
        case 12: case 1: case 2: return 0;
        case 3: case 4: case 5: return 1;
        case 6: case 7: case 8: return 2;
        default: return 3;
    }
}

inline std::string format_iso8601(std::int64_t epoch_sec) {
    const std::int64_t days = floor_div(epoch_sec, kSecondsPerDay);
    const CivilDate c = civil_from_days(days);
    const std::int64_t sec = epoch_sec - days * kSecondsPerDay;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                  static_cast<int>(sec / 3600), static_cast<int>((sec / 60) % 60),
                  static_cast<int>(sec % 60));
    return std::string(buf);
}

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (also accepts a space separator and a
/// missing trailing Z). Throws ParseError with the supplied row on failure.
inline std::int64_t parse_iso8601(const std::string& s, std::size_t row = 0) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    char sep = 0, tail = 0;
    const int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d%c", &y, &mo, &d, &sep, &h, &mi, &se, &tail);
    const bool sep_ok = (sep == 'T' || sep == ' ');
    const bool tail_ok = (n == 7) || (n == 8 && tail == 'Z');
    if (n < 7 || !sep_ok || !tail_ok || mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 ||
        mi < 0 || mi > 59 || se < 0 || se > 60) {
        throw ParseError("bad ISO-8601 timestamp '" + s + "'", row);
    }
    return days_from_civil(y, mo, d) * kSecondsPerDay + h * 3600 + mi * 60 + se;
}

}  // namespace calendar

// ---------------------------------------------------------------------------
// CSV (RFC 4180 on output; tolerant reader)
// ---------------------------------------------------------------------------

namespace csv {

inline std::string escape_field(const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << escape_field(fields[i]);
    }
    os << "\r\n";
}

/// Splits one line into fields, honoring double-quoted fields.
inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            // swallow
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;   // data rows
    std::vector<std::size_t> row_numbers;         // 1-based file line numbers
};

inline Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    Table t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
        } else {
            t.rows.push_back(std::move(fields));
            t.row_numbers.push_back(lineno);
        }
    }
    return t;
}

}  // namespace csv

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// Strict double parse; empty strings are the caller's business.
inline double parse_double(const std::string& s, std::size_t row) {
    const std::string t = trim(s);
    if (t.empty()) throw ParseError("empty numeric cell", row);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw ParseError("non-numeric cell '" + s + "'", row);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Parallel fan-out over independent cells. Results must be written to
// index-addressed slots so the outcome does not depend on scheduling.
// ---------------------------------------------------------------------------

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         unsigned max_threads = 0) {
    if (n == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (max_threads != 0 && max_threads < hw) hw = max_threads;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gridstorm

#endif  // GRIDSTORM_COMMON_HPP
