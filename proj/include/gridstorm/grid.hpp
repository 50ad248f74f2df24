#ifndef GRIDSTORM_GRID_HPP
#define GRIDSTORM_GRID_HPP

#include <array>
#include <limits>

#include <Eigen/Dense>

#include "gridstorm/common.hpp"

namespace gridstorm {

struct Generator {
    std::string name;
    double p_min = 0.0;
    double p_max = 0.0;
    double ramp_up = 0.0;    // MW per hour
    double ramp_dn = 0.0;
    int min_up = 1;          // hours
    int min_dn = 1;
    double cost_fixed = 0.0;     // $ per online hour
    double cost_marginal = 0.0;  // $ per MWh
    double startup_cost = 0.0;
    double shutdown_cost = 0.0;

    void validate() const {
        if (!(0.0 <= p_min && p_min <= p_max)) throw ConfigError(name + ": need 0 <= p_min <= p_max");
        if (!(ramp_up > 0.0 && ramp_dn > 0.0)) throw ConfigError(name + ": ramps must be > 0");
        if (min_up < 1 || min_dn < 1) throw ConfigError(name + ": min up/down times must be >= 1");
        if (startup_cost < 0 || shutdown_cost < 0) throw ConfigError(name + ": negative transition cost");
    }
};

struct Fleet {
    std::vector<Generator> generators;
    double reserve_frac = 0.03;

    int size() const { return static_cast<int>(generators.size()); }

    double total_capacity() const {
        double s = 0.0;
        for (const auto& g : generators) s += g.p_max;
        return s;
    }

    void validate() const {
        if (generators.empty()) throw ConfigError("fleet has no generators");
        if (reserve_frac < 0.0) throw ConfigError("reserve_frac must be >= 0");
        for (const auto& g : generators) g.validate();
    }

    /// Seven units totalling 11,900 MW; marginal costs spread so dispatching
    /// roughly 8,000 MW costs about $72k per hour. Calibrated desk-scale
    /// configuration, not measured data.
    static Fleet default_fleet() {
        Fleet f;
        f.reserve_frac = 0.03;
        f.generators = {
            {"base_2500", 800, 2500, 100, 100, 3, 3, 500, 5.0, 8000, 4000},
            {"coal_2000", 500, 2000, 100, 100, 3, 3, 400, 8.0, 5000, 2500},
            {"coal_1800", 450, 1800, 120, 120, 2, 2, 350, 10.0, 4500, 2000},
            {"ccgt_1500a", 300, 1500, 180, 180, 2, 2, 300, 13.0, 3000, 1500},
            {"ccgt_1500b", 300, 1500, 180, 180, 2, 2, 300, 16.0, 3000, 1500},
            {"gas_1400", 200, 1400, 280, 280, 1, 1, 250, 25.0, 2000, 1000},
            {"peak_1200", 100, 1200, 400, 400, 1, 1, 200, 35.0, 1200, 600},
        };
        return f;
    }
};

/// Commitment state a day starts from: per generator, online or not and how
/// many hours it has already dwelled in that state.
struct GenInitial {
    bool on = false;
    int dwell = 1;
};

inline std::vector<GenInitial> all_off_initial(const Fleet& fleet) {
    std::vector<GenInitial> init(static_cast<std::size_t>(fleet.size()));
    for (int g = 0; g < fleet.size(); ++g) {
        init[static_cast<std::size_t>(g)] = GenInitial{false, fleet.generators[static_cast<std::size_t>(g)].min_dn};
    }
    return init;
}

struct CommitmentSchedule {
    int horizon = 24;
    std::vector<std::vector<std::uint8_t>> u;  // [g][t] online
    std::vector<std::vector<std::uint8_t>> z;  // startup
    std::vector<std::vector<std::uint8_t>> y;  // shutdown
    std::vector<GenInitial> initial;
    double planned_cost = 0.0;  // objective value on the forecast

    std::uint32_t committed_mask(int t) const {
        std::uint32_t mask = 0;
        for (std::size_t g = 0; g < u.size(); ++g) {
            if (u[g][static_cast<std::size_t>(t)]) mask |= 1u << g;
        }
        return mask;
    }
};

// ---------------------------------------------------------------------------
// Economic dispatch (merit order; exact for affine costs)
// ---------------------------------------------------------------------------

struct EdResult {
    Eigen::VectorXd p;      // per generator, 0 for uncommitted units
    double cost = 0.0;      // sum of fixed + marginal costs of online units
    double shed = 0.0;      // unserved MW (load above committed capacity)
    double surplus = 0.0;   // over-commitment MW (load below committed minimum)
    bool feasible = true;
};

/// Fills committed units from their minimums in ascending marginal-cost
/// order. Load above committed capacity is shed; load below the committed
/// minimum leaves units at p_min with the surplus flagged.
inline EdResult solve_ed(const Fleet& fleet, std::uint32_t committed, double load) {
    fleet.validate();
    if (committed == 0) throw ConfigError("economic dispatch needs a non-empty committed set");
    const int G = fleet.size();

    EdResult r;
    r.p = Eigen::VectorXd::Zero(G);
    double sum_min = 0.0, sum_max = 0.0;
    for (int g = 0; g < G; ++g) {
        if (committed & (1u << g)) {
            sum_min += fleet.generators[static_cast<std::size_t>(g)].p_min;
            sum_max += fleet.generators[static_cast<std::size_t>(g)].p_max;
        }
    }

    if (load > sum_max) {
        for (int g = 0; g < G; ++g) {
            if (committed & (1u << g)) r.p(g) = fleet.generators[static_cast<std::size_t>(g)].p_max;
        }
        r.shed = load - sum_max;
        r.feasible = false;
    } else if (load < sum_min) {
        for (int g = 0; g < G; ++g) {
            if (committed & (1u << g)) r.p(g) = fleet.generators[static_cast<std::size_t>(g)].p_min;
        }
        r.surplus = sum_min - load;
        r.feasible = false;
    } else {
        std::vector<int> order;
        for (int g = 0; g < G; ++g) {
            if (committed & (1u << g)) {
                r.p(g) = fleet.generators[static_cast<std::size_t>(g)].p_min;
                order.push_back(g);
            }
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double ca = fleet.generators[static_cast<std::size_t>(a)].cost_marginal;
            const double cb = fleet.generators[static_cast<std::size_t>(b)].cost_marginal;
            return ca != cb ? ca < cb : a < b;
        });
        double remaining = load - sum_min;
        for (int g : order) {
            const auto& gen = fleet.generators[static_cast<std::size_t>(g)];
            const double add = std::min(remaining, gen.p_max - gen.p_min);
            r.p(g) += add;
            remaining -= add;
            if (remaining <= 1e-12) break;
        }
    }

    for (int g = 0; g < G; ++g) {
        if (committed & (1u << g)) {
            const auto& gen = fleet.generators[static_cast<std::size_t>(g)];
            r.cost += gen.cost_fixed + gen.cost_marginal * r.p(g);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Unit commitment
//
// Exact dynamic program over joint per-generator (status, dwell) states with
// dwell counters saturated at the unit's min up/down time: once a counter
// reaches its limit the toggle becomes legal and staying longer changes
// nothing, so the saturated state space loses no optimal schedule. Stage
// costs come from merit-order dispatch of the forecast; a transition is
// feasible when every unit online across both hours moves within its ramp
// (start/stop hours exempt) and the committed set covers the forecast with
// the spinning-reserve margin.
// ---------------------------------------------------------------------------

namespace uc_detail {

struct GenStateSpace {
    int min_up;
    int min_dn;
    int radix() const { return min_up + min_dn; }
    // state id: [0, min_up) -> on with dwell id+1; [min_up, radix) -> off with dwell id-min_up+1
    bool on(int id) const { return id < min_up; }
    int dwell(int id) const { return on(id) ? id + 1 : id - min_up + 1; }
    bool can_toggle(int id) const { return on(id) ? dwell(id) >= min_up : dwell(id) >= min_dn; }
    int stay(int id) const {
        if (on(id)) return std::min(id + 1, min_up - 1);
        return std::min(id + 1, radix() - 1);
    }
    int toggle(int id) const { return on(id) ? min_up : 0; }  // dwell restarts at 1
    int from_initial(const GenInitial& init) const {
        const int dwell = std::max(1, init.dwell);
        if (init.on) return std::min(dwell, min_up) - 1;
        return min_up + std::min(dwell, min_dn) - 1;
    }
};

}  // namespace uc_detail

/// Cost-minimal commitment for the forecast horizon. Throws InfeasibleError,
/// naming the violating hours, when no committed set can cover an hour (or
/// the dynamics admit no path). At most 8 generators.
inline CommitmentSchedule solve_uc(const Fleet& fleet, const std::vector<double>& forecast_mw,
                                   const std::vector<GenInitial>& initial_state) {
    fleet.validate();
    const int G = fleet.size();
    if (G > 8) throw ConfigError("exact unit-commitment solver handles at most 8 generators");
    const int T = static_cast<int>(forecast_mw.size());
    if (T < 1) throw LengthError("empty forecast");
    for (double f : forecast_mw) {
        if (!(f > 0.0)) throw ConfigError("forecast loads must be positive");
    }
    if (static_cast<int>(initial_state.size()) != G) {
        throw ConfigError("initial state size does not match fleet");
    }

    std::vector<uc_detail::GenStateSpace> space;
    space.reserve(static_cast<std::size_t>(G));
    int n_states = 1;
    for (const auto& g : fleet.generators) {
        space.push_back({g.min_up, g.min_dn});
        n_states *= space.back().radix();
    }
    const int n_masks = 1 << G;

    // Stage feasibility and dispatch cost per (mask, hour).
    std::vector<std::vector<double>> stage_cost(static_cast<std::size_t>(T),
                                                std::vector<double>(static_cast<std::size_t>(n_masks),
                                                                    std::numeric_limits<double>::infinity()));
    std::vector<std::vector<Eigen::VectorXd>> stage_p(
        static_cast<std::size_t>(T), std::vector<Eigen::VectorXd>(static_cast<std::size_t>(n_masks)));
    std::vector<int> hour_has_feasible(static_cast<std::size_t>(T), 0);
    for (int t = 0; t < T; ++t) {
        for (int mask = 1; mask < n_masks; ++mask) {
            double cap = 0.0, floor = 0.0;
            for (int g = 0; g < G; ++g) {
                if (mask & (1 << g)) {
                    cap += fleet.generators[static_cast<std::size_t>(g)].p_max;
                    floor += fleet.generators[static_cast<std::size_t>(g)].p_min;
                }
            }
            const double need = (1.0 + fleet.reserve_frac) * forecast_mw[static_cast<std::size_t>(t)];
            if (cap + 1e-9 < need) continue;                                  // reserve adequacy
            if (floor > forecast_mw[static_cast<std::size_t>(t)] + 1e-9) continue;  // balance floor
            const EdResult ed = solve_ed(fleet, static_cast<std::uint32_t>(mask),
                                         forecast_mw[static_cast<std::size_t>(t)]);
            if (!ed.feasible) continue;
            stage_cost[static_cast<std::size_t>(t)][static_cast<std::size_t>(mask)] = ed.cost;
            stage_p[static_cast<std::size_t>(t)][static_cast<std::size_t>(mask)] = ed.p;
            hour_has_feasible[static_cast<std::size_t>(t)] = 1;
        }
    }
    {
        std::vector<int> bad;
        for (int t = 0; t < T; ++t) {
            if (!hour_has_feasible[static_cast<std::size_t>(t)]) bad.push_back(t);
        }
        if (!bad.empty()) {
            std::string msg = "no committed set can cover hour(s)";
            for (int t : bad) msg += " " + std::to_string(t);
            msg += " within reserve-adjusted capacity";
            throw InfeasibleError(msg, bad);
        }
    }

    auto decode = [&](int state, std::vector<int>& ids) {
        for (int g = 0; g < G; ++g) {
            ids[static_cast<std::size_t>(g)] = state % space[static_cast<std::size_t>(g)].radix();
            state /= space[static_cast<std::size_t>(g)].radix();
        }
    };
    auto mask_of = [&](const std::vector<int>& ids) {
        int mask = 0;
        for (int g = 0; g < G; ++g) {
            if (space[static_cast<std::size_t>(g)].on(ids[static_cast<std::size_t>(g)])) mask |= 1 << g;
        }
        return mask;
    };

    // Ramp feasibility of moving between two dispatched hours; start/stop
    // hours are exempt, units online across both hours obey per-unit limits.
    auto ramp_ok = [&](int prev_mask, int mask, const Eigen::VectorXd& p_prev,
                       const Eigen::VectorXd& p_now) {
        const int common = prev_mask & mask;
        for (int g = 0; g < G; ++g) {
            if (common & (1 << g)) {
                const double diff = p_now(g) - p_prev(g);
                const auto& gen = fleet.generators[static_cast<std::size_t>(g)];
                if (diff > gen.ramp_up + 1e-9 || -diff > gen.ramp_dn + 1e-9) return false;
            }
        }
        return true;
    };

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(static_cast<std::size_t>(n_states), kInf);
    std::vector<std::vector<int>> parent(static_cast<std::size_t>(T),
                                         std::vector<int>(static_cast<std::size_t>(n_states), -1));

    // Initial joint state.
    int init_state = 0;
    {
        int mult = 1;
        for (int g = 0; g < G; ++g) {
            init_state += space[static_cast<std::size_t>(g)].from_initial(initial_state[static_cast<std::size_t>(g)]) * mult;
            mult *= space[static_cast<std::size_t>(g)].radix();
        }
    }

    std::vector<int> ids(static_cast<std::size_t>(G)), nids(static_cast<std::size_t>(G));
    std::vector<double> next_dp;

    // Expand one source state at stage t into dp_next.
    auto expand = [&](int state, double cost, int t, const Eigen::VectorXd* p_prev, int prev_mask,
                      std::vector<double>& dp_next, std::vector<int>& parent_col) {
        decode(state, ids);
        int togglable = 0;
        for (int g = 0; g < G; ++g) {
            if (space[static_cast<std::size_t>(g)].can_toggle(ids[static_cast<std::size_t>(g)])) togglable |= 1 << g;
        }
        // Enumerate every subset of togglable units (submask trick, plus 0).
        int sub = togglable;
        while (true) {
            int next_mask_bits = 0;
            double trans_cost = 0.0;
            int mult = 1;
            int nstate = 0;
            for (int g = 0; g < G; ++g) {
                const auto& sp = space[static_cast<std::size_t>(g)];
                const int id = ids[static_cast<std::size_t>(g)];
                int nid;
                if (sub & (1 << g)) {
                    nid = sp.toggle(id);
                    trans_cost += sp.on(id) ? fleet.generators[static_cast<std::size_t>(g)].shutdown_cost
                                            : fleet.generators[static_cast<std::size_t>(g)].startup_cost;
                } else {
                    nid = sp.stay(id);
                }
                if (sp.on(nid)) next_mask_bits |= 1 << g;
                nstate += nid * mult;
                mult *= sp.radix();
            }
            do {
                if (next_mask_bits == 0) break;
                const double sc = stage_cost[static_cast<std::size_t>(t)][static_cast<std::size_t>(next_mask_bits)];
                if (sc == kInf) break;
                if (p_prev != nullptr &&
                    !ramp_ok(prev_mask, next_mask_bits,
                             *p_prev, stage_p[static_cast<std::size_t>(t)][static_cast<std::size_t>(next_mask_bits)])) {
                    break;
                }
                const double total = cost + trans_cost + sc;
                if (total < dp_next[static_cast<std::size_t>(nstate)]) {
                    dp_next[static_cast<std::size_t>(nstate)] = total;
                    parent_col[static_cast<std::size_t>(nstate)] = state;
                }
            } while (false);
            if (sub == 0) break;
            sub = (sub - 1) & togglable;
        }
    };

    // Stage 0 from the initial state (no ramp check across the day boundary).
    next_dp.assign(static_cast<std::size_t>(n_states), kInf);
    expand(init_state, 0.0, 0, nullptr, 0, next_dp, parent[0]);
    dp.swap(next_dp);

    for (int t = 1; t < T; ++t) {
        next_dp.assign(static_cast<std::size_t>(n_states), kInf);
        for (int state = 0; state < n_states; ++state) {
            const double cost = dp[static_cast<std::size_t>(state)];
            if (cost == kInf) continue;
            decode(state, ids);
            const int prev_mask = mask_of(ids);
            expand(state, cost, t,
                   &stage_p[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(prev_mask)],
                   prev_mask, next_dp, parent[static_cast<std::size_t>(t)]);
        }
        dp.swap(next_dp);
    }

    int best_state = -1;
    double best_cost = kInf;
    for (int state = 0; state < n_states; ++state) {
        if (dp[static_cast<std::size_t>(state)] < best_cost) {
            best_cost = dp[static_cast<std::size_t>(state)];
            best_state = state;
        }
    }
    if (best_state < 0) {
        std::vector<int> hours(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t) hours[static_cast<std::size_t>(t)] = t;
        throw InfeasibleError("no feasible commitment path through the horizon "
                              "(min up/down and ramp dynamics exclude every schedule)",
                              hours);
    }

    // Backtrack.
    CommitmentSchedule sched;
    sched.horizon = T;
    sched.initial = initial_state;
    sched.planned_cost = best_cost;
    sched.u.assign(static_cast<std::size_t>(G), std::vector<std::uint8_t>(static_cast<std::size_t>(T), 0));
    sched.z = sched.u;
    sched.y = sched.u;
    std::vector<int> chain(static_cast<std::size_t>(T));
    {
        int state = best_state;
        for (int t = T - 1; t >= 0; --t) {
            chain[static_cast<std::size_t>(t)] = state;
            state = parent[static_cast<std::size_t>(t)][static_cast<std::size_t>(state)];
        }
    }
    for (int t = 0; t < T; ++t) {
        decode(chain[static_cast<std::size_t>(t)], ids);
        for (int g = 0; g < G; ++g) {
            sched.u[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)] =
                space[static_cast<std::size_t>(g)].on(ids[static_cast<std::size_t>(g)]) ? 1 : 0;
        }
    }
    for (int g = 0; g < G; ++g) {
        bool prev_on = initial_state[static_cast<std::size_t>(g)].on;
        for (int t = 0; t < T; ++t) {
            const bool now = sched.u[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)] != 0;
            sched.z[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)] = (!prev_on && now) ? 1 : 0;
            sched.y[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)] = (prev_on && !now) ? 1 : 0;
            prev_on = now;
        }
    }
    return sched;
}

inline CommitmentSchedule solve_uc(const Fleet& fleet, const std::vector<double>& forecast_mw) {
    return solve_uc(fleet, forecast_mw, all_off_initial(fleet));
}

// ---------------------------------------------------------------------------
// Two-stage day simulation
// ---------------------------------------------------------------------------

struct DayOutcome {
    CommitmentSchedule schedule;
    std::vector<EdResult> dispatch;       // per hour, on the actual load
    double total_cost = 0.0;              // dispatch + startup + shutdown
    double shed_energy_mwh = 0.0;
    double surplus_energy_mwh = 0.0;
    int n_ramp_violations = 0;
    std::vector<double> ramp_shortfall_mw;  // per hour
    std::vector<double> forecast_mw;
    std::vector<double> actual_mw;
};

/// Commits to the forecast, dispatches the actual load against the committed
/// sets, and records infeasibilities: shed/surplus comes from dispatch, ramp
/// violations compare the net dispatch change of units online across
/// consecutive hours against their aggregate ramp capability (start/stop
/// hours exempt, matching the commitment model). Violations are recorded,
/// not repaired.
inline DayOutcome run_day(const Fleet& fleet, const std::vector<double>& forecast_mw,
                          const std::vector<double>& actual_mw,
                          const std::vector<GenInitial>& initial_state) {
    if (forecast_mw.size() != actual_mw.size()) throw LengthError("forecast/actual length mismatch");
    const int T = static_cast<int>(forecast_mw.size());
    const int G = fleet.size();

    DayOutcome out;
    out.schedule = solve_uc(fleet, forecast_mw, initial_state);
    out.forecast_mw = forecast_mw;
    out.actual_mw = actual_mw;
    out.ramp_shortfall_mw.assign(static_cast<std::size_t>(T), 0.0);

    double cost = 0.0;
    for (int g = 0; g < G; ++g) {
        for (int t = 0; t < T; ++t) {
            if (out.schedule.z[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)]) {
                cost += fleet.generators[static_cast<std::size_t>(g)].startup_cost;
            }
            if (out.schedule.y[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)]) {
                cost += fleet.generators[static_cast<std::size_t>(g)].shutdown_cost;
            }
        }
    }

    out.dispatch.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        EdResult ed = solve_ed(fleet, out.schedule.committed_mask(t), actual_mw[static_cast<std::size_t>(t)]);
        cost += ed.cost;
        out.shed_energy_mwh += ed.shed;
        out.surplus_energy_mwh += ed.surplus;
        out.dispatch.push_back(std::move(ed));
    }
    out.total_cost = cost;

    for (int t = 1; t < T; ++t) {
        const std::uint32_t prev = out.schedule.committed_mask(t - 1);
        const std::uint32_t now = out.schedule.committed_mask(t);
        const std::uint32_t common = prev & now;
        if (common == 0) continue;
        double net = 0.0, up_cap = 0.0, dn_cap = 0.0;
        for (int g = 0; g < G; ++g) {
            if (common & (1u << g)) {
                net += out.dispatch[static_cast<std::size_t>(t)].p(g) -
                       out.dispatch[static_cast<std::size_t>(t - 1)].p(g);
                up_cap += fleet.generators[static_cast<std::size_t>(g)].ramp_up;
                dn_cap += fleet.generators[static_cast<std::size_t>(g)].ramp_dn;
            }
        }
        double shortfall = 0.0;
        if (net > up_cap + 1e-6) shortfall = net - up_cap;
        if (-net > dn_cap + 1e-6) shortfall = -net - dn_cap;
        if (shortfall > 0.0) {
            ++out.n_ramp_violations;
            out.ramp_shortfall_mw[static_cast<std::size_t>(t)] = shortfall;
        }
    }
    return out;
}

inline DayOutcome run_day(const Fleet& fleet, const std::vector<double>& forecast_mw,
                          const std::vector<double>& actual_mw) {
    return run_day(fleet, forecast_mw, actual_mw, all_off_initial(fleet));
}

// ---------------------------------------------------------------------------
// Toy example: two identical-capacity units, four forecast-falsification
// scenarios over a 4-hour horizon, no minimum up/down times.
// ---------------------------------------------------------------------------

struct ToyScenario {
    std::string name;
    std::string anomaly;  // "shed", "cost", "ramp"
    std::vector<double> forecast_mw;
    std::vector<double> actual_mw;
    DayOutcome attacked;
    DayOutcome truthful;
};

struct ToyReport {
    Fleet fleet;
    std::vector<ToyScenario> scenarios;
};

inline ToyReport toy_example() {
    Fleet fleet;
    fleet.reserve_frac = 0.03;
    fleet.generators = {
        {"unit_a", 10, 100, 40, 40, 1, 1, 100, 20.0, 500, 200},
        {"unit_b", 10, 100, 40, 40, 1, 1, 100, 40.0, 500, 200},
    };

    ToyReport report;
    report.fleet = fleet;

    const auto run_case = [&](const std::string& name, const std::string& anomaly,
                              std::vector<double> forecast, std::vector<double> actual) {
        ToyScenario sc;
        sc.name = name;
        sc.anomaly = anomaly;
        sc.forecast_mw = forecast;
        sc.actual_mw = actual;
        sc.attacked = run_day(fleet, forecast, actual);
        sc.truthful = run_day(fleet, actual, actual);
        report.scenarios.push_back(std::move(sc));
    };

    // (a) load-min forecast shaves the peak; the single committed unit cannot
    //     carry the real peak and load is shed.
    run_case("capacity_shortfall", "shed", {55, 70, 85, 80}, {60, 80, 120, 90});
    // (b) inflated peak commits a second unit that the real load never needs.
    run_case("extra_commitment", "cost", {60, 80, 120, 70}, {60, 80, 95, 70});
    // (c) uniformly inflated forecast keeps both units online for most hours.
    run_case("uneconomic_dispatch", "cost", {90, 110, 125, 100}, {60, 80, 95, 70});
    // (d) flattened ramp hides the hour-2 climb; the lone committed unit
    //     cannot follow the real ramp.
    run_case("ramp_violation", "ramp", {40, 60, 80, 60}, {40, 50, 95, 60});

    return report;
}

}  // namespace gridstorm

#endif  // GRIDSTORM_GRID_HPP
