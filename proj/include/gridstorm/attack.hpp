#ifndef GRIDSTORM_ATTACK_HPP
#define GRIDSTORM_ATTACK_HPP

#include <atomic>
#include <numeric>
#include <optional>

#include "gridstorm/forecast.hpp"

namespace gridstorm {

enum class Norm : int { linf = 0, l1 = 1, l0 = 2 };

inline const char* to_string(Norm n) {
    switch (n) {
        case Norm::linf: return "linf";
        case Norm::l1: return "l1";
        default: return "l0";
    }
}

inline Norm norm_from_string(const std::string& s) {
    if (s == "linf") return Norm::linf;
    if (s == "l1") return Norm::l1;
    if (s == "l0") return Norm::l0;
    throw ConfigError("unknown norm '" + s + "'");
}

/// gamma = -1 pushes forecasts up, gamma = +1 pushes them down; the attacker
/// minimizes gamma * f. epsilon is a per-time-step budget in °F.
struct AttackConfig {
    int gamma = -1;
    double epsilon_f = 4.0;
    Norm norm_p = Norm::linf;
    std::optional<double> alpha;  // scaled-unit step; default eps_scaled / 10 per entry
    double beta = 0.01;           // barrier weight, 0 disables the barrier
    int iters = 20;
    double delta = 1e-3;          // probe step in scaled units
    long query_budget = 4000000;  // for gradient-estimation oracles

    void validate() const {
        if (gamma != -1 && gamma != 1) throw ConfigError("gamma must be -1 or +1");
        if (!(epsilon_f > 0.0)) throw ConfigError("epsilon must be > 0");
        if (alpha && !(*alpha > 0.0)) throw ConfigError("alpha must be > 0");
        if (beta < 0.0) throw ConfigError("beta must be >= 0");
        if (iters < 1) throw ConfigError("iters must be >= 1");
        if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
    }
};

enum class Strategy : int { maximize = 0, minimize = 1 };

inline const char* to_string(Strategy s) { return s == Strategy::maximize ? "maximize" : "minimize"; }
inline int strategy_gamma(Strategy s) { return s == Strategy::maximize ? -1 : +1; }

// ---------------------------------------------------------------------------
// Norm-ball projection of a °F deviation vector (one time step)
// ---------------------------------------------------------------------------

inline double deviation_norm(const Eigen::VectorXd& deltas_f, Norm p) {
    switch (p) {
        case Norm::linf: return deltas_f.size() ? deltas_f.cwiseAbs().maxCoeff() : 0.0;
        case Norm::l1: return deltas_f.cwiseAbs().sum();
        default: return static_cast<double>((deltas_f.array() != 0.0).count());
    }
}

/// Projects onto the epsilon-ball of the given norm. L-inf clips per entry,
/// L1 uses the simplex-based Euclidean projection, L0 keeps the epsilon
/// largest-magnitude entries (ties resolved toward the lower index).
inline Eigen::VectorXd project(const Eigen::VectorXd& temp_deltas_f, Norm norm_p, double epsilon) {
    const Eigen::Index n = temp_deltas_f.size();
    switch (norm_p) {
        case Norm::linf:
            return temp_deltas_f.cwiseMax(-epsilon).cwiseMin(epsilon);
        case Norm::l1: {
            if (temp_deltas_f.cwiseAbs().sum() <= epsilon) return temp_deltas_f;
            std::vector<double> mags(static_cast<std::size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i) mags[static_cast<std::size_t>(i)] = std::abs(temp_deltas_f(i));
            std::sort(mags.begin(), mags.end(), std::greater<double>());
            double cum = 0.0, theta = 0.0;
            for (std::size_t j = 0; j < mags.size(); ++j) {
                cum += mags[j];
                const double cand = (cum - epsilon) / static_cast<double>(j + 1);
                if (mags[j] - cand > 0.0) theta = cand;
            }
            Eigen::VectorXd out(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double mag = std::max(std::abs(temp_deltas_f(i)) - theta, 0.0);
                out(i) = temp_deltas_f(i) >= 0.0 ? mag : -mag;
            }
            return out;
        }
        default: {
            if (std::abs(epsilon - std::round(epsilon)) > 1e-9 || epsilon < 0.0) {
                throw ConfigError("L0 projection needs a non-negative integer epsilon, got " +
                                  std::to_string(epsilon));
            }
            const auto keep = static_cast<Eigen::Index>(std::llround(epsilon));
            if (keep >= n) return temp_deltas_f;
            std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
            std::iota(idx.begin(), idx.end(), Eigen::Index{0});
            std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
                const double ma = std::abs(temp_deltas_f(a)), mb = std::abs(temp_deltas_f(b));
                return ma != mb ? ma > mb : a < b;
            });
            Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
            for (Eigen::Index j = 0; j < keep; ++j) out(idx[static_cast<std::size_t>(j)]) = temp_deltas_f(idx[static_cast<std::size_t>(j)]);
            return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Adversarial windows
// ---------------------------------------------------------------------------

struct DeviationReport {
    std::vector<double> delta_f;     // achieved °F deltas per temperature entry, step-major
    double worst_step_norm_f = 0.0;  // max over time steps of the per-step norm
    int iterations_used = 0;
    long queries_used = 0;
    bool budget_exhausted = false;
};

/// A perturbed window differing from its original only in temperature
/// entries, with every per-step deviation inside the °F budget.
struct AdversarialWindow {
    FeatureWindow original;
    FeatureWindow perturbed;
    DeviationReport report;
};

namespace detail {

/// Scaled-unit step sizes per temperature entry; frozen (0) where a station's
/// temperature range degenerated to a point, since any scaled move there
/// would cost 0 °F of budget while still distorting the model input.
inline Eigen::VectorXd entry_steps(const FeatureWindow& w, const AttackConfig& cfg) {
    const int S = w.layout.stations;
    Eigen::VectorXd a(w.temp_entries());
    for (int e = 0; e < w.temp_entries(); ++e) {
        const double range = w.temp_range_f[static_cast<std::size_t>(e % S)];
        if (range <= 0.0) {
            a(e) = 0.0;
        } else if (cfg.alpha) {
            a(e) = *cfg.alpha;
        } else {
            a(e) = cfg.epsilon_f / range / 10.0;
        }
    }
    return a;
}

inline Eigen::VectorXd window_temps(const FeatureWindow& w) {
    const int S = w.layout.stations;
    Eigen::VectorXd v(w.temp_entries());
    for (int t = 0; t <= w.H; ++t) {
        for (int s = 0; s < S; ++s) v(t * S + s) = w.temp_at(t, s);
    }
    return v;
}

inline void set_window_temps(FeatureWindow& w, const Eigen::VectorXd& temps) {
    const int S = w.layout.stations;
    for (int t = 0; t <= w.H; ++t) {
        for (int s = 0; s < S; ++s) w.temp_at(t, s) = temps(t * S + s);
    }
}

/// Per-step °F deviation vector for step i of a scaled delta.
inline Eigen::VectorXd step_deltas_f(const FeatureWindow& w, const Eigen::VectorXd& delta_scaled,
                                     int step) {
    const int S = w.layout.stations;
    Eigen::VectorXd d(S);
    for (int s = 0; s < S; ++s) {
        d(s) = delta_scaled(step * S + s) * w.temp_range_f[static_cast<std::size_t>(s)];
    }
    return d;
}

/// Projects every step of a scaled delta onto the °F ball and clamps the
/// resulting scaled temperatures to [0, 1].
inline Eigen::VectorXd project_and_clamp(const FeatureWindow& w, const Eigen::VectorXd& orig_temps,
                                         const Eigen::VectorXd& delta_scaled, const AttackConfig& cfg) {
    const int S = w.layout.stations;
    Eigen::VectorXd out = delta_scaled;
    for (int t = 0; t <= w.H; ++t) {
        Eigen::VectorXd df = step_deltas_f(w, out, t);
        df = project(df, cfg.norm_p, cfg.epsilon_f);
        for (int s = 0; s < S; ++s) {
            const double range = w.temp_range_f[static_cast<std::size_t>(s)];
            out(t * S + s) = range > 0.0 ? df(s) / range : 0.0;
        }
    }
    for (Eigen::Index e = 0; e < out.size(); ++e) {
        const double clamped = std::min(1.0, std::max(0.0, orig_temps(e) + out(e)));
        out(e) = clamped - orig_temps(e);
    }
    return out;
}

inline AdversarialWindow make_adversarial(const FeatureWindow& original,
                                          const Eigen::VectorXd& orig_temps,
                                          const Eigen::VectorXd& delta_scaled, Norm norm_p,
                                          int iterations, long queries, bool exhausted) {
    AdversarialWindow adv;
    adv.original = original;
    adv.perturbed = original;
    set_window_temps(adv.perturbed, orig_temps + delta_scaled);
    adv.report.iterations_used = iterations;
    adv.report.queries_used = queries;
    adv.report.budget_exhausted = exhausted;
    adv.report.delta_f.resize(static_cast<std::size_t>(original.temp_entries()));
    const int S = original.layout.stations;
    double worst = 0.0;
    for (int t = 0; t <= original.H; ++t) {
        Eigen::VectorXd df(S);
        for (int s = 0; s < S; ++s) {
            const double d = delta_scaled(t * S + s) * original.temp_range_f[static_cast<std::size_t>(s)];
            adv.report.delta_f[static_cast<std::size_t>(t * S + s)] = d;
            df(s) = d;
        }
        worst = std::max(worst, deviation_norm(df, norm_p));
    }
    adv.report.worst_step_norm_f = worst;
    return adv;
}

/// Gradient of the per-step barrier sum with respect to the scaled deltas.
/// The L0 count is piecewise constant, so its barrier contributes no
/// gradient.
inline Eigen::VectorXd barrier_gradient(const FeatureWindow& w, const Eigen::VectorXd& delta_scaled,
                                        const AttackConfig& cfg,
                                        const std::vector<double>& step_multiplier = {}) {
    const int S = w.layout.stations;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(delta_scaled.size());
    if (cfg.beta <= 0.0 || cfg.norm_p == Norm::l0) return g;
    for (int t = 0; t <= w.H; ++t) {
        const Eigen::VectorXd df = step_deltas_f(w, delta_scaled, t);
        const double n = deviation_norm(df, cfg.norm_p);
        const double gap = std::max(cfg.epsilon_f - n, 1e-12);
        const double mult = step_multiplier.empty() ? 1.0 : step_multiplier[static_cast<std::size_t>(t)];
        const double coef = mult * cfg.beta / gap;
        if (cfg.norm_p == Norm::linf) {
            if (n == 0.0) continue;
            int arg = 0;
            df.cwiseAbs().maxCoeff(&arg);
            const double sgn = df(arg) > 0.0 ? 1.0 : -1.0;
            g(t * S + arg) += coef * sgn * w.temp_range_f[static_cast<std::size_t>(arg)];
        } else {  // l1
            for (int s = 0; s < S; ++s) {
                const double sgn = df(s) > 0.0 ? 1.0 : (df(s) < 0.0 ? -1.0 : 0.0);
                g(t * S + s) += coef * sgn * w.temp_range_f[static_cast<std::size_t>(s)];
            }
        }
    }
    return g;
}

inline Eigen::VectorXd sign_vector(const Eigen::VectorXd& v) {
    return v.unaryExpr([](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

inline double worst_step_norm(const FeatureWindow& w, const Eigen::VectorXd& delta_scaled, Norm p) {
    double worst = 0.0;
    for (int t = 0; t <= w.H; ++t) {
        worst = std::max(worst, deviation_norm(step_deltas_f(w, delta_scaled, t), p));
    }
    return worst;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Log-barrier loss
// ---------------------------------------------------------------------------

/// gamma * f(perturbed) - beta * sum_i log(eps - ||delta_i||_p), one barrier
/// term per time step. With beta > 0 the perturbation must sit strictly
/// inside the ball, else a BoundaryError asks the caller to shrink it.
inline double barrier_loss(const ForecastModel& m, const FeatureWindow& original,
                           const FeatureWindow& perturbed, const AttackConfig& cfg) {
    cfg.validate();
    check_geometry(m, perturbed);
    const double base = static_cast<double>(cfg.gamma) * predict(m, perturbed);
    if (cfg.beta <= 0.0) return base;

    const Eigen::VectorXd delta =
        detail::window_temps(perturbed) - detail::window_temps(original);
    double barrier = 0.0;
    for (int t = 0; t <= original.H; ++t) {
        const double n = deviation_norm(detail::step_deltas_f(original, delta, t), cfg.norm_p);
        if (n >= cfg.epsilon_f) {
            throw BoundaryError("per-step deviation " + std::to_string(n) +
                                " °F is on or outside the " + std::to_string(cfg.epsilon_f) +
                                " °F ball at step " + std::to_string(t));
        }
        barrier += std::log(cfg.epsilon_f - n);
    }
    return base - cfg.beta * barrier;
}

// ---------------------------------------------------------------------------
// White-box attack
// ---------------------------------------------------------------------------

/// Iterated sign-of-gradient descent of the barrier loss over the window's
/// temperature entries, followed by projection onto the per-step ball and a
/// [0,1] clamp. Tracks the best projected iterate (the untouched window is
/// iterate zero), so gamma * f never ends up worse than the clean input.
inline AdversarialWindow white_box_attack(const ForecastModel& m, const FeatureWindow& w,
                                          const AttackConfig& cfg) {
    cfg.validate();
    check_geometry(m, w);
    const Eigen::VectorXd orig = detail::window_temps(w);
    const Eigen::VectorXd alpha = detail::entry_steps(w, cfg);
    const double gamma = static_cast<double>(cfg.gamma);

    FeatureWindow work = w;
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(orig.size());
    Eigen::VectorXd best = delta;
    double best_score = gamma * predict(m, w);
    int iterations = 0;

    for (int j = 0; j < cfg.iters; ++j) {
        detail::set_window_temps(work, orig + delta);
        Eigen::VectorXd g = gamma * input_gradient(m, work);
        g += detail::barrier_gradient(w, delta, cfg);
        if (g.cwiseAbs().maxCoeff() == 0.0) break;
        ++iterations;

        Eigen::VectorXd step = alpha;
        Eigen::VectorXd cand = delta - step.cwiseProduct(detail::sign_vector(g));
        if (cfg.beta > 0.0 && cfg.norm_p != Norm::l0) {
            // The raw sign step can leave the barrier's domain; halve it a few
            // times, then pull the offending steps just inside the boundary.
            int halvings = 0;
            while (detail::worst_step_norm(w, cand, cfg.norm_p) >= cfg.epsilon_f && halvings < 20) {
                step *= 0.5;
                cand = delta - step.cwiseProduct(detail::sign_vector(g));
                ++halvings;
            }
            if (detail::worst_step_norm(w, cand, cfg.norm_p) >= cfg.epsilon_f) {
                AttackConfig inner = cfg;
                inner.epsilon_f = cfg.epsilon_f * (1.0 - 1e-9);
                cand = detail::project_and_clamp(w, orig, cand, inner);
            }
        }
        // Keep iterates physical.
        for (Eigen::Index e = 0; e < cand.size(); ++e) {
            cand(e) = std::min(1.0, std::max(0.0, orig(e) + cand(e))) - orig(e);
        }
        delta = cand;

        const Eigen::VectorXd projected = detail::project_and_clamp(w, orig, delta, cfg);
        detail::set_window_temps(work, orig + projected);
        const double score = gamma * predict(m, work);
        if (score < best_score) {
            best_score = score;
            best = projected;
        }
    }
    return detail::make_adversarial(w, orig, best, cfg.norm_p, iterations, 0, false);
}

// ---------------------------------------------------------------------------
// Query oracle
// ---------------------------------------------------------------------------

/// Prediction-only access to a forecaster with an exact, thread-safe call
/// count and a hard budget.
class QueryOracle {
public:
    explicit QueryOracle(long budget) : budget_(budget) {
        if (budget < 0) throw ConfigError("query budget must be >= 0");
    }
    virtual ~QueryOracle() = default;

    double query(const FeatureWindow& w) {
        take(1);
        return do_query(w);
    }

    /// Two-sided probes of every temperature entry: returns [f(x + d e_k),
    /// f(x - d e_k)] pairs, entry-major, and consumes exactly two queries per
    /// entry. Probes may leave [0,1] by delta; the model accepts that.
    Eigen::VectorXd probe_pairs(const FeatureWindow& w, double delta) {
        take(2L * w.temp_entries());
        return do_probe_pairs(w, delta);
    }

    long used() const { return used_.load(); }
    long budget() const { return budget_; }
    long remaining() const { return budget_ - used_.load(); }

protected:
    virtual double do_query(const FeatureWindow& w) = 0;

    virtual Eigen::VectorXd do_probe_pairs(const FeatureWindow& w, double delta) {
        const int E = w.temp_entries();
        Eigen::VectorXd out(2 * E);
        FeatureWindow probe = w;
        for (int e = 0; e < E; ++e) {
            const int t = probe.entry_step(e);
            const int s = probe.entry_station(e);
            const double base = w.temp_at(t, s);
            probe.temp_at(t, s) = base + delta;
            out(2 * e) = do_query(probe);
            probe.temp_at(t, s) = base - delta;
            out(2 * e + 1) = do_query(probe);
            probe.temp_at(t, s) = base;
        }
        return out;
    }

    void take(long n) {
        const long prev = used_.fetch_add(n);
        if (prev + n > budget_) {
            used_.fetch_sub(n);
            throw BudgetError(prev, budget_);
        }
    }

private:
    std::atomic<long> used_{0};
    long budget_;
};

/// Oracle backed by a trained model; probes run as one batched forward pass.
class ModelOracle : public QueryOracle {
public:
    ModelOracle(const ForecastModel& model, long budget) : QueryOracle(budget), model_(model) {}

protected:
    double do_query(const FeatureWindow& w) override {
        check_geometry(model_, w);
        return predict(model_, w);
    }

    Eigen::VectorXd do_probe_pairs(const FeatureWindow& w, double delta) override {
        check_geometry(model_, w);
        const int E = w.temp_entries();
        const Eigen::VectorXd base = stack_window(w);
        Eigen::MatrixXd batch(base.size(), 2 * E);
        batch.colwise() = base;
        for (int e = 0; e < E; ++e) {
            const int t = w.entry_step(e);
            const int s = w.entry_station(e);
            const Eigen::Index row =
                static_cast<Eigen::Index>(t) * model_.spec.d + w.layout.temp_index(s);
            batch(row, 2 * e) += delta;
            batch(row, 2 * e + 1) -= delta;
        }
        return predict_batch(model_, batch);
    }

private:
    const ForecastModel& model_;
};

/// Oracle around an arbitrary window-to-scalar function (tests, stubs).
class FunctionOracle : public QueryOracle {
public:
    using Fn = std::function<double(const FeatureWindow&)>;
    FunctionOracle(Fn fn, long budget) : QueryOracle(budget), fn_(std::move(fn)) {}

protected:
    double do_query(const FeatureWindow& w) override { return fn_(w); }

private:
    Fn fn_;
};

/// Two-sided finite-difference estimate on one temperature entry; consumes
/// exactly two oracle queries.
inline double estimate_gradient(QueryOracle& oracle, const FeatureWindow& w, int entry,
                                double delta) {
    if (entry < 0 || entry >= w.temp_entries()) throw ConfigError("temperature entry out of range");
    if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
    FeatureWindow probe = w;
    const int t = w.entry_step(entry);
    const int s = w.entry_station(entry);
    const double base = w.temp_at(t, s);
    probe.temp_at(t, s) = base + delta;
    const double up = oracle.query(probe);
    probe.temp_at(t, s) = base - delta;
    const double down = oracle.query(probe);
    return (up - down) / (2.0 * delta);
}

/// Full temperature-entry gradient estimate (2 * entries queries).
inline Eigen::VectorXd estimate_temp_gradient(QueryOracle& oracle, const FeatureWindow& w,
                                              double delta) {
    const Eigen::VectorXd pairs = oracle.probe_pairs(w, delta);
    const int E = w.temp_entries();
    Eigen::VectorXd g(E);
    for (int e = 0; e < E; ++e) g(e) = (pairs(2 * e) - pairs(2 * e + 1)) / (2.0 * delta);
    return g;
}

// ---------------------------------------------------------------------------
// Gradient-estimation (black-box) attack
// ---------------------------------------------------------------------------

/// Estimated-gradient sign updates with a single final projection and [0,1]
/// clamp. An iteration only starts when the full 2 * entries probes fit in
/// the remaining budget, which keeps the query count exactly
/// 2 * entries * iterations; stopping early sets the budget-exhausted flag.
inline AdversarialWindow gradient_estimation_attack(QueryOracle& oracle, const FeatureWindow& w,
                                                    const AttackConfig& cfg) {
    cfg.validate();
    const int E = w.temp_entries();
    if (oracle.budget() < 2L * E) {
        throw ConfigError("query budget " + std::to_string(oracle.budget()) +
                          " below 2 * temperature entries = " + std::to_string(2 * E));
    }
    const Eigen::VectorXd orig = detail::window_temps(w);
    const Eigen::VectorXd alpha = detail::entry_steps(w, cfg);
    const double gamma = static_cast<double>(cfg.gamma);

    FeatureWindow work = w;
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(orig.size());
    const long used_before = oracle.used();
    int iterations = 0;
    bool exhausted = false;

    for (int j = 0; j < cfg.iters; ++j) {
        if (oracle.remaining() < 2L * E) {
            exhausted = true;
            break;
        }
        detail::set_window_temps(work, orig + delta);
        const Eigen::VectorXd g = estimate_temp_gradient(oracle, work, cfg.delta);
        ++iterations;
        if (g.cwiseAbs().maxCoeff() == 0.0) break;
        delta -= alpha.cwiseProduct(gamma * detail::sign_vector(g));
    }

    const Eigen::VectorXd projected = detail::project_and_clamp(w, orig, delta, cfg);
    return detail::make_adversarial(w, orig, projected, cfg.norm_p, iterations,
                                    oracle.used() - used_before, exhausted);
}

// ---------------------------------------------------------------------------
// Substitute-model path
// ---------------------------------------------------------------------------

/// Trains an attacker-side model on the substitute dataset; tagged so
/// downstream reports can tell it from the operator's model.
inline ForecastModel train_substitute(const Dataset& ds, const ModelSpec& spec,
                                      const TrainConfig& cfg) {
    ForecastModel m = init_model(spec, cfg.seed);
    m = train(m, ds, cfg);
    m.meta.substitute = true;
    return m;
}

/// White-box attack against a substitute; the result transfers to the true
/// model for evaluation.
inline AdversarialWindow learn_and_attack(const ForecastModel& substitute, const FeatureWindow& w,
                                          const AttackConfig& cfg) {
    return white_box_attack(substitute, w, cfg);
}

// ---------------------------------------------------------------------------
// Day-level attack
//
// The 24 windows that target one day share temperature hours; perturbing them
// independently would assign a single physical hour several values. Each
// iteration therefore sums the gradient over all windows containing a given
// hour and applies one sign update to the shared hourly timeline.
// ---------------------------------------------------------------------------

struct DayAttack {
    std::vector<AdversarialWindow> windows;  // 24, in target-hour order
    std::size_t first_timeline_hour = 0;     // dataset hour of timeline column 0
    Eigen::MatrixXd temp_clean_f;            // stations x timeline hours
    Eigen::MatrixXd temp_adv_f;
    int iterations_used = 0;
    long queries_used = 0;
    bool budget_exhausted = false;
};

namespace detail {

struct DayGeometry {
    std::size_t first_window = 0;   // window index targeting day_start
    std::size_t timeline_first = 0; // dataset hour of timeline column 0
    int timeline_len = 0;           // H + 24
};

inline DayGeometry day_geometry(const Dataset& ds, std::size_t day_start) {
    const auto hk = static_cast<std::size_t>(ds.H() + ds.k());
    if (day_start < hk) throw LengthError("day starts before enough history exists");
    const std::size_t first_window = day_start - hk;
    if (first_window + 24 > ds.window_count()) {
        throw LengthError("fewer than 24 consecutive windows available");
    }
    DayGeometry g;
    g.first_window = first_window;
    g.timeline_first = first_window;  // window w covers hours [w, w + H]
    g.timeline_len = ds.H() + 24;
    return g;
}

}  // namespace detail

/// Joint attack on the 24 windows targeting hours [day_start, day_start+24).
/// Pass a model for the white-box path or an oracle for the estimation path
/// (exactly one of them non-null).
inline DayAttack attack_day(const ForecastModel* model, QueryOracle* oracle, const Dataset& ds,
                            std::size_t day_start, Strategy strategy, AttackConfig cfg) {
    if ((model == nullptr) == (oracle == nullptr)) {
        throw ConfigError("attack_day needs exactly one of model or oracle");
    }
    cfg.gamma = strategy_gamma(strategy);
    cfg.validate();

    const detail::DayGeometry geo = detail::day_geometry(ds, day_start);
    const int S = ds.layout().stations;
    const int T = ds.H() + 1;
    const int L = geo.timeline_len;
    const double gamma = static_cast<double>(cfg.gamma);

    // Windows (materialized once; temps rewritten per iteration).
    std::vector<FeatureWindow> base(24);
    for (int j = 0; j < 24; ++j) base[static_cast<std::size_t>(j)] = ds.window(geo.first_window + static_cast<std::size_t>(j));
    const FeatureWindow& w0 = base.front();

    // How many of the 24 windows cover each timeline hour (barrier weight).
    std::vector<double> cover(static_cast<std::size_t>(L), 0.0);
    for (int j = 0; j < 24; ++j) {
        for (int t = 0; t < T; ++t) cover[static_cast<std::size_t>(j + t)] += 1.0;
    }

    // Per-entry steps over the timeline.
    Eigen::MatrixXd alpha(S, L);
    for (int s = 0; s < S; ++s) {
        const double range = w0.temp_range_f[static_cast<std::size_t>(s)];
        const double a = range <= 0.0 ? 0.0 : (cfg.alpha ? *cfg.alpha : cfg.epsilon_f / range / 10.0);
        alpha.row(s).setConstant(a);
    }

    // Original scaled temps over the timeline.
    Eigen::MatrixXd orig(S, L);
    for (int h = 0; h < L; ++h) {
        for (int s = 0; s < S; ++s) {
            orig(s, h) = ds.hourly()(ds.layout().temp_index(s),
                                     static_cast<Eigen::Index>(geo.timeline_first) + h);
        }
    }

    auto timeline_norm_f = [&](const Eigen::MatrixXd& delta, int h) {
        Eigen::VectorXd df(S);
        for (int s = 0; s < S; ++s) df(s) = delta(s, h) * w0.temp_range_f[static_cast<std::size_t>(s)];
        return deviation_norm(df, cfg.norm_p);
    };
    auto worst_norm = [&](const Eigen::MatrixXd& delta) {
        double worst = 0.0;
        for (int h = 0; h < L; ++h) worst = std::max(worst, timeline_norm_f(delta, h));
        return worst;
    };
    auto project_timeline = [&](Eigen::MatrixXd delta, double eps) {
        for (int h = 0; h < L; ++h) {
            Eigen::VectorXd df(S);
            for (int s = 0; s < S; ++s) df(s) = delta(s, h) * w0.temp_range_f[static_cast<std::size_t>(s)];
            df = project(df, cfg.norm_p, eps);
            for (int s = 0; s < S; ++s) {
                const double range = w0.temp_range_f[static_cast<std::size_t>(s)];
                delta(s, h) = range > 0.0 ? df(s) / range : 0.0;
            }
        }
        for (int h = 0; h < L; ++h) {
            for (int s = 0; s < S; ++s) {
                delta(s, h) = std::min(1.0, std::max(0.0, orig(s, h) + delta(s, h))) - orig(s, h);
            }
        }
        return delta;
    };
    auto apply_delta = [&](const Eigen::MatrixXd& delta) {
        for (int j = 0; j < 24; ++j) {
            FeatureWindow& w = base[static_cast<std::size_t>(j)];
            for (int t = 0; t < T; ++t) {
                for (int s = 0; s < S; ++s) w.temp_at(t, s) = orig(s, j + t) + delta(s, j + t);
            }
        }
    };
    auto day_score = [&](const Eigen::MatrixXd& delta) {
        apply_delta(delta);
        Eigen::MatrixXd batch(w0.steps.size(), 24);
        for (int j = 0; j < 24; ++j) batch.col(j) = stack_window(base[static_cast<std::size_t>(j)]);
        return gamma * predict_batch(*model, batch).sum();
    };

    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(S, L);
    Eigen::MatrixXd best = delta;
    double best_score = model ? day_score(delta) : 0.0;
    int iterations = 0;
    bool exhausted = false;
    const long used_before = oracle ? oracle->used() : 0;
    const long need_per_iter = oracle ? 24L * 2L * w0.temp_entries() : 0;

    for (int j = 0; j < cfg.iters; ++j) {
        if (oracle && oracle->remaining() < need_per_iter) {
            exhausted = true;
            break;
        }
        apply_delta(delta);

        // Accumulate gradient contributions per timeline hour.
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(S, L);
        if (model) {
            Eigen::MatrixXd batch(w0.steps.size(), 24);
            for (int wj = 0; wj < 24; ++wj) batch.col(wj) = stack_window(base[static_cast<std::size_t>(wj)]);
            const Eigen::MatrixXd wg = input_gradient_batch(*model, batch, ds.layout());
            for (int wj = 0; wj < 24; ++wj) {
                for (int t = 0; t < T; ++t) {
                    for (int s = 0; s < S; ++s) g(s, wj + t) += gamma * wg(t * S + s, wj);
                }
            }
        } else {
            for (int wj = 0; wj < 24; ++wj) {
                const Eigen::VectorXd wg =
                    estimate_temp_gradient(*oracle, base[static_cast<std::size_t>(wj)], cfg.delta);
                for (int t = 0; t < T; ++t) {
                    for (int s = 0; s < S; ++s) g(s, wj + t) += gamma * wg(t * S + s);
                }
            }
        }
        if (cfg.beta > 0.0 && cfg.norm_p != Norm::l0) {
            for (int h = 0; h < L; ++h) {
                Eigen::VectorXd df(S);
                for (int s = 0; s < S; ++s) df(s) = delta(s, h) * w0.temp_range_f[static_cast<std::size_t>(s)];
                const double n = deviation_norm(df, cfg.norm_p);
                const double coef = cover[static_cast<std::size_t>(h)] * cfg.beta /
                                    std::max(cfg.epsilon_f - n, 1e-12);
                if (cfg.norm_p == Norm::linf) {
                    if (n == 0.0) continue;
                    int arg = 0;
                    df.cwiseAbs().maxCoeff(&arg);
                    g(arg, h) += coef * (df(arg) > 0.0 ? 1.0 : -1.0) *
                                 w0.temp_range_f[static_cast<std::size_t>(arg)];
                } else {
                    for (int s = 0; s < S; ++s) {
                        const double sgn = df(s) > 0.0 ? 1.0 : (df(s) < 0.0 ? -1.0 : 0.0);
                        g(s, h) += coef * sgn * w0.temp_range_f[static_cast<std::size_t>(s)];
                    }
                }
            }
        }
        ++iterations;
        if (g.cwiseAbs().maxCoeff() == 0.0) break;

        Eigen::MatrixXd sign = g.unaryExpr([](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
        Eigen::MatrixXd step = alpha;
        Eigen::MatrixXd cand = delta - step.cwiseProduct(sign);
        if (cfg.beta > 0.0 && cfg.norm_p != Norm::l0 && model) {
            int halvings = 0;
            while (worst_norm(cand) >= cfg.epsilon_f && halvings < 20) {
                step *= 0.5;
                cand = delta - step.cwiseProduct(sign);
                ++halvings;
            }
            if (worst_norm(cand) >= cfg.epsilon_f) {
                cand = project_timeline(cand, cfg.epsilon_f * (1.0 - 1e-9));
            }
        }
        for (int h = 0; h < L; ++h) {
            for (int s = 0; s < S; ++s) {
                cand(s, h) = std::min(1.0, std::max(0.0, orig(s, h) + cand(s, h))) - orig(s, h);
            }
        }
        delta = std::move(cand);

        if (model) {
            const Eigen::MatrixXd projected = project_timeline(delta, cfg.epsilon_f);
            const double score = day_score(projected);
            if (score < best_score) {
                best_score = score;
                best = projected;
            }
        }
    }

    const Eigen::MatrixXd final_delta = model ? best : project_timeline(delta, cfg.epsilon_f);

    DayAttack out;
    out.first_timeline_hour = geo.timeline_first;
    out.iterations_used = iterations;
    out.queries_used = oracle ? oracle->used() - used_before : 0;
    out.budget_exhausted = exhausted;
    out.temp_clean_f.resize(S, L);
    out.temp_adv_f.resize(S, L);
    for (int h = 0; h < L; ++h) {
        for (int s = 0; s < S; ++s) {
            const auto& mm = ds.scaling().temp[static_cast<std::size_t>(s)];
            out.temp_clean_f(s, h) = mm.unscale(orig(s, h));
            out.temp_adv_f(s, h) = mm.unscale(orig(s, h) + final_delta(s, h));
        }
    }

    out.windows.reserve(24);
    for (int j = 0; j < 24; ++j) {
        const FeatureWindow clean = ds.window(geo.first_window + static_cast<std::size_t>(j));
        Eigen::VectorXd wdelta(clean.temp_entries());
        Eigen::VectorXd worig(clean.temp_entries());
        for (int t = 0; t < T; ++t) {
            for (int s = 0; s < S; ++s) {
                wdelta(t * S + s) = final_delta(s, j + t);
                worig(t * S + s) = orig(s, j + t);
            }
        }
        AdversarialWindow adv = detail::make_adversarial(clean, worig, wdelta, cfg.norm_p, iterations,
                                                         oracle ? need_per_iter * iterations / 24 : 0,
                                                         exhausted);
        out.windows.push_back(std::move(adv));
    }
    return out;
}

inline DayAttack attack_day(const ForecastModel& model, const Dataset& ds, std::size_t day_start,
                            Strategy strategy, const AttackConfig& cfg) {
    return attack_day(&model, nullptr, ds, day_start, strategy, cfg);
}

inline DayAttack attack_day(QueryOracle& oracle, const Dataset& ds, std::size_t day_start,
                            Strategy strategy, const AttackConfig& cfg) {
    return attack_day(nullptr, &oracle, ds, day_start, strategy, cfg);
}

}  // namespace gridstorm

#endif  // GRIDSTORM_ATTACK_HPP
