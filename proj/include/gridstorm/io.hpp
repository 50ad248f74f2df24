#ifndef GRIDSTORM_IO_HPP
#define GRIDSTORM_IO_HPP

#include <filesystem>

#include <json.hpp>

#include "gridstorm/attack.hpp"
#include "gridstorm/grid.hpp"

namespace gridstorm {

using nlohmann::json;

constexpr const char* kDatasetSchema = "gridstorm.dataset.v1";
constexpr const char* kModelSchema = "gridstorm.model.v1";
constexpr const char* kFleetSchema = "gridstorm.fleet.v1";
constexpr const char* kAttackSchema = "gridstorm.attack.v1";

inline void require_schema(const json& j, const char* expected) {
    if (!j.contains("schema") || j.at("schema").get<std::string>() != expected) {
        throw ParseError(std::string("expected schema '") + expected + "'", 0);
    }
}

/// Writes via a temp file in the same directory, then renames into place.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    json j;
    in >> j;
    return j;
}

inline void write_json_atomic(const std::filesystem::path& path, const json& j) {
    write_text_atomic(path, j.dump(1));
}

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

inline json dataset_to_json(const Dataset& ds) {
    json j;
    j["schema"] = kDatasetSchema;
    j["H"] = ds.H();
    j["k"] = ds.k();
    j["stations"] = ds.layout().stations;
    j["start_epoch"] = ds.timestamps().front();
    j["hours"] = ds.hours();
    j["scaling"]["load"] = {{"min", ds.scaling().load.min}, {"max", ds.scaling().load.max}};
    json temps = json::array();
    for (const auto& mm : ds.scaling().temp) temps.push_back({{"min", mm.min}, {"max", mm.max}});
    j["scaling"]["temp"] = std::move(temps);

    json hourly = json::array();
    for (std::size_t h = 0; h < ds.hours(); ++h) {
        json col = json::array();
        for (Eigen::Index r = 0; r < ds.hourly().rows(); ++r) {
            col.push_back(ds.hourly()(r, static_cast<Eigen::Index>(h)));
        }
        hourly.push_back(std::move(col));
    }
    j["hourly"] = std::move(hourly);
    return j;
}

inline Dataset dataset_from_json(const json& j) {
    require_schema(j, kDatasetSchema);
    WindowLayout layout;
    layout.stations = j.at("stations").get<int>();
    ScalingParams scaling;
    scaling.load.min = j.at("scaling").at("load").at("min").get<double>();
    scaling.load.max = j.at("scaling").at("load").at("max").get<double>();
    for (const auto& mm : j.at("scaling").at("temp")) {
        scaling.temp.push_back({mm.at("min").get<double>(), mm.at("max").get<double>()});
    }
    const auto hours = j.at("hours").get<std::size_t>();
    const auto start = j.at("start_epoch").get<std::int64_t>();
    std::vector<std::int64_t> ts(hours);
    for (std::size_t h = 0; h < hours; ++h) {
        ts[h] = start + static_cast<std::int64_t>(h) * calendar::kSecondsPerHour;
    }
    Eigen::MatrixXd hourly(layout.dim(), static_cast<Eigen::Index>(hours));
    const auto& cols = j.at("hourly");
    if (cols.size() != hours) throw ParseError("hourly column count mismatch", 0);
    for (std::size_t h = 0; h < hours; ++h) {
        const auto& col = cols[h];
        if (static_cast<int>(col.size()) != layout.dim()) throw ParseError("hourly row count mismatch", h);
        for (int r = 0; r < layout.dim(); ++r) hourly(r, static_cast<Eigen::Index>(h)) = col[static_cast<std::size_t>(r)].get<double>();
    }
    return Dataset(layout, j.at("H").get<int>(), j.at("k").get<int>(), std::move(scaling),
                   std::move(ts), std::move(hourly));
}

// ---------------------------------------------------------------------------
// Model checkpoint
// ---------------------------------------------------------------------------

namespace detail {

inline json matrix_to_json(const Eigen::MatrixXd& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json data = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) data.push_back(m(r, c));
    }
    j["data"] = std::move(data);
    return j;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw ParseError("bad matrix payload", 0);
    Eigen::MatrixXd m(rows, cols);
    std::size_t i = 0;
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = data[i++].get<double>();
    }
    return m;
}

}  // namespace detail

inline json model_to_json(const ForecastModel& m) {
    json j;
    j["schema"] = kModelSchema;
    j["spec"] = {{"family", to_string(m.spec.family)},
                 {"layer_sizes", m.spec.layer_sizes},
                 {"activation", to_string(m.spec.activation)},
                 {"dropout_rate", m.spec.dropout_rate},
                 {"H", m.spec.H},
                 {"k", m.spec.k},
                 {"d", m.spec.d}};
    json wx = json::array(), wh = json::array(), b = json::array();
    for (const auto& w : m.Wx) wx.push_back(detail::matrix_to_json(w));
    for (const auto& w : m.Wh) wh.push_back(detail::matrix_to_json(w));
    for (const auto& v : m.b) b.push_back(detail::matrix_to_json(v));
    j["params"] = {{"Wx", std::move(wx)},
                   {"Wh", std::move(wh)},
                   {"b", std::move(b)},
                   {"head_w", detail::matrix_to_json(m.head_w)},
                   {"head_b", m.head_b}};
    j["training_meta"] = {{"epochs_run", m.meta.epochs_run},
                          {"final_train_loss", m.meta.final_train_loss},
                          {"seed", m.meta.seed},
                          {"substitute", m.meta.substitute},
                          {"val_mape_trace", m.meta.val_mape_trace}};
    return j;
}

inline ForecastModel model_from_json(const json& j) {
    require_schema(j, kModelSchema);
    ForecastModel m;
    const auto& s = j.at("spec");
    m.spec.family = family_from_string(s.at("family").get<std::string>());
    m.spec.layer_sizes = s.at("layer_sizes").get<std::vector<int>>();
    m.spec.activation = activation_from_string(s.at("activation").get<std::string>());
    m.spec.dropout_rate = s.at("dropout_rate").get<double>();
    m.spec.H = s.at("H").get<int>();
    m.spec.k = s.at("k").get<int>();
    m.spec.d = s.at("d").get<int>();
    m.spec.validate();

    const auto& p = j.at("params");
    for (const auto& w : p.at("Wx")) m.Wx.push_back(detail::matrix_from_json(w));
    for (const auto& w : p.at("Wh")) m.Wh.push_back(detail::matrix_from_json(w));
    for (const auto& v : p.at("b")) m.b.push_back(detail::matrix_from_json(v).col(0));
    m.head_w = detail::matrix_from_json(p.at("head_w")).col(0);
    m.head_b = p.at("head_b").get<double>();

    const auto& t = j.at("training_meta");
    m.meta.epochs_run = t.at("epochs_run").get<int>();
    m.meta.final_train_loss = t.at("final_train_loss").get<double>();
    m.meta.seed = t.at("seed").get<std::uint64_t>();
    m.meta.substitute = t.at("substitute").get<bool>();
    m.meta.val_mape_trace = t.at("val_mape_trace").get<std::vector<double>>();
    return m;
}

// ---------------------------------------------------------------------------
// Fleet
// ---------------------------------------------------------------------------

inline json fleet_to_json(const Fleet& f) {
    json j;
    j["schema"] = kFleetSchema;
    j["reserve_frac"] = f.reserve_frac;
    json gens = json::array();
    for (const auto& g : f.generators) {
        gens.push_back({{"name", g.name},
                        {"p_min", g.p_min},
                        {"p_max", g.p_max},
                        {"ramp_up", g.ramp_up},
                        {"ramp_dn", g.ramp_dn},
                        {"min_up", g.min_up},
                        {"min_dn", g.min_dn},
                        {"cost_fixed", g.cost_fixed},
                        {"cost_marginal", g.cost_marginal},
                        {"startup_cost", g.startup_cost},
                        {"shutdown_cost", g.shutdown_cost}});
    }
    j["generators"] = std::move(gens);
    return j;
}

inline Fleet fleet_from_json(const json& j) {
    require_schema(j, kFleetSchema);
    Fleet f;
    f.reserve_frac = j.at("reserve_frac").get<double>();
    for (const auto& gj : j.at("generators")) {
        Generator g;
        g.name = gj.at("name").get<std::string>();
        g.p_min = gj.at("p_min").get<double>();
        g.p_max = gj.at("p_max").get<double>();
        g.ramp_up = gj.at("ramp_up").get<double>();
        g.ramp_dn = gj.at("ramp_dn").get<double>();
        g.min_up = gj.at("min_up").get<int>();
        g.min_dn = gj.at("min_dn").get<int>();
        g.cost_fixed = gj.at("cost_fixed").get<double>();
        g.cost_marginal = gj.at("cost_marginal").get<double>();
        g.startup_cost = gj.at("startup_cost").get<double>();
        g.shutdown_cost = gj.at("shutdown_cost").get<double>();
        f.generators.push_back(std::move(g));
    }
    f.validate();
    return f;
}

// ---------------------------------------------------------------------------
// Attack run manifest
// ---------------------------------------------------------------------------

struct AttackWindowRecord {
    std::size_t window_index = 0;
    std::int64_t target_epoch = 0;
    double actual_mw = 0.0;
    double clean_forecast_mw = 0.0;
    double adv_forecast_mw = 0.0;
    double worst_step_norm_f = 0.0;
    int iterations_used = 0;
    long queries_used = 0;
    bool budget_exhausted = false;
    std::vector<double> delta_f;  // per temperature entry, step-major
};

struct AttackManifest {
    std::string model_name;     // e.g. "rnn_seed2"
    std::string algorithm;      // white_box | learn_and_attack | gradient_estimation | none
    std::string strategy;       // maximize | minimize | split_halves
    AttackConfig config;
    std::vector<AttackWindowRecord> windows;
    double clean_mape = 0.0;
    double adv_mape = 0.0;
};

inline json attack_config_to_json(const AttackConfig& c) {
    json j = {{"gamma", c.gamma},
              {"epsilon_f", c.epsilon_f},
              {"norm_p", to_string(c.norm_p)},
              {"beta", c.beta},
              {"iters", c.iters},
              {"delta", c.delta},
              {"query_budget", c.query_budget}};
    if (c.alpha) j["alpha"] = *c.alpha;
    return j;
}

inline AttackConfig attack_config_from_json(const json& j) {
    AttackConfig c;
    c.gamma = j.at("gamma").get<int>();
    c.epsilon_f = j.at("epsilon_f").get<double>();
    c.norm_p = norm_from_string(j.at("norm_p").get<std::string>());
    c.beta = j.at("beta").get<double>();
    c.iters = j.at("iters").get<int>();
    c.delta = j.at("delta").get<double>();
    c.query_budget = j.at("query_budget").get<long>();
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    return c;
}

inline json attack_manifest_to_json(const AttackManifest& m) {
    json j;
    j["schema"] = kAttackSchema;
    j["model"] = m.model_name;
    j["algorithm"] = m.algorithm;
    j["strategy"] = m.strategy;
    j["config"] = attack_config_to_json(m.config);
    j["clean_mape"] = m.clean_mape;
    j["adv_mape"] = m.adv_mape;
    json rows = json::array();
    for (const auto& w : m.windows) {
        rows.push_back({{"window", w.window_index},
                        {"target", calendar::format_iso8601(w.target_epoch)},
                        {"actual_mw", w.actual_mw},
                        {"clean_forecast_mw", w.clean_forecast_mw},
                        {"adv_forecast_mw", w.adv_forecast_mw},
                        {"worst_step_norm_f", w.worst_step_norm_f},
                        {"iterations", w.iterations_used},
                        {"queries", w.queries_used},
                        {"budget_exhausted", w.budget_exhausted},
                        {"delta_f", w.delta_f}});
    }
    j["windows"] = std::move(rows);
    return j;
}

inline AttackManifest attack_manifest_from_json(const json& j) {
    require_schema(j, kAttackSchema);
    AttackManifest m;
    m.model_name = j.at("model").get<std::string>();
    m.algorithm = j.at("algorithm").get<std::string>();
    m.strategy = j.at("strategy").get<std::string>();
    m.config = attack_config_from_json(j.at("config"));
    m.clean_mape = j.at("clean_mape").get<double>();
    m.adv_mape = j.at("adv_mape").get<double>();
    for (const auto& r : j.at("windows")) {
        AttackWindowRecord w;
        w.window_index = r.at("window").get<std::size_t>();
        w.target_epoch = calendar::parse_iso8601(r.at("target").get<std::string>());
        w.actual_mw = r.at("actual_mw").get<double>();
        w.clean_forecast_mw = r.at("clean_forecast_mw").get<double>();
        w.adv_forecast_mw = r.at("adv_forecast_mw").get<double>();
        w.worst_step_norm_f = r.at("worst_step_norm_f").get<double>();
        w.iterations_used = r.at("iterations").get<int>();
        w.queries_used = r.at("queries").get<long>();
        w.budget_exhausted = r.at("budget_exhausted").get<bool>();
        w.delta_f = r.at("delta_f").get<std::vector<double>>();
        m.windows.push_back(std::move(w));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Day outcome export
// ---------------------------------------------------------------------------

inline json day_outcome_to_json(const Fleet& fleet, const DayOutcome& out) {
    json j;
    j["total_cost"] = out.total_cost;
    j["shed_energy_mwh"] = out.shed_energy_mwh;
    j["surplus_energy_mwh"] = out.surplus_energy_mwh;
    j["n_ramp_violations"] = out.n_ramp_violations;
    j["forecast_mw"] = out.forecast_mw;
    j["actual_mw"] = out.actual_mw;
    json hours = json::array();
    for (std::size_t t = 0; t < out.dispatch.size(); ++t) {
        json committed = json::array();
        json p = json::array();
        for (int g = 0; g < fleet.size(); ++g) {
            if (out.schedule.u[static_cast<std::size_t>(g)][t]) {
                committed.push_back(fleet.generators[static_cast<std::size_t>(g)].name);
            }
            p.push_back(out.dispatch[t].p(g));
        }
        hours.push_back({{"hour", t},
                         {"committed", std::move(committed)},
                         {"dispatch_mw", std::move(p)},
                         {"cost", out.dispatch[t].cost},
                         {"shed_mw", out.dispatch[t].shed},
                         {"ramp_shortfall_mw", out.ramp_shortfall_mw[t]}});
    }
    j["hours"] = std::move(hours);
    return j;
}

inline std::string day_outcome_to_csv(const Fleet& fleet, const DayOutcome& out) {
    std::ostringstream os;
    csv::write_row(os, {"hour", "committed_units", "dispatch_mw", "cost", "shed_mw",
                        "ramp_shortfall_mw"});
    for (std::size_t t = 0; t < out.dispatch.size(); ++t) {
        std::string committed;
        double total = 0.0;
        for (int g = 0; g < fleet.size(); ++g) {
            if (out.schedule.u[static_cast<std::size_t>(g)][t]) {
                if (!committed.empty()) committed += "+";
                committed += fleet.generators[static_cast<std::size_t>(g)].name;
                total += out.dispatch[t].p(g);
            }
        }
        csv::write_row(os, {std::to_string(t), committed, std::to_string(total),
                            std::to_string(out.dispatch[t].cost), std::to_string(out.dispatch[t].shed),
                            std::to_string(out.ramp_shortfall_mw[t])});
    }
    return os.str();
}

}  // namespace gridstorm

#endif  // GRIDSTORM_IO_HPP
