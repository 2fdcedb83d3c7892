#include "powsec/study_config.hpp"

#include <array>
#include <fstream>
#include <span>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "powsec/error.hpp"

namespace powsec::config {

using nlohmann::json;

namespace {

[[noreturn]] void fail(std::string_view where, std::string_view what) {
    throw ConfigError(fmt::format("config {}: {}", where, what));
}

void allow_keys(const json& obj, std::string_view where, std::span<const std::string_view> keys) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto k : keys) known = known || k == key;
        if (!known) fail(where, fmt::format("unknown key '{}'", key));
    }
}

void allow_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
    allow_keys(obj, where, std::span<const std::string_view>(keys.begin(), keys.size()));
}

std::string path_of(std::string_view parent, std::string_view key) {
    return fmt::format("{}.{}", parent, key);
}

template <class T>
T get(const json& obj, std::string_view where, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(path_of(where, key), e.what());
    }
}

template <class T>
T require(const json& obj, std::string_view where, const char* key) {
    if (!obj.contains(key)) fail(where, fmt::format("missing required key '{}'", key));
    return get<T>(obj, where, key, T{});
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<std::string> string_list(const json& obj, std::string_view where, const char* key) {
    if (!obj.contains(key)) return {};
    const json& v = obj.at(key);
    if (v.is_string()) return {v.get<std::string>()};
    return get<std::vector<std::string>>(obj, where, key, {});
}

ingest::SourceSpec parse_source(const json& j, const std::string& where,
                                const std::filesystem::path& base) {
    allow_keys(j, where, {"name", "path", "date_column", "value_column", "date_format", "unit", "fill"});
    ingest::SourceSpec s;
    s.name = require<std::string>(j, where, "name");
    s.path = resolve(base, require<std::string>(j, where, "path"));
    s.date_column = get<std::string>(j, where, "date_column", s.date_column);
    s.value_column = get<std::string>(j, where, "value_column", s.value_column);
    s.date_format = get<std::string>(j, where, "date_format", s.date_format);
    s.unit = get<std::string>(j, where, "unit", "");
    const auto fill = get<std::string>(j, where, "fill", "none");
    if (fill == "none") {
        s.fill = ingest::FillPolicy::none;
    } else if (fill == "forward") {
        s.fill = ingest::FillPolicy::forward;
    } else {
        fail(path_of(where, "fill"), fmt::format("expected 'none' or 'forward', got '{}'", fill));
    }
    return s;
}

ingest::SharePanelSpec parse_panel(const json& j, const std::string& where,
                                   const std::filesystem::path& base) {
    allow_keys(j, where, {"name", "path", "date_column", "date_format", "normalise"});
    ingest::SharePanelSpec s;
    s.name = require<std::string>(j, where, "name");
    s.path = resolve(base, require<std::string>(j, where, "path"));
    s.date_column = get<std::string>(j, where, "date_column", s.date_column);
    s.date_format = get<std::string>(j, where, "date_format", s.date_format);
    s.normalise = get<bool>(j, where, "normalise", true);
    return s;
}

ingest::VariableRecipe parse_variable(const json& j, const std::string& where) {
    allow_keys(j, where, {"output", "formula", "inputs", "log"});
    ingest::VariableRecipe r;
    r.output = require<std::string>(j, where, "output");
    r.formula = ingest::parse_formula(get<std::string>(j, where, "formula", "raw"));
    r.inputs = string_list(j, where, "inputs");
    if (r.inputs.empty()) r.inputs = {r.output};
    r.log = get<bool>(j, where, "log", true);
    return r;
}

std::size_t non_negative(const json& j, std::string_view where, const char* key, std::size_t fallback) {
    const auto v = get<long long>(j, where, key, static_cast<long long>(fallback));
    if (v < 0) fail(path_of(where, key), "must be nonnegative");
    return static_cast<std::size_t>(v);
}

pipeline::ModelSpec parse_model(const json& j, const std::string& where) {
    allow_keys(j, where, {"name", "dependent", "regressors", "max_g", "max_z", "orders"});
    pipeline::ModelSpec m;
    m.ardl.dependent = require<std::string>(j, where, "dependent");
    m.ardl.regressors = string_list(j, where, "regressors");
    m.name = get<std::string>(j, where, "name", m.ardl.dependent);
    m.ardl.max_g = non_negative(j, where, "max_g", m.ardl.max_g);
    m.ardl.max_z = non_negative(j, where, "max_z", m.ardl.max_z);
    if (j.contains("orders")) {
        const auto o = get<std::vector<long long>>(j, where, "orders", {});
        if (o.size() != m.ardl.regressors.size() + 1) {
            fail(path_of(where, "orders"), "expected [g, z_1, ..., z_k]");
        }
        ardl::ArdlOrders orders;
        for (std::size_t i = 0; i < o.size(); ++i) {
            if (o[i] < 0) fail(path_of(where, "orders"), "orders must be nonnegative");
            if (i == 0) {
                orders.g = static_cast<std::size_t>(o[i]);
            } else {
                orders.z.push_back(static_cast<std::size_t>(o[i]));
            }
        }
        m.orders = orders;
    }
    try {
        m.ardl.validate();
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
    return m;
}

DatasetSource parse_dataset(const json& j, const std::filesystem::path& base) {
    const std::string where = "dataset";
    allow_keys(j, where, {"path", "synthetic"});
    DatasetSource d;
    if (j.contains("path")) d.path = resolve(base, require<std::string>(j, where, "path"));
    if (j.contains("synthetic")) {
        const json& s = j.at("synthetic");
        const std::string w = "dataset.synthetic";
        allow_keys(s, w,
                   {"kind", "nobs", "alpha", "theta", "psi", "intercept", "sigma_y", "sigma_x",
                    "burn_in", "seed"});
        d.synthetic_kind = get<std::string>(s, w, "kind", "cointegrated");
        if (d.synthetic_kind != "cointegrated" && d.synthetic_kind != "i2") {
            fail(path_of(w, "kind"), "expected 'cointegrated' or 'i2'");
        }
        d.dgp.nobs = non_negative(s, w, "nobs", d.dgp.nobs);
        d.dgp.alpha = get<double>(s, w, "alpha", d.dgp.alpha);
        d.dgp.theta = get<double>(s, w, "theta", d.dgp.theta);
        d.dgp.psi = get<double>(s, w, "psi", d.dgp.psi);
        d.dgp.intercept = get<double>(s, w, "intercept", d.dgp.intercept);
        d.dgp.sigma_y = get<double>(s, w, "sigma_y", d.dgp.sigma_y);
        d.dgp.sigma_x = get<double>(s, w, "sigma_x", d.dgp.sigma_x);
        d.dgp.burn_in = non_negative(s, w, "burn_in", d.dgp.burn_in);
        if (s.contains("seed")) d.seed = get<std::uint64_t>(s, w, "seed", 0);
    }
    if (d.path.has_value() == !d.synthetic_kind.empty()) {
        fail(where, "give exactly one of 'path' or 'synthetic'");
    }
    return d;
}

// Scalars or arrays; the grid is their Cartesian product in key order.
std::vector<double> values_of(const json& grid, std::string_view where, const char* key, double fallback) {
    if (!grid.contains(key)) return {fallback};
    const json& v = grid.at(key);
    if (v.is_number()) return {v.get<double>()};
    return get<std::vector<double>>(grid, where, key, {});
}

constexpr std::array<std::string_view, 9> kPointKeys = {
    "gamma", "c", "rho", "delta", "q", "fixed_cost", "expected_price", "reward_btc", "n_miners"};

SimulatePoint parse_point(const json& j, const std::string& where, const SimulatePoint& base) {
    allow_keys(j, where, kPointKeys);
    SimulatePoint p = base;
    p.params.gamma = get<double>(j, where, "gamma", p.params.gamma);
    p.params.c = get<double>(j, where, "c", p.params.c);
    p.params.rho = get<double>(j, where, "rho", p.params.rho);
    p.params.delta = get<double>(j, where, "delta", p.params.delta);
    p.params.q = get<double>(j, where, "q", p.params.q);
    p.params.fixed_cost = get<double>(j, where, "fixed_cost", p.params.fixed_cost);
    p.market.expected_price = get<double>(j, where, "expected_price", p.market.expected_price);
    p.market.reward_btc = get<double>(j, where, "reward_btc", p.market.reward_btc);
    p.market.n_miners = get<double>(j, where, "n_miners", p.market.n_miners);
    return p;
}

SimulateBlock parse_simulate(const json& j) {
    const std::string where = "simulate";
    allow_keys(j, where, {"grid", "points", "free_entry", "n_min", "n_max"});
    SimulateBlock b;
    b.free_entry = get<bool>(j, where, "free_entry", false);
    b.free_entry_options.n_min = get<double>(j, where, "n_min", b.free_entry_options.n_min);
    b.free_entry_options.n_max = get<double>(j, where, "n_max", b.free_entry_options.n_max);
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        const std::string w = "simulate.grid";
        allow_keys(g, w, kPointKeys);
        const SimulatePoint d;
        const std::vector<std::vector<double>> axes = {
            values_of(g, w, "gamma", d.params.gamma),
            values_of(g, w, "c", d.params.c),
            values_of(g, w, "rho", d.params.rho),
            values_of(g, w, "delta", d.params.delta),
            values_of(g, w, "q", d.params.q),
            values_of(g, w, "fixed_cost", d.params.fixed_cost),
            values_of(g, w, "expected_price", d.market.expected_price),
            values_of(g, w, "reward_btc", d.market.reward_btc),
            values_of(g, w, "n_miners", d.market.n_miners)};
        std::size_t count = 1;
        for (const auto& a : axes) count *= a.size();
        for (std::size_t idx = 0; idx < count; ++idx) {
            std::size_t rest = idx;
            std::vector<double> v(axes.size());
            for (std::size_t a = axes.size(); a-- > 0;) {
                v[a] = axes[a][rest % axes[a].size()];
                rest /= axes[a].size();
            }
            SimulatePoint p;
            p.params.gamma = v[0];
            p.params.c = v[1];
            p.params.rho = v[2];
            p.params.delta = v[3];
            p.params.q = v[4];
            p.params.fixed_cost = v[5];
            p.market.expected_price = v[6];
            p.market.reward_btc = v[7];
            p.market.n_miners = v[8];
            b.points.push_back(p);
        }
    }
    if (j.contains("points")) {
        const json& pts = j.at("points");
        if (!pts.is_array()) fail("simulate.points", "expected an array");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            b.points.push_back(parse_point(pts[i], fmt::format("simulate.points[{}]", i), {}));
        }
    }
    return b;
}

AttackCase parse_attack(const json& j, const std::string& where, const json& defaults) {
    json merged = defaults;
    for (const auto& [k, v] : j.items()) merged[k] = v;
    allow_keys(merged, where,
               {"name", "gamma", "c", "rho", "delta", "q", "fixed_cost", "expected_price",
                "reward_btc", "n_miners", "power_multiple", "duration_blocks", "recovery_share",
                "price_drop", "payoff", "double_spend_amount", "min_deterrence"});
    AttackCase a;
    a.name = get<std::string>(merged, where, "name", "");
    json point = json::object();
    for (auto k : kPointKeys) {
        const std::string key(k);
        if (merged.contains(key)) point[key] = merged[key];
    }
    const SimulatePoint p = parse_point(point, where, {});
    a.params = p.params;
    a.market = p.market;
    a.scenario.power_multiple = get<double>(merged, where, "power_multiple", a.scenario.power_multiple);
    a.scenario.duration_blocks = get<double>(merged, where, "duration_blocks", a.scenario.duration_blocks);
    a.scenario.recovery_share = get<double>(merged, where, "recovery_share", a.scenario.recovery_share);
    a.scenario.price_drop = get<double>(merged, where, "price_drop", a.scenario.price_drop);
    if (merged.contains("payoff")) a.scenario.payoff = get<double>(merged, where, "payoff", 0.0);
    if (merged.contains("double_spend_amount")) {
        a.scenario.double_spend_amount = get<double>(merged, where, "double_spend_amount", 0.0);
    }
    a.min_deterrence = get<bool>(merged, where, "min_deterrence", false);
    return a;
}

pipeline::PipelineOptions parse_analysis(const json& j) {
    const std::string where = "analysis";
    allow_keys(j, where, {"deterministic", "level", "serial_lags", "pretests"});
    pipeline::PipelineOptions o;
    try {
        o.deterministic = cv::parse_deterministic(get<std::string>(j, where, "deterministic", "constant"));
    } catch (const std::invalid_argument& e) {
        fail(path_of(where, "deterministic"), e.what());
    }
    o.level = get<double>(j, where, "level", o.level);
    o.serial_lags = non_negative(j, where, "serial_lags", o.serial_lags);
    o.pretests = get<bool>(j, where, "pretests", o.pretests);
    return o;
}

}  // namespace

StudyConfig parse(std::string_view json_text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    allow_keys(root, "(root)",
               {"sources", "share_panels", "variables", "log_floor", "dataset", "models", "analysis",
                "simulate", "attack", "seed", "description"});

    StudyConfig c;
    c.base_dir = base_dir;
    auto array = [&](const char* key) -> const json& {
        static const json empty = json::array();
        if (!root.contains(key)) return empty;
        if (!root.at(key).is_array()) fail(key, "expected an array");
        return root.at(key);
    };
    std::set<std::string> names;
    for (std::size_t i = 0; i < array("sources").size(); ++i) {
        const auto where = fmt::format("sources[{}]", i);
        c.sources.push_back(parse_source(array("sources")[i], where, base_dir));
        if (!names.insert(c.sources.back().name).second) {
            fail(where, fmt::format("duplicate source name '{}'", c.sources.back().name));
        }
    }
    for (std::size_t i = 0; i < array("share_panels").size(); ++i) {
        const auto where = fmt::format("share_panels[{}]", i);
        c.share_panels.push_back(parse_panel(array("share_panels")[i], where, base_dir));
        if (!names.insert(c.share_panels.back().name).second) {
            fail(where, fmt::format("duplicate source name '{}'", c.share_panels.back().name));
        }
    }
    for (std::size_t i = 0; i < array("variables").size(); ++i) {
        c.variables.push_back(parse_variable(array("variables")[i], fmt::format("variables[{}]", i)));
    }
    c.log_floor = get<double>(root, "(root)", "log_floor", c.log_floor);
    if (!(c.log_floor > 0.0)) fail("log_floor", "must be positive");
    if (root.contains("dataset")) c.dataset = parse_dataset(root.at("dataset"), base_dir);
    for (std::size_t i = 0; i < array("models").size(); ++i) {
        c.models.push_back(parse_model(array("models")[i], fmt::format("models[{}]", i)));
    }
    if (root.contains("analysis")) c.analysis = parse_analysis(root.at("analysis"));
    if (root.contains("simulate")) c.simulate = parse_simulate(root.at("simulate"));
    if (root.contains("attack")) {
        const json& a = root.at("attack");
        allow_keys(a, "attack", {"defaults", "scenarios"});
        const json defaults = a.contains("defaults") ? a.at("defaults") : json::object();
        if (!defaults.is_object()) fail("attack.defaults", "expected an object");
        if (!a.contains("scenarios") || !a.at("scenarios").is_array()) {
            fail("attack", "expected a 'scenarios' array");
        }
        const json& sc = a.at("scenarios");
        for (std::size_t i = 0; i < sc.size(); ++i) {
            const auto where = fmt::format("attack.scenarios[{}]", i);
            c.attacks.push_back(parse_attack(sc[i], where, defaults));
            if (c.attacks.back().name.empty()) c.attacks.back().name = fmt::format("scenario{}", i + 1);
        }
    }
    if (root.contains("seed")) c.seed = get<std::uint64_t>(root, "(root)", "seed", 0);
    return c;
}

StudyConfig load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot open config file {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.parent_path());
}

}  // namespace powsec::config
