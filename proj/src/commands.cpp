#include "powsec/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "powsec/attack_model.hpp"
#include "powsec/csv.hpp"
#include "powsec/error.hpp"
#include "powsec/ingest.hpp"
#include "powsec/mining_model.hpp"
#include "powsec/pipeline.hpp"
#include "powsec/report.hpp"
#include "powsec/study_config.hpp"
#include "powsec/synthetic.hpp"

namespace powsec::cli {

using nlohmann::ordered_json;

namespace {

class Writer {
public:
    Writer(const RunConfig& run, std::ostream& log) : run_(run), log_(log) {}

    bool wants(Format f) const { return run_.formats.contains(f); }

    void write(const std::string& name, std::string_view content) {
        const auto path = run_.out_dir / name;
        csv::write_atomic(path, content);
        if (run_.verbosity > 0) log_ << "wrote " << path.string() << '\n';
    }

    void write_json(const std::string& name, const ordered_json& j) { write(name, j.dump(2) + '\n'); }

    void info(std::string_view msg) {
        if (run_.verbosity > 0) log_ << msg << '\n';
    }

private:
    const RunConfig& run_;
    std::ostream& log_;
};

std::string exact(double v) { return fmt::format("{}", v); }

std::string relative_to(const std::filesystem::path& p, const std::filesystem::path& base) {
    if (base.empty()) return p.generic_string();
    const auto rel = p.lexically_relative(base);
    return rel.empty() ? p.generic_string() : rel.generic_string();
}

// FNV-1a over the file bytes, recorded so a rerun can tell whether inputs changed.
std::string file_digest(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return fmt::format("{:016x}", h);
}

std::uint64_t resolve_seed(const RunConfig& run, const config::StudyConfig& cfg,
                           std::optional<std::uint64_t> block_seed) {
    if (run.seed) return *run.seed;
    if (block_seed) return *block_seed;
    return cfg.seed.value_or(0);
}

ts::Dataset load_analysis_data(const RunConfig& run, const config::StudyConfig& cfg) {
    if (!cfg.dataset) throw ConfigError("config has no 'dataset' block for analyze");
    const auto& d = *cfg.dataset;
    if (d.path) return ingest::read_dataset(*d.path);
    std::mt19937_64 rng(resolve_seed(run, cfg, d.seed));
    auto pair = synthetic::cointegrated(d.dgp, rng);
    if (d.synthetic_kind == "i2") {
        auto z = synthetic::integrated_twice(d.dgp.nobs, rng);
        return synthetic::to_dataset({"y", "x", "z"}, {std::move(pair.y), std::move(pair.x), std::move(z)});
    }
    return synthetic::to_dataset({"y", "x"}, {std::move(pair.y), std::move(pair.x)});
}

std::string table_text(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()), 0);
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t c = 0; c < r.size(); ++c) {
            line += c == 0 ? fmt::format("{:<{}}", r[c], width[c]) : fmt::format("  {:>{}}", r[c], width[c]);
        }
        out += line + '\n';
    }
    return out;
}

}  // namespace

int cmd_ingest(const RunConfig& run, std::ostream& log) {
    const auto cfg = config::load(run.config);
    Writer w(run, log);
    if (cfg.sources.empty() && cfg.share_panels.empty()) throw ConfigError("config lists no sources");

    std::map<std::string, ts::Series> sources;
    ordered_json manifest;
    ordered_json src_json = ordered_json::array();
    for (const auto& s : cfg.sources) {
        const ts::Series series = ingest::load_csv(s);
        w.info(fmt::format("loaded {} ({} days)", s.name, series.size()));
        src_json.push_back({{"name", s.name},
                            {"path", relative_to(s.path, cfg.base_dir)},
                            {"value_column", s.value_column},
                            {"unit", s.unit},
                            {"fill", s.fill == ingest::FillPolicy::forward ? "forward" : "none"},
                            {"days", series.size()},
                            {"first_date", ts::format_date(series.dates().front())},
                            {"last_date", ts::format_date(series.dates().back())},
                            {"fnv1a64", file_digest(s.path)}});
        sources.emplace(s.name, series);
    }
    std::map<std::string, ingest::SharePanel> panels;
    ordered_json panel_json = ordered_json::array();
    for (const auto& p : cfg.share_panels) {
        auto panel = ingest::load_share_panel(p);
        panel_json.push_back({{"name", p.name},
                              {"path", relative_to(p.path, cfg.base_dir)},
                              {"days", panel.dates.size()},
                              {"participants", panel.shares.empty() ? 0 : panel.shares.front().size()},
                              {"fnv1a64", file_digest(p.path)}});
        panels.emplace(p.name, std::move(panel));
    }

    const ingest::BuildOptions opts{cfg.log_floor};
    const ts::Dataset data = ingest::build_dataset(sources, panels, cfg.variables, opts);
    std::vector<ingest::VariableRecipe> level_recipes = cfg.variables;
    for (auto& r : level_recipes) r.log = false;
    const ts::Dataset levels = ingest::build_dataset(sources, panels, level_recipes, opts);

    w.write("dataset.csv", ingest::dataset_csv(data));
    w.write("levels.csv", ingest::dataset_csv(levels));

    ordered_json vars = ordered_json::array();
    for (const auto& r : cfg.variables) {
        vars.push_back({{"output", r.output},
                        {"formula", ingest::to_string(r.formula)},
                        {"inputs", r.inputs},
                        {"log", r.log}});
    }
    manifest["sources"] = src_json;
    manifest["share_panels"] = panel_json;
    manifest["variables"] = vars;
    manifest["log_floor"] = cfg.log_floor;
    manifest["dataset"] = {{"file", "dataset.csv"},
                           {"levels_file", "levels.csv"},
                           {"rows", data.rows()},
                           {"first_date", ts::format_date(data.index().front())},
                           {"last_date", ts::format_date(data.index().back())},
                           {"columns", data.names()}};
    w.write_json("manifest.json", manifest);
    if (w.wants(Format::text)) {
        w.write("summary.txt", "Descriptive statistics\n" + report::summary_table(ts::describe(data)));
    }
    return kOk;
}

int cmd_analyze(const RunConfig& run, std::ostream& log) {
    const auto cfg = config::load(run.config);
    if (cfg.models.empty()) throw ConfigError("config lists no models");
    Writer w(run, log);
    const ts::Dataset data = load_analysis_data(run, cfg);
    w.info(fmt::format("dataset: {} rows, columns {}", data.rows(), fmt::join(data.names(), ", ")));

    std::vector<pipeline::PipelineReport> reports;
    std::vector<std::pair<std::string, std::string>> refused;
    for (const auto& m : cfg.models) {
        try {
            reports.push_back(pipeline::run_pipeline(data, m, cfg.analysis));
            w.info(fmt::format("model {}: {}", m.name, ardl::to_string(reports.back().bounds.verdict)));
        } catch (const PretestRefusal& e) {
            refused.emplace_back(m.name, e.what());
            log << "refused: " << e.what() << '\n';
        }
    }

    if (w.wants(Format::text)) {
        std::string text = "Model specification\n" + report::model_matrix(cfg.models) + '\n';
        for (const auto& r : reports) text += std::string(72, '=') + '\n' + report::to_text(r);
        for (const auto& [name, why] : refused) text += fmt::format("Model {} refused: {}\n", name, why);
        w.write("report.txt", text);
    }
    if (w.wants(Format::json)) {
        ordered_json j;
        ordered_json models = ordered_json::array();
        for (const auto& r : reports) models.push_back(report::to_json(r));
        ordered_json ref = ordered_json::array();
        for (const auto& [name, why] : refused) ref.push_back({{"model", name}, {"reason", why}});
        j["dataset"] = {{"rows", data.rows()},
                        {"first_date", ts::format_date(data.index().front())},
                        {"last_date", ts::format_date(data.index().back())},
                        {"columns", data.names()}};
        j["models"] = models;
        j["refused"] = ref;
        w.write_json("report.json", j);
    }
    if (w.wants(Format::csv)) {
        w.write("coefficients.csv", report::coefficients_csv(reports));
        w.write("pretests.csv", report::pretests_csv(reports));
        w.write("bounds.csv", report::bounds_csv(reports));
        w.write("diagnostics.csv", report::diagnostics_csv(reports));
        w.write("cusum.csv", report::cusum_csv(reports));
    }
    return refused.empty() ? kOk : kRefused;
}

int cmd_simulate(const RunConfig& run, std::ostream& log) {
    const auto cfg = config::load(run.config);
    if (!cfg.simulate || cfg.simulate->points.empty()) {
        throw ConfigError("simulate: the parameter grid is empty");
    }
    Writer w(run, log);
    const auto& sim = *cfg.simulate;

    const std::vector<std::string> header{
        "point", "gamma", "c", "rho", "delta", "q", "fixed_cost", "expected_price", "reward_btc",
        "n_miners", "m_star", "total_power", "profit_residual", "foc_residual", "reward_elasticity",
        "free_entry_n", "free_entry_m", "free_entry_residual", "status"};
    std::vector<std::vector<std::string>> rows;
    ordered_json jrows = ordered_json::array();
    std::size_t failures = 0;
    for (std::size_t i = 0; i < sim.points.size(); ++i) {
        const auto& p = sim.points[i];
        std::vector<std::string> row{fmt::format("{}", i + 1), exact(p.params.gamma), exact(p.params.c),
                                     exact(p.params.rho), exact(p.params.delta), exact(p.params.q),
                                     exact(p.params.fixed_cost), exact(p.market.expected_price),
                                     exact(p.market.reward_btc), exact(p.market.n_miners)};
        ordered_json j = {{"point", i + 1}};
        std::string status = "ok";
        std::vector<std::string> values(8);
        try {
            const auto eq = mining::solve_equilibrium(p.params, p.market);
            values[0] = exact(eq.m_per_miner);
            values[1] = exact(mining::total_power(p.params, p.market));
            values[2] = exact(eq.zero_profit_residual);
            values[3] = eq.m_per_miner > 0.0 ? exact(mining::foc_residual(p.params, p.market, eq.m_per_miner)) : "";
            values[4] = exact(mining::reward_elasticity(p.params.gamma));
            j["m_star"] = eq.m_per_miner;
            j["total_power"] = mining::total_power(p.params, p.market);
            j["profit_residual"] = eq.zero_profit_residual;
            j["reward_elasticity"] = mining::reward_elasticity(p.params.gamma);
            if (sim.free_entry) {
                try {
                    const auto fe = mining::solve_free_entry(p.params, p.market, sim.free_entry_options);
                    values[5] = exact(fe.n_miners);
                    values[6] = exact(fe.m_per_miner);
                    values[7] = exact(fe.profit_residual);
                    j["free_entry"] = {{"n_miners", fe.n_miners},
                                       {"m_per_miner", fe.m_per_miner},
                                       {"profit_residual", fe.profit_residual}};
                } catch (const NumericError& e) {
                    status = fmt::format("free entry failed: {}", e.what());
                    ++failures;
                }
            }
        } catch (const std::invalid_argument& e) {
            status = fmt::format("error: {}", e.what());
            ++failures;
        } catch (const NumericError& e) {
            status = fmt::format("error: {}", e.what());
            ++failures;
        }
        j["status"] = status;
        row.insert(row.end(), values.begin(), values.end());
        row.push_back(status);
        rows.push_back(std::move(row));
        jrows.push_back(j);
    }
    if (failures > 0) log << failures << " grid point(s) failed; see the status column\n";

    if (w.wants(Format::csv)) {
        std::string out;
        for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
        out += '\n';
        for (const auto& r : rows) {
            for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + csv::escape(r[c]);
            out += '\n';
        }
        w.write("equilibrium.csv", out);
    }
    if (w.wants(Format::json)) w.write_json("equilibrium.json", ordered_json{{"points", jrows}});
    if (w.wants(Format::text)) {
        std::vector<std::vector<std::string>> t{{"point", "gamma", "n", "E(p)R", "m*", "n m*", "profit", "status"}};
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& p = sim.points[i];
            t.push_back({rows[i][0], rows[i][1], rows[i][9], exact(p.market.reward_value()), rows[i][10],
                         rows[i][11], rows[i][12], rows[i].back()});
        }
        w.write("equilibrium.txt", table_text(t));
    }
    return kOk;
}

int cmd_attack(const RunConfig& run, std::ostream& log) {
    const auto cfg = config::load(run.config);
    if (cfg.attacks.empty()) throw ConfigError("attack: no scenarios given");
    Writer w(run, log);

    const std::vector<std::string> header{
        "scenario", "n_miners", "expected_reward_value", "m_star", "beta", "cost_scaled_recovery",
        "cost_single_recovery", "gain", "compatible_direct", "compatible_reduced",
        "compatible_single_recovery", "negative_bracket", "min_deterrence_reward", "status"};
    std::vector<std::vector<std::string>> rows;
    ordered_json jrows = ordered_json::array();
    for (const auto& a : cfg.attacks) {
        std::vector<std::string> row(header.size());
        row[0] = a.name;
        row[1] = exact(a.market.n_miners);
        row[2] = exact(a.market.reward_value());
        ordered_json j = {{"scenario", a.name}};
        std::vector<std::string> notes;
        try {
            const double m = mining::per_miner_power(a.params, a.market);
            const auto direct = attack::incentive_compatible(a.scenario, a.params, a.market);
            const auto single = attack::incentive_compatible(a.scenario, a.params, a.market,
                                                             attack::CostForm::single_recovery);
            row[3] = exact(m);
            row[4] = exact(direct.beta);
            row[5] = exact(direct.cost);
            row[6] = exact(single.cost);
            row[7] = exact(direct.gain);
            row[8] = direct.compatible ? "1" : "0";
            row[10] = single.compatible ? "1" : "0";
            row[11] = direct.negative_bracket ? "1" : "0";
            j["m_star"] = m;
            j["beta"] = direct.beta;
            j["cost_scaled_recovery"] = direct.cost;
            j["cost_single_recovery"] = single.cost;
            j["gain"] = direct.gain;
            j["compatible_direct"] = direct.compatible;
            j["compatible_single_recovery"] = single.compatible;
            j["negative_bracket"] = direct.negative_bracket;
            if (direct.beta == 0.0) {
                notes.push_back("beta = 0: reduced form undefined");
            } else {
                const auto reduced = attack::incentive_compatible_reduced(a.scenario, a.params, a.market);
                row[9] = reduced.compatible ? "1" : "0";
                j["compatible_reduced"] = reduced.compatible;
            }
            if (a.min_deterrence) {
                try {
                    const auto th = attack::min_deterrence_reward(a.scenario, a.params, a.market);
                    row[12] = th.finite ? exact(th.reward_value) : "inf";
                    j["min_deterrence_reward"] = th.finite ? ordered_json(th.reward_value) : ordered_json("inf");
                } catch (const Error& e) {
                    notes.push_back(fmt::format("min deterrence: {}", e.what()));
                } catch (const std::invalid_argument& e) {
                    notes.push_back(fmt::format("min deterrence: {}", e.what()));
                }
            }
        } catch (const std::invalid_argument& e) {
            notes.push_back(fmt::format("error: {}", e.what()));
        } catch (const Error& e) {
            notes.push_back(fmt::format("error: {}", e.what()));
        }
        std::string status = "ok";
        if (!notes.empty()) {
            status.clear();
            for (const auto& n : notes) status += (status.empty() ? "" : "; ") + n;
            log << "scenario " << a.name << ": " << status << '\n';
        }
        row.back() = status;
        j["status"] = status;
        rows.push_back(std::move(row));
        jrows.push_back(j);
    }

    if (w.wants(Format::csv)) {
        std::string out;
        for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
        out += '\n';
        for (const auto& r : rows) {
            for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + csv::escape(r[c]);
            out += '\n';
        }
        w.write("attack.csv", out);
    }
    if (w.wants(Format::json)) w.write_json("attack.json", ordered_json{{"scenarios", jrows}});
    if (w.wants(Format::text)) {
        std::vector<std::vector<std::string>> t{{"scenario", "beta", "cost", "cost (single)", "gain",
                                                 "direct", "reduced", "status"}};
        for (const auto& r : rows) t.push_back({r[0], r[4], r[5], r[6], r[7], r[8], r[9], r.back()});
        w.write("attack.txt", table_text(t));
    }
    return kOk;
}

int report_error(std::ostream& err) {
    try {
        throw;
    } catch (const PretestRefusal& e) {
        err << "error: " << e.what() << '\n';
        return kRefused;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kData;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumeric;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Proof-of-work security: data ingestion, ARDL analysis, mining equilibrium and attack economics",
                 "powsec"};
    app.require_subcommand(1);
    RunConfig run;
    std::string out_dir;
    std::vector<std::string> formats;
    std::uint64_t seed = 0;

    const std::pair<const char*, const char*> commands[] = {
        {"ingest", "load raw sources, build the analysis dataset and a manifest"},
        {"analyze", "unit-root pretests, ARDL selection, bounds test, ECM and diagnostics"},
        {"simulate", "steady-state mining equilibrium over a parameter grid"},
        {"attack", "incentive compatibility of majority attacks"},
    };
    for (const auto& [name, about] : commands) {
        auto* sub = app.add_subcommand(name, about);
        sub->add_option("--config", run.config, "study configuration (JSON)")->required();
        sub->add_option("--out", out_dir, fmt::format("output directory (default ${} or ./powsec-out)", kOutDirEnv));
        sub->add_option("--format", formats, "comma-separated subset of text,csv,json")
            ->delimiter(',')
            ->check(CLI::IsMember({"text", "csv", "json"}));
        sub->add_option("--seed", seed, "seed for synthetic data and Monte Carlo");
        sub->add_flag("-v,--verbose", run.verbosity, "progress messages on stderr");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    auto* sub = app.get_subcommands().front();
    run.subcommand = sub->get_name();
    if (sub->count("--seed") > 0) run.seed = seed;
    if (!formats.empty()) {
        run.formats.clear();
        for (const auto& f : formats) {
            run.formats.insert(f == "text" ? Format::text : f == "csv" ? Format::csv : Format::json);
        }
    }
    if (!out_dir.empty()) {
        run.out_dir = out_dir;
    } else if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
        run.out_dir = env;
    } else {
        run.out_dir = "powsec-out";
    }

    try {
        if (run.subcommand == "ingest") return cmd_ingest(run, err);
        if (run.subcommand == "analyze") return cmd_analyze(run, err);
        if (run.subcommand == "simulate") return cmd_simulate(run, err);
        return cmd_attack(run, err);
    } catch (...) {
        return report_error(err);
    }
}

}  // namespace powsec::cli
