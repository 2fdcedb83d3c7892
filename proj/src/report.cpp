#include "powsec/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "powsec/csv.hpp"

namespace powsec::report {

using nlohmann::ordered_json;

namespace {

std::string num(double v, int decimals = 3) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    return fmt::format("{:.{}f}", v, decimals);
}

// Shortest round-trip representation for machine-readable output.
std::string exact(double v) { return fmt::format("{}", v); }

std::string cell(const ardl::Coefficient& c) {
    return fmt::format("{}{} ({})", num(c.value), stars(c.p_value), num(c.std_error));
}

ordered_json coef_json(const ardl::Coefficient& c) {
    return {{"term", c.name},
            {"estimate", c.value},
            {"std_error", c.std_error},
            {"t_stat", c.t_stat},
            {"p_value", c.p_value}};
}

std::vector<ardl::Coefficient> ols_terms(const ols::OlsFit& f) {
    std::vector<ardl::Coefficient> out;
    for (std::size_t j = 0; j < f.names.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        out.push_back({f.names[j], f.coefficients(i), f.std_errors(i), f.t_stats(i), f.p_values(i)});
    }
    return out;
}

std::vector<ardl::Coefficient> short_run_terms(const ardl::EcmFit& e) {
    std::vector<ardl::Coefficient> out = e.psi_y;
    for (const auto& px : e.psi_x) out.insert(out.end(), px.begin(), px.end());
    out.push_back(e.intercept);
    return out;
}

ordered_json unit_root_json(const ur::UnitRootResult& u) {
    return {{"test", u.test},
            {"deterministic", cv::to_string(u.deterministic)},
            {"lags", u.lags},
            {"nobs", u.nobs},
            {"statistic", u.statistic},
            {"critical_values", {{"1%", u.critical.one}, {"5%", u.critical.five}, {"10%", u.critical.ten}}},
            {"reject_unit_root_5pct", u.reject}};
}

std::string pad_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()), 0);
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::string out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::string line;
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
            if (c == 0) {
                line += fmt::format("{:<{}}", rows[i][c], width[c]);
            } else {
                line += fmt::format("  {:>{}}", rows[i][c], width[c]);
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
        if (i == 0) {
            std::size_t total = 0;
            for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
            out += std::string(total, '-') + '\n';
        }
    }
    return out;
}

}  // namespace

std::string stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.10) return "*";
    return "";
}

double rounded(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

std::string summary_table(const ts::SummaryStats& stats) {
    std::vector<std::vector<std::string>> rows{{"Variable", "Obs", "Mean", "Std. Dev.", "Min", "Max"}};
    for (const auto& s : stats) {
        rows.push_back({s.name, fmt::format("{}", s.obs), num(s.mean), num(s.std_dev), num(s.min),
                        num(s.max)});
    }
    return pad_table(rows);
}

std::string model_matrix(std::span<const pipeline::ModelSpec> models) {
    std::vector<std::string> vars;
    auto note = [&](const std::string& v) {
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    };
    for (const auto& m : models) {
        note(m.ardl.dependent);
        for (const auto& r : m.ardl.regressors) note(r);
    }
    std::vector<std::vector<std::string>> rows{{"Variable"}};
    for (const auto& m : models) rows[0].push_back(m.name);
    for (const auto& v : vars) {
        std::vector<std::string> row{v};
        for (const auto& m : models) {
            const bool reg = std::find(m.ardl.regressors.begin(), m.ardl.regressors.end(), v) !=
                             m.ardl.regressors.end();
            row.push_back(m.ardl.dependent == v ? "dep" : (reg ? "x" : ""));
        }
        rows.push_back(std::move(row));
    }
    return pad_table(rows);
}

std::string to_text(const pipeline::PipelineReport& r) {
    std::string out = fmt::format("Model {}: {} on {}\n\n", r.model, r.spec.dependent,
                                  fmt::join(r.spec.regressors, ", "));
    out += "Descriptive statistics\n" + summary_table(r.summary) + '\n';

    if (!r.pretests.empty()) {
        std::vector<std::vector<std::string>> rows{
            {"Variable", "Test", "Level", "Lags", "5% cv", "Difference", "Lags", "5% cv", "Order"}};
        for (const auto& p : r.pretests) {
            for (std::size_t i = 0; i < p.report.level.size(); ++i) {
                const auto& l = p.report.level[i];
                const auto& d = p.report.difference[i];
                rows.push_back({i == 0 ? p.name : "", l.test, num(l.statistic), fmt::format("{}", l.lags),
                                num(l.critical.five), num(d.statistic), fmt::format("{}", d.lags),
                                num(d.critical.five), i == 0 ? std::string(ur::to_string(p.report.order)) : ""});
            }
        }
        out += "Unit-root pretests (decision by ADF at 5%)\n" + pad_table(rows) + '\n';
    }

    out += fmt::format("Selected orders: {} (AIC {}, {} candidates, {})\n", r.selection.orders.label(),
                       num(r.selection.aic), r.selection.candidates,
                       r.selection.exhaustive ? "exhaustive" : "coordinate descent");
    out += fmt::format("Observations: {}   R-squared: {}   Log likelihood: {}\n\n", r.fit.ols.nobs,
                       num(r.fit.ols.r_squared, 4), num(r.fit.ols.log_likelihood));

    {
        std::vector<std::vector<std::string>> rows{{"Level", "I(0) bound", "I(1) bound"}};
        for (const auto& b : r.bounds.table) {
            rows.push_back({fmt::format("{}%", b.level * 100.0), num(b.bounds.lower, 2), num(b.bounds.upper, 2)});
        }
        out += fmt::format("Bounds test: F = {} with k = {}; verdict at {}%: {}\n", num(r.bounds.f_statistic),
                           r.bounds.k, r.bounds.level * 100.0, ardl::to_string(r.bounds.verdict));
        out += pad_table(rows) + '\n';
    }

    if (r.ecm) {
        const auto& e = *r.ecm;
        std::vector<std::vector<std::string>> rows{{"Long run", "Coefficient (s.e.)"}};
        rows.push_back({"error correction term", cell(e.ect)});
        for (const auto& t : e.theta) rows.push_back({t.name, cell(t)});
        const double shown = rounded(std::abs(e.alpha), 3);
        if (std::abs(e.alpha) > 0.0 && std::abs(e.alpha) <= 1.0) {
            rows.push_back({"speed of adjustment (days)", num(ardl::speed_of_adjustment_days(e.alpha), 1)});
        }
        if (shown > 0.0 && shown <= 1.0) {
            rows.push_back({fmt::format("days at printed alpha {}", num(shown)),
                            num(ardl::speed_of_adjustment_days(shown), 1)});
        }
        out += pad_table(rows) + '\n';

        std::vector<std::vector<std::string>> sr{{"Short run", "Coefficient (s.e.)"}};
        for (const auto& c : short_run_terms(e)) sr.push_back({c.name, cell(c)});
        out += pad_table(sr) + '\n';
    } else if (!r.ecm_error.empty()) {
        out += fmt::format("Error-correction form unavailable: {}\n\n", r.ecm_error);
    }

    if (r.difference_model) {
        std::vector<std::vector<std::string>> rows{{"First-difference model", "Coefficient (s.e.)"}};
        for (const auto& c : ols_terms(r.difference_model->ols)) rows.push_back({c.name, cell(c)});
        out += pad_table(rows) + '\n';
    }

    {
        std::vector<std::vector<std::string>> rows{{"Diagnostic", "Statistic", "Distribution", "p-value", "5%"}};
        for (const auto& t : r.diagnostics.tests) {
            rows.push_back({t.name, num(t.statistic), t.distribution(), num(t.p_value, 4),
                            t.reject ? "reject" : "accept"});
        }
        out += pad_table(rows);
        if (r.diagnostics.cusum) {
            const auto& c = *r.diagnostics.cusum;
            out += fmt::format("CUSUM: {} ({} of {} points outside the 5% band)\n",
                               c.stable ? "stable" : "unstable", c.crossings.size(), c.path.size());
        }
        for (const auto& s : r.diagnostics.skipped) out += fmt::format("skipped {}\n", s);
    }
    out += "\nSignificance: *** 1%, ** 5%, * 10%.\n";
    return out;
}

ordered_json to_json(const pipeline::PipelineReport& r) {
    ordered_json j;
    j["model"] = r.model;
    j["dependent"] = r.spec.dependent;
    j["regressors"] = r.spec.regressors;
    j["max_g"] = r.spec.max_g;
    j["max_z"] = r.spec.max_z;

    ordered_json summary = ordered_json::array();
    for (const auto& s : r.summary) {
        summary.push_back({{"variable", s.name}, {"obs", s.obs}, {"mean", s.mean}, {"std_dev", s.std_dev},
                           {"min", s.min}, {"max", s.max}});
    }
    j["summary"] = summary;

    ordered_json pre = ordered_json::array();
    for (const auto& p : r.pretests) {
        ordered_json lv = ordered_json::array();
        ordered_json df = ordered_json::array();
        for (const auto& u : p.report.level) lv.push_back(unit_root_json(u));
        for (const auto& u : p.report.difference) df.push_back(unit_root_json(u));
        pre.push_back({{"variable", p.name}, {"order", ur::to_string(p.report.order)}, {"level", lv},
                       {"difference", df}});
    }
    j["pretests"] = pre;

    j["selection"] = {{"orders", r.selection.orders.label()},
                      {"g", r.selection.orders.g},
                      {"z", r.selection.orders.z},
                      {"aic", r.selection.aic},
                      {"candidates", r.selection.candidates},
                      {"exhaustive", r.selection.exhaustive}};

    ordered_json ardl_terms = ordered_json::array();
    for (const auto& c : ols_terms(r.fit.ols)) ardl_terms.push_back(coef_json(c));
    j["ardl"] = {{"nobs", r.fit.ols.nobs},
                 {"first_date", ts::format_date(r.fit.dates[r.fit.start])},
                 {"r_squared", r.fit.ols.r_squared},
                 {"adj_r_squared", r.fit.ols.adj_r_squared},
                 {"log_likelihood", r.fit.ols.log_likelihood},
                 {"aic", r.fit.ols.aic},
                 {"ssr", r.fit.ols.ssr},
                 {"coefficients", ardl_terms}};

    ordered_json bounds_table = ordered_json::array();
    for (const auto& b : r.bounds.table) {
        bounds_table.push_back({{"level", b.level}, {"I0", b.bounds.lower}, {"I1", b.bounds.upper}});
    }
    j["bounds_test"] = {{"f_statistic", r.bounds.f_statistic},
                        {"k", r.bounds.k},
                        {"df", {r.bounds.df1, r.bounds.df2}},
                        {"level", r.bounds.level},
                        {"I0", r.bounds.bounds.lower},
                        {"I1", r.bounds.bounds.upper},
                        {"verdict", ardl::to_string(r.bounds.verdict)},
                        {"critical_values", bounds_table}};

    if (r.ecm) {
        const auto& e = *r.ecm;
        ordered_json theta = ordered_json::array();
        for (const auto& t : e.theta) theta.push_back(coef_json(t));
        ordered_json sr = ordered_json::array();
        for (const auto& c : short_run_terms(e)) sr.push_back(coef_json(c));
        ordered_json ecm = {{"alpha", e.alpha},
                            {"alpha_std_error", e.alpha_se},
                            {"error_correction_term", coef_json(e.ect)},
                            {"long_run", theta},
                            {"short_run", sr}};
        const double shown = rounded(std::abs(e.alpha), 3);
        if (std::abs(e.alpha) > 0.0 && std::abs(e.alpha) <= 1.0) {
            ecm["speed_of_adjustment_days"] = ardl::speed_of_adjustment_days(e.alpha);
        }
        if (shown > 0.0 && shown <= 1.0) {
            ecm["alpha_printed"] = shown;
            ecm["speed_of_adjustment_days_printed"] = ardl::speed_of_adjustment_days(shown);
        }
        j["ecm"] = ecm;
    } else {
        j["ecm"] = nullptr;
        j["ecm_error"] = r.ecm_error;
    }

    if (r.difference_model) {
        ordered_json terms = ordered_json::array();
        for (const auto& c : ols_terms(r.difference_model->ols)) terms.push_back(coef_json(c));
        j["difference_model"] = {{"nobs", r.difference_model->ols.nobs}, {"coefficients", terms}};
    }

    ordered_json tests = ordered_json::array();
    for (const auto& t : r.diagnostics.tests) {
        tests.push_back({{"test", t.name},
                         {"statistic", t.statistic},
                         {"distribution", t.distribution()},
                         {"p_value", t.p_value},
                         {"reject_5pct", t.reject}});
    }
    ordered_json diag = {{"tests", tests}, {"skipped", r.diagnostics.skipped}};
    if (r.diagnostics.cusum) {
        const auto& c = *r.diagnostics.cusum;
        diag["cusum"] = {{"stable", c.stable},
                         {"sigma", c.sigma},
                         {"points", c.path.size()},
                         {"crossings", c.crossings}};
    }
    j["diagnostics"] = diag;
    return j;
}

std::string coefficients_csv(std::span<const pipeline::PipelineReport> reports) {
    std::string out = "model,section,term,estimate,std_error,t_stat,p_value\n";
    auto emit = [&](const std::string& model, std::string_view section, const ardl::Coefficient& c) {
        out += fmt::format("{},{},{},{},{},{},{}\n", csv::escape(model), section, csv::escape(c.name),
                           exact(c.value), exact(c.std_error), exact(c.t_stat), exact(c.p_value));
    };
    for (const auto& r : reports) {
        for (const auto& c : ols_terms(r.fit.ols)) emit(r.model, "ardl", c);
        if (r.ecm) {
            emit(r.model, "error_correction", r.ecm->ect);
            for (const auto& t : r.ecm->theta) emit(r.model, "long_run", t);
            for (const auto& c : short_run_terms(*r.ecm)) emit(r.model, "short_run", c);
        }
        if (r.difference_model) {
            for (const auto& c : ols_terms(r.difference_model->ols)) emit(r.model, "difference", c);
        }
    }
    return out;
}

std::string pretests_csv(std::span<const pipeline::PipelineReport> reports) {
    std::string out =
        "model,variable,series,test,deterministic,lags,nobs,statistic,cv1,cv5,cv10,reject,order\n";
    for (const auto& r : reports) {
        for (const auto& p : r.pretests) {
            auto emit = [&](std::string_view series, const ur::UnitRootResult& u) {
                out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", csv::escape(r.model),
                                   csv::escape(p.name), series, u.test, cv::to_string(u.deterministic),
                                   u.lags, u.nobs, exact(u.statistic), exact(u.critical.one),
                                   exact(u.critical.five), exact(u.critical.ten), u.reject ? 1 : 0,
                                   ur::to_string(p.report.order));
            };
            for (const auto& u : p.report.level) emit("level", u);
            for (const auto& u : p.report.difference) emit("difference", u);
        }
    }
    return out;
}

std::string bounds_csv(std::span<const pipeline::PipelineReport> reports) {
    std::string out = "model,orders,k,f_statistic,level,I0,I1,verdict\n";
    for (const auto& r : reports) {
        for (const auto& b : r.bounds.table) {
            out += fmt::format("{},{},{},{},{},{},{},{}\n", csv::escape(r.model),
                               csv::escape(r.selection.orders.label()), r.bounds.k,
                               exact(r.bounds.f_statistic), exact(b.level), exact(b.bounds.lower),
                               exact(b.bounds.upper),
                               ardl::to_string(ardl::classify_bounds(r.bounds.f_statistic, b.bounds)));
        }
    }
    return out;
}

std::string diagnostics_csv(std::span<const pipeline::PipelineReport> reports) {
    std::string out = "model,test,statistic,distribution,p_value,reject_5pct\n";
    for (const auto& r : reports) {
        for (const auto& t : r.diagnostics.tests) {
            out += fmt::format("{},{},{},{},{},{}\n", csv::escape(r.model), csv::escape(t.name),
                               exact(t.statistic), csv::escape(t.distribution()), exact(t.p_value),
                               t.reject ? 1 : 0);
        }
        if (r.diagnostics.cusum) {
            // Statistic column holds the number of band crossings.
            out += fmt::format("{},CUSUM,{},band {},,{}\n", csv::escape(r.model),
                               r.diagnostics.cusum->crossings.size(), diag::kCusumBoundary5,
                               r.diagnostics.cusum->stable ? 0 : 1);
        }
    }
    return out;
}

std::string cusum_csv(std::span<const pipeline::PipelineReport> reports) {
    std::string out = "model,date,t,cusum,lower,upper\n";
    for (const auto& r : reports) {
        if (!r.diagnostics.cusum) continue;
        const auto& c = *r.diagnostics.cusum;
        for (std::size_t i = 0; i < c.path.size(); ++i) {
            const std::size_t row = r.fit.start + c.t[i] - 1;
            out += fmt::format("{},{},{},{},{},{}\n", csv::escape(r.model), ts::format_date(r.fit.dates[row]),
                               c.t[i], exact(c.path[i]), exact(-c.bound[i]), exact(c.bound[i]));
        }
    }
    return out;
}

}  // namespace powsec::report
