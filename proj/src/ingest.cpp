#include "powsec/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "powsec/csv.hpp"
#include "powsec/error.hpp"

namespace powsec::ingest {

using ts::Date;
using ts::Series;

Formula parse_formula(std::string_view tag) {
    if (tag == "raw") return Formula::raw;
    if (tag == "reward_per_block") return Formula::reward_per_block;
    if (tag == "competition_intensity") return Formula::competition_intensity;
    if (tag == "hhi") return Formula::hhi;
    if (tag == "hhi_normalised" || tag == "hhi_normalized") return Formula::hhi_normalised;
    throw ConfigError(fmt::format("unknown formula '{}'", tag));
}

std::string_view to_string(Formula f) {
    switch (f) {
        case Formula::raw: return "raw";
        case Formula::reward_per_block: return "reward_per_block";
        case Formula::competition_intensity: return "competition_intensity";
        case Formula::hhi: return "hhi";
        case Formula::hhi_normalised: return "hhi_normalised";
    }
    return "?";
}

namespace {

struct Row {
    Date date;
    double value;
    std::size_t line;
};

Series fill_calendar(const std::string& name, const std::vector<Row>& rows, FillPolicy fill,
                     const std::string& origin) {
    std::vector<Date> dates;
    std::vector<double> values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) {
            if (rows[i].date == rows[i - 1].date) {
                throw DataError(fmt::format("{}: duplicate date {} (lines {} and {})", origin,
                                            ts::format_date(rows[i].date), rows[i - 1].line,
                                            rows[i].line));
            }
            Date next = rows[i - 1].date + std::chrono::days{1};
            if (next != rows[i].date && fill == FillPolicy::none) {
                throw DataError(fmt::format("{}: missing dates between {} and {} (use fill=forward)",
                                            origin, ts::format_date(rows[i - 1].date),
                                            ts::format_date(rows[i].date)));
            }
            for (; next < rows[i].date; next += std::chrono::days{1}) {
                dates.push_back(next);
                values.push_back(rows[i - 1].value);
            }
        }
        dates.push_back(rows[i].date);
        values.push_back(rows[i].value);
    }
    return Series(name, std::move(dates), std::move(values));
}

}  // namespace

Series load_csv(const SourceSpec& spec) {
    const auto table = csv::read(spec.path);
    const std::string origin = spec.path.string();
    if (table.rows.empty()) {
        throw DataError(fmt::format("{}: no data rows", origin));
    }
    const auto dcol = table.column(spec.date_column);
    const auto vcol = table.column(spec.value_column);
    std::vector<Row> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto line = table.line_numbers[i];
        const auto ctx = fmt::format("{}:{}", origin, line);
        Date d;
        try {
            d = ts::parse_date(table.rows[i][dcol], spec.date_format);
        } catch (const DataError& e) {
            throw DataError(fmt::format("{}: {}", ctx, e.what()));
        }
        rows.push_back({d, csv::parse_number(table.rows[i][vcol], ctx), line});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    return fill_calendar(spec.name, rows, spec.fill, origin);
}

SharePanel load_share_panel(const SharePanelSpec& spec) {
    const auto table = csv::read(spec.path);
    const std::string origin = spec.path.string();
    if (table.rows.empty()) throw DataError(fmt::format("{}: no data rows", origin));
    const auto dcol = table.column(spec.date_column);
    struct PanelRow {
        Date date;
        std::vector<double> shares;
        std::size_t line;
    };
    std::vector<PanelRow> rows;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto ctx = fmt::format("{}:{}", origin, table.line_numbers[i]);
        PanelRow r{ts::parse_date(table.rows[i][dcol], spec.date_format), {}, table.line_numbers[i]};
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (c == dcol) continue;
            const auto& cell = table.rows[i][c];
            // Empty cells mean the pool was inactive that day.
            r.shares.push_back(cell.empty() ? 0.0 : csv::parse_number(cell, ctx));
        }
        if (spec.normalise) {
            const double total = std::accumulate(r.shares.begin(), r.shares.end(), 0.0);
            if (!(total > 0.0)) throw DataError(fmt::format("{}: pool totals sum to zero", ctx));
            for (auto& s : r.shares) s /= total;
        }
        rows.push_back(std::move(r));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const PanelRow& a, const PanelRow& b) { return a.date < b.date; });
    SharePanel panel{spec.name, {}, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].date == rows[i - 1].date) {
            throw DataError(
                fmt::format("{}: duplicate date {}", origin, ts::format_date(rows[i].date)));
        }
        if (i > 0 && rows[i].date - rows[i - 1].date != std::chrono::days{1}) {
            throw DataError(fmt::format("{}: missing dates after {}", origin,
                                        ts::format_date(rows[i - 1].date)));
        }
        panel.dates.push_back(rows[i].date);
        panel.shares.push_back(std::move(rows[i].shares));
    }
    return panel;
}

Series reward_per_block(const Series& reward_usd_daily, const Series& blocks_daily) {
    const std::vector<Series> both{reward_usd_daily, blocks_daily};
    const auto d = ts::align(both);
    const auto r = d.columns()[0].values();
    const auto b = d.columns()[1].values();
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(b[i] > 0.0)) {
            throw DataError(fmt::format("block count {} on {} is not positive", b[i],
                                        ts::format_date(d.index()[i])));
        }
        out[i] = r[i] / b[i];
    }
    return Series(reward_usd_daily.name(), {d.index().begin(), d.index().end()}, std::move(out));
}

double competition_intensity(double n) {
    if (!(n >= 1.0)) {
        throw std::invalid_argument(fmt::format("miner count {} below 1", n));
    }
    return (n - 1.0) / (n * n);
}

namespace {

template <class F>
Series map_values(const Series& s, F&& f) {
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        try {
            out[i] = f(s[i]);
        } catch (const std::invalid_argument& e) {
            throw DataError(fmt::format("series '{}' on {}: {}", s.name(),
                                        ts::format_date(s.dates()[i]), e.what()));
        }
    }
    return Series(s.name(), {s.dates().begin(), s.dates().end()}, std::move(out));
}

void check_shares(std::span<const double> shares) {
    if (shares.empty()) throw std::invalid_argument("share vector is empty");
    double total = 0.0;
    for (double s : shares) {
        if (s < 0.0) throw std::invalid_argument(fmt::format("negative share {}", s));
        total += s;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument(fmt::format("shares sum to {}, not 1", total));
    }
}

}  // namespace

Series competition_intensity(const Series& n_miners) {
    return map_values(n_miners, [](double n) { return competition_intensity(n); });
}

double hhi(std::span<const double> shares) {
    check_shares(shares);
    double h = 0.0;
    for (double s : shares) h += s * s;
    return h;
}

double hhi_normalised(std::span<const double> shares) {
    const double h = hhi(shares);
    const auto n = static_cast<double>(shares.size());
    if (shares.size() < 2) {
        throw std::invalid_argument("normalised HHI is degenerate for a single participant");
    }
    return (h - 1.0 / n) / (1.0 - 1.0 / n);
}

Series hhi_equal_shares(const Series& n_miners) {
    return map_values(n_miners, [](double n) {
        if (!(n >= 1.0)) throw std::invalid_argument(fmt::format("miner count {} below 1", n));
        return 1.0 / n;
    });
}

Series hhi_normalised_equal_shares(const Series& n_miners) {
    return map_values(n_miners, [](double n) {
        if (!(n >= 2.0)) {
            throw std::invalid_argument(
                fmt::format("normalised HHI is degenerate for miner count {}", n));
        }
        // H = 1/n exactly for equal shares.
        return 0.0;
    });
}

namespace {

template <class F>
Series panel_map(const SharePanel& panel, std::string name, F&& f) {
    std::vector<double> out(panel.dates.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        try {
            out[i] = f(panel.shares[i]);
        } catch (const std::invalid_argument& e) {
            throw DataError(fmt::format("share panel '{}' on {}: {}", panel.name,
                                        ts::format_date(panel.dates[i]), e.what()));
        }
    }
    return Series(std::move(name), panel.dates, std::move(out));
}

}  // namespace

Series hhi(const SharePanel& panel, std::string name) {
    return panel_map(panel, std::move(name), [](const std::vector<double>& s) { return hhi(s); });
}

Series hhi_normalised(const SharePanel& panel, std::string name) {
    return panel_map(panel, std::move(name),
                     [](const std::vector<double>& s) { return hhi_normalised(s); });
}

namespace {

std::size_t expected_arity(Formula f) {
    return f == Formula::reward_per_block ? 2 : 1;
}

}  // namespace

ts::Dataset build_dataset(const std::map<std::string, Series>& sources,
                          const std::map<std::string, SharePanel>& panels,
                          std::span<const VariableRecipe> recipes, const BuildOptions& options) {
    if (recipes.empty()) throw ConfigError("no variable recipes given");
    std::set<std::string> outputs;
    for (const auto& r : recipes) {
        if (!outputs.insert(r.output).second) {
            throw ConfigError(fmt::format("duplicate variable '{}'", r.output));
        }
        if (r.inputs.size() != expected_arity(r.formula)) {
            throw ConfigError(fmt::format("variable '{}': formula {} takes {} input(s), got {}",
                                          r.output, to_string(r.formula),
                                          expected_arity(r.formula), r.inputs.size()));
        }
    }

    // Dependency order: a recipe may consume sources, share panels, or the
    // pre-log output of another recipe.
    std::map<std::string, Series> built;
    std::vector<bool> done(recipes.size(), false);
    std::size_t remaining = recipes.size();
    while (remaining > 0) {
        bool progressed = false;
        for (std::size_t i = 0; i < recipes.size(); ++i) {
            if (done[i]) continue;
            const auto& r = recipes[i];
            bool ready = true;
            for (const auto& in : r.inputs) {
                const bool known = sources.contains(in) || panels.contains(in) || built.contains(in);
                if (!known && !outputs.contains(in)) {
                    throw ConfigError(
                        fmt::format("variable '{}' references unknown input '{}'", r.output, in));
                }
                if (!known) ready = false;
            }
            if (!ready) continue;
            auto series_input = [&](const std::string& in) -> const Series& {
                if (auto it = built.find(in); it != built.end()) return it->second;
                if (auto it = sources.find(in); it != sources.end()) return it->second;
                throw ConfigError(fmt::format("variable '{}': input '{}' is a share panel, "
                                              "not a series",
                                              r.output, in));
            };
            Series out;
            switch (r.formula) {
                case Formula::raw:
                    out = series_input(r.inputs[0]);
                    break;
                case Formula::reward_per_block:
                    out = reward_per_block(series_input(r.inputs[0]), series_input(r.inputs[1]));
                    break;
                case Formula::competition_intensity:
                    out = competition_intensity(series_input(r.inputs[0]));
                    break;
                case Formula::hhi:
                    if (auto it = panels.find(r.inputs[0]); it != panels.end()) {
                        out = hhi(it->second, r.output);
                    } else {
                        out = hhi_equal_shares(series_input(r.inputs[0]));
                    }
                    break;
                case Formula::hhi_normalised:
                    if (auto it = panels.find(r.inputs[0]); it != panels.end()) {
                        out = hhi_normalised(it->second, r.output);
                    } else {
                        out = hhi_normalised_equal_shares(series_input(r.inputs[0]));
                    }
                    break;
            }
            built.emplace(r.output, out.renamed(r.output));
            done[i] = true;
            --remaining;
            progressed = true;
        }
        if (!progressed) {
            throw ConfigError("variable recipes contain a dependency cycle");
        }
    }

    std::vector<Series> columns;
    columns.reserve(recipes.size());
    for (const auto& r : recipes) {
        const auto& s = built.at(r.output);
        columns.push_back(r.log ? ts::log_transform(s, options.log_floor) : s);
    }
    return ts::align(columns);
}

std::string dataset_csv(const ts::Dataset& d) {
    std::string out = "date";
    for (const auto& c : d.columns()) {
        out += ',';
        out += csv::escape(c.name());
    }
    out += '\n';
    for (std::size_t i = 0; i < d.rows(); ++i) {
        out += ts::format_date(d.index()[i]);
        for (const auto& c : d.columns()) out += fmt::format(",{}", c[i]);
        out += '\n';
    }
    return out;
}

ts::Dataset read_dataset(const std::filesystem::path& path) {
    const csv::Table t = csv::read(path);
    const std::string origin = path.string();
    const std::size_t date_col = t.column("date");
    if (t.rows.empty()) throw DataError(fmt::format("{}: dataset has no rows", origin));
    std::vector<Date> dates;
    dates.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        try {
            dates.push_back(ts::parse_date(t.rows[r][date_col]));
        } catch (const DataError& e) {
            throw DataError(fmt::format("{}:{}: {}", origin, t.line_numbers[r], e.what()));
        }
    }
    std::vector<Series> columns;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (c == date_col) continue;
        std::vector<double> values;
        values.reserve(t.rows.size());
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            values.push_back(csv::parse_number(
                t.rows[r][c], fmt::format("{}:{} column '{}'", origin, t.line_numbers[r], t.header[c])));
        }
        try {
            columns.emplace_back(t.header[c], dates, std::move(values));
        } catch (const DataError& e) {
            throw DataError(fmt::format("{}: {}", origin, e.what()));
        }
    }
    if (columns.empty()) throw DataError(fmt::format("{}: dataset has no value columns", origin));
    return ts::Dataset(dates, std::move(columns));
}

}  // namespace powsec::ingest
