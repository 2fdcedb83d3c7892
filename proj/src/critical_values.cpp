#include "powsec/critical_values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "powsec/csv.hpp"
#include "powsec/error.hpp"

namespace powsec::detail {
extern const std::string_view kUnitRootTableCsv;
extern const std::string_view kBoundsTableCsv;
}  // namespace powsec::detail

namespace powsec::cv {

namespace {

// Levels are stored in basis points so they can key maps exactly.
int level_key(double level) { return static_cast<int>(std::lround(level * 10000.0)); }

struct UnitRootRow {
    double inv_nobs;  // 0 for the asymptotic row
    double value;
};

using UnitRootKey = std::tuple<UnitRootTable, Deterministic, int>;

const std::map<UnitRootKey, std::vector<UnitRootRow>>& unit_root_table() {
    static const auto table = [] {
        std::map<UnitRootKey, std::vector<UnitRootRow>> out;
        const csv::Table t = csv::parse(detail::kUnitRootTableCsv, "unit_root_critical_values.csv");
        const auto c_test = t.column("test");
        const auto c_det = t.column("deterministic");
        const auto c_n = t.column("nobs");
        const auto c_level = t.column("level");
        const auto c_value = t.column("value");
        for (const auto& row : t.rows) {
            const UnitRootTable test =
                row[c_test] == "adf" ? UnitRootTable::adf : UnitRootTable::dfgls;
            const Deterministic det = parse_deterministic(row[c_det]);
            const double inv = row[c_n] == "inf" ? 0.0 : 1.0 / csv::parse_number(row[c_n], "nobs");
            out[{test, det, level_key(csv::parse_number(row[c_level], "level"))}].push_back(
                {inv, csv::parse_number(row[c_value], "value")});
        }
        for (auto& [key, rows] : out) {
            std::sort(rows.begin(), rows.end(),
                      [](const UnitRootRow& a, const UnitRootRow& b) { return a.inv_nobs < b.inv_nobs; });
        }
        return out;
    }();
    return table;
}

const std::map<std::pair<std::size_t, int>, Bounds>& bounds_table() {
    static const auto table = [] {
        std::map<std::pair<std::size_t, int>, Bounds> out;
        const csv::Table t = csv::parse(detail::kBoundsTableCsv, "bounds_critical_values.csv");
        const auto c_case = t.column("case");
        const auto c_k = t.column("k");
        const auto c_level = t.column("level");
        const auto c_lo = t.column("I0");
        const auto c_hi = t.column("I1");
        for (const auto& row : t.rows) {
            if (row[c_case] != "III") continue;
            const auto k = static_cast<std::size_t>(csv::parse_number(row[c_k], "k"));
            out[{k, level_key(csv::parse_number(row[c_level], "level"))}] = {
                csv::parse_number(row[c_lo], "I0"), csv::parse_number(row[c_hi], "I1")};
        }
        return out;
    }();
    return table;
}

}  // namespace

std::string_view to_string(Deterministic d) {
    return d == Deterministic::constant ? "constant" : "constant_trend";
}

Deterministic parse_deterministic(std::string_view tag) {
    if (tag == "constant" || tag == "c") return Deterministic::constant;
    if (tag == "constant_trend" || tag == "ct") return Deterministic::constant_trend;
    throw std::invalid_argument(
        fmt::format("unknown deterministic specification '{}' (constant, constant_trend)", tag));
}

double unit_root_critical_value(UnitRootTable table, Deterministic det, std::size_t nobs,
                                double level) {
    const auto& t = unit_root_table();
    const auto it = t.find({table, det, level_key(level)});
    if (it == t.end()) {
        throw NumericError(fmt::format("no unit-root critical value at level {}", level));
    }
    const auto& rows = it->second;
    const double inv = nobs == 0 ? std::numeric_limits<double>::infinity()
                                 : 1.0 / static_cast<double>(nobs);
    if (inv >= rows.back().inv_nobs) return rows.back().value;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (inv <= rows[i].inv_nobs) {
            const auto& a = rows[i - 1];
            const auto& b = rows[i];
            const double w = (inv - a.inv_nobs) / (b.inv_nobs - a.inv_nobs);
            return a.value + w * (b.value - a.value);
        }
    }
    return rows.front().value;
}

UnitRootCriticalValues unit_root_critical_values(UnitRootTable table, Deterministic det,
                                                 std::size_t nobs) {
    return {unit_root_critical_value(table, det, nobs, 0.01),
            unit_root_critical_value(table, det, nobs, 0.05),
            unit_root_critical_value(table, det, nobs, 0.10)};
}

Bounds bounds_critical_values(std::size_t k, double level) {
    const auto& t = bounds_table();
    const auto it = t.find({k, level_key(level)});
    if (it == t.end()) {
        throw NumericError(
            fmt::format("no bounds critical values for k = {} regressors at level {}", k, level));
    }
    return it->second;
}

std::vector<double> bounds_levels() {
    std::vector<int> keys;
    for (const auto& [key, value] : bounds_table()) keys.push_back(key.second);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<double> out;
    for (int k : keys) out.push_back(k / 10000.0);
    return out;
}

}  // namespace powsec::cv
