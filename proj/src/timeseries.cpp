#include "powsec/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

#include "powsec/error.hpp"

namespace powsec::ts {

using namespace std::chrono;

Date parse_date(std::string_view text, std::string_view pattern) {
    std::tm tm{};
    std::istringstream in{std::string(text)};
    in >> std::get_time(&tm, std::string(pattern).c_str());
    if (in.fail()) {
        throw DataError(fmt::format("cannot parse date '{}' with pattern '{}'", text, pattern));
    }
    in >> std::ws;
    if (!in.eof()) {
        throw DataError(fmt::format("trailing characters in date '{}'", text));
    }
    const year_month_day ymd{year{tm.tm_year + 1900}, month{static_cast<unsigned>(tm.tm_mon + 1)},
                             day{static_cast<unsigned>(tm.tm_mday)}};
    if (!ymd.ok()) {
        throw DataError(fmt::format("invalid calendar date '{}'", text));
    }
    return sys_days{ymd};
}

std::string format_date(Date d) {
    const year_month_day ymd{d};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

Series::Series(std::string name, std::vector<Date> dates, std::vector<double> values)
    : name_(std::move(name)), dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size()) {
        throw std::invalid_argument(fmt::format("series '{}': {} dates but {} values", name_,
                                                dates_.size(), values_.size()));
    }
    for (std::size_t i = 1; i < dates_.size(); ++i) {
        if (dates_[i] <= dates_[i - 1]) {
            throw DataError(fmt::format("series '{}': dates not strictly increasing at {}", name_,
                                        format_date(dates_[i])));
        }
        if (dates_[i] - dates_[i - 1] != days{1}) {
            throw DataError(fmt::format("series '{}': missing days between {} and {}", name_,
                                        format_date(dates_[i - 1]), format_date(dates_[i])));
        }
    }
}

Series::Series(std::string name, Date first, std::vector<double> values)
    : name_(std::move(name)), values_(std::move(values)) {
    dates_.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        dates_.push_back(first + days{static_cast<int>(i)});
    }
}

Series Series::renamed(std::string name) const {
    Series out = *this;
    out.name_ = std::move(name);
    return out;
}

Series Series::slice(std::size_t offset, std::size_t count) const {
    if (offset + count > size()) {
        throw std::out_of_range(fmt::format("series '{}': slice [{}, {}) beyond length {}", name_,
                                            offset, offset + count, size()));
    }
    Series out;
    out.name_ = name_;
    out.dates_.assign(dates_.begin() + offset, dates_.begin() + offset + count);
    out.values_.assign(values_.begin() + offset, values_.begin() + offset + count);
    return out;
}

Dataset::Dataset(std::vector<Date> index, std::vector<Series> columns)
    : index_(std::move(index)), columns_(std::move(columns)) {
    std::unordered_set<std::string> seen;
    for (const auto& c : columns_) {
        if (!seen.insert(c.name()).second) {
            throw std::invalid_argument(fmt::format("duplicate column name '{}'", c.name()));
        }
        if (!std::equal(c.dates().begin(), c.dates().end(), index_.begin(), index_.end())) {
            throw std::invalid_argument(
                fmt::format("column '{}' is not on the dataset index", c.name()));
        }
    }
}

bool Dataset::has(std::string_view name) const noexcept {
    return std::any_of(columns_.begin(), columns_.end(),
                       [&](const Series& s) { return s.name() == name; });
}

const Series& Dataset::column(std::string_view name) const {
    for (const auto& c : columns_) {
        if (c.name() == name) return c;
    }
    throw std::out_of_range(fmt::format("dataset has no column '{}'", name));
}

std::vector<std::string> Dataset::names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) out.push_back(c.name());
    return out;
}

Dataset Dataset::select(std::span<const std::string> names) const {
    std::vector<Series> cols;
    cols.reserve(names.size());
    for (const auto& n : names) cols.push_back(column(n));
    return Dataset(index_, std::move(cols));
}

Series log_transform(const Series& s, double floor) {
    if (!(floor > 0.0)) {
        throw std::invalid_argument(fmt::format("log floor must be positive, got {}", floor));
    }
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double v = s[i];
        if (!std::isfinite(v)) {
            throw DataError(fmt::format("series '{}': non-finite value at {}", s.name(),
                                        format_date(s.dates()[i])));
        }
        out[i] = std::log(std::max(v, floor));
    }
    return Series(s.name(), {s.dates().begin(), s.dates().end()}, std::move(out));
}

Series difference(const Series& s, std::size_t order) {
    if (order == 0) {
        throw std::invalid_argument("difference order must be at least 1");
    }
    if (s.size() <= order) {
        throw std::invalid_argument(fmt::format("series '{}' of length {} too short for order {}",
                                                s.name(), s.size(), order));
    }
    std::vector<double> v(s.values().begin(), s.values().end());
    for (std::size_t d = 0; d < order; ++d) {
        for (std::size_t i = v.size() - 1; i > d; --i) v[i] -= v[i - 1];
    }
    std::vector<double> tail(v.begin() + static_cast<std::ptrdiff_t>(order), v.end());
    return Series(s.name(), {s.dates().begin() + order, s.dates().end()}, std::move(tail));
}

Series lag(const Series& s, std::size_t k) {
    if (k >= s.size()) {
        throw std::invalid_argument(
            fmt::format("lag {} not smaller than length {} of '{}'", k, s.size(), s.name()));
    }
    const std::size_t n = s.size() - k;
    return Series(s.name(), {s.dates().begin() + k, s.dates().end()},
                  {s.values().begin(), s.values().begin() + n});
}

Dataset align(std::span<const Series> columns) {
    if (columns.empty()) {
        throw std::invalid_argument("align needs at least one series");
    }
    for (const auto& c : columns) {
        if (c.empty()) throw DataError(fmt::format("series '{}' is empty", c.name()));
    }
    // Every column is contiguous, so the intersection is [max first, min last].
    Date first = columns.front().dates().front();
    Date last = columns.front().dates().back();
    for (const auto& c : columns) {
        first = std::max(first, c.dates().front());
        last = std::min(last, c.dates().back());
    }
    if (first > last) {
        throw DataError("aligned date ranges do not overlap");
    }
    std::vector<Series> out;
    out.reserve(columns.size());
    for (const auto& c : columns) {
        const auto offset = static_cast<std::size_t>((first - c.dates().front()).count());
        const auto count = static_cast<std::size_t>((last - first).count()) + 1;
        out.push_back(c.slice(offset, count));
    }
    std::vector<Date> index(out.front().dates().begin(), out.front().dates().end());
    return Dataset(std::move(index), std::move(out));
}

SummaryStats describe(const Dataset& d) {
    SummaryStats stats;
    for (const auto& c : d.columns()) {
        if (c.empty()) {
            throw std::invalid_argument(fmt::format("column '{}' is empty", c.name()));
        }
        const auto v = c.values();
        ColumnStats s;
        s.name = c.name();
        s.obs = v.size();
        double sum = 0.0;
        for (double x : v) sum += x;
        const double mean = sum / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        s.std_dev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        s.min = *lo;
        s.max = *hi;
        s.mean = std::clamp(mean, s.min, s.max);
        stats.push_back(std::move(s));
    }
    return stats;
}

}  // namespace powsec::ts
