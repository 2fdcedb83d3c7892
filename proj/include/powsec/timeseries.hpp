#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace powsec::ts {

/// Calendar day without time of day.
using Date = std::chrono::sys_days;

/// Parses `text` with a strftime-style pattern (default ISO 8601).
/// Throws DataError on failure.
[[nodiscard]] Date parse_date(std::string_view text, std::string_view pattern = "%Y-%m-%d");
[[nodiscard]] std::string format_date(Date d);

/// Daily series on a contiguous run of calendar days.
///
/// Dates are strictly increasing with no missing day inside the stored range;
/// gaps have to be resolved by the loader (forward fill) before a Series can
/// be constructed. Instances are immutable.
class Series {
public:
    Series() = default;
    Series(std::string name, std::vector<Date> dates, std::vector<double> values);
    /// Contiguous series starting at `first`.
    Series(std::string name, Date first, std::vector<double> values);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::span<const Date> dates() const noexcept { return dates_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    [[nodiscard]] Series renamed(std::string name) const;
    /// Sub-range [offset, offset + count).
    [[nodiscard]] Series slice(std::size_t offset, std::size_t count) const;

private:
    std::string name_;
    std::vector<Date> dates_;
    std::vector<double> values_;
};

/// Columns sharing one date index.
class Dataset {
public:
    Dataset() = default;
    /// All columns must carry exactly `index` and have unique names.
    Dataset(std::vector<Date> index, std::vector<Series> columns);

    [[nodiscard]] std::span<const Date> index() const noexcept { return index_; }
    [[nodiscard]] std::span<const Series> columns() const noexcept { return columns_; }
    [[nodiscard]] std::size_t rows() const noexcept { return index_.size(); }
    [[nodiscard]] bool has(std::string_view name) const noexcept;
    /// Throws std::out_of_range naming the missing column.
    [[nodiscard]] const Series& column(std::string_view name) const;
    [[nodiscard]] std::vector<std::string> names() const;
    /// Dataset restricted to the named columns, in the given order.
    [[nodiscard]] Dataset select(std::span<const std::string> names) const;

private:
    std::vector<Date> index_;
    std::vector<Series> columns_;
};

struct ColumnStats {
    std::string name;
    std::size_t obs = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // sample, n - 1 denominator
    double min = 0.0;
    double max = 0.0;
};

using SummaryStats = std::vector<ColumnStats>;

inline constexpr double kDefaultLogFloor = 0.001;

/// ln(max(v, floor)) element-wise. Rejects non-finite values with the date.
[[nodiscard]] Series log_transform(const Series& s, double floor = kDefaultLogFloor);

/// order-th difference; the first `order` dates are dropped.
[[nodiscard]] Series difference(const Series& s, std::size_t order = 1);

/// Value at date t becomes the original value at t - k; the first k dates are
/// dropped so the result stays aligned to real observations.
[[nodiscard]] Series lag(const Series& s, std::size_t k);

/// Inner join on dates.
[[nodiscard]] Dataset align(std::span<const Series> columns);

/// Obs / mean / std / min / max per column, in dataset column order.
[[nodiscard]] SummaryStats describe(const Dataset& d);

}  // namespace powsec::ts
