#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace powsec::cv {

enum class Deterministic { constant, constant_trend };

[[nodiscard]] std::string_view to_string(Deterministic d);
[[nodiscard]] Deterministic parse_deterministic(std::string_view tag);

/// Table of left-tail Dickey-Fuller type critical values. ADF and PP share
/// the `adf` rows.
enum class UnitRootTable { adf, dfgls };

/// Left-tail critical values at 1, 5 and 10%.
struct UnitRootCriticalValues {
    double one = 0.0;
    double five = 0.0;
    double ten = 0.0;
};

/// Linear interpolation in 1/T between the shipped sample-size buckets;
/// samples below the smallest bucket use that bucket.
[[nodiscard]] double unit_root_critical_value(UnitRootTable table, Deterministic det,
                                              std::size_t nobs, double level);
[[nodiscard]] UnitRootCriticalValues unit_root_critical_values(UnitRootTable table,
                                                               Deterministic det, std::size_t nobs);

/// Asymptotic bounds for the F test on lagged levels.
struct Bounds {
    double lower = 0.0;  ///< all regressors I(0)
    double upper = 0.0;  ///< all regressors I(1)
};

/// Unrestricted-intercept, no-trend case. Throws NumericError when the table
/// has no entry for (k, level).
[[nodiscard]] Bounds bounds_critical_values(std::size_t k, double level);
/// Significance levels with shipped bounds, ascending.
[[nodiscard]] std::vector<double> bounds_levels();

}  // namespace powsec::cv
