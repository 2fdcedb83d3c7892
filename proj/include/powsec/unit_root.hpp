#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "powsec/critical_values.hpp"

namespace powsec::ur {

using cv::Deterministic;

enum class LagSelection { aic, fixed };

struct UnitRootResult {
    std::string test;  ///< "ADF", "DF-GLS" or "PP"
    Deterministic deterministic = Deterministic::constant;
    /// Augmentation lags (ADF, DF-GLS) or Bartlett bandwidth (PP).
    std::size_t lags = 0;
    std::size_t nobs = 0;  ///< observations in the test regression
    double statistic = 0.0;
    cv::UnitRootCriticalValues critical;
    bool reject = false;  ///< unit root rejected at 5%
};

/// floor(12 (T/100)^(1/4)).
[[nodiscard]] std::size_t default_max_lags(std::size_t nobs);
/// floor(4 (T/100)^(2/9)).
[[nodiscard]] std::size_t default_bandwidth(std::size_t nobs);

/// Augmented Dickey-Fuller t test on rho in
/// dy_t = mu [+ b t] + rho y_{t-1} + sum_i g_i dy_{t-i} + e_t.
/// Under LagSelection::aic the lag count minimises AIC over 0..max_lags on the
/// sample trimmed for max_lags; the chosen model is then refit on its own
/// largest sample.
[[nodiscard]] UnitRootResult adf(std::span<const double> y,
                                 Deterministic det = Deterministic::constant,
                                 std::optional<std::size_t> max_lags = std::nullopt,
                                 LagSelection selection = LagSelection::aic);

/// Elliott-Rothenberg-Stock GLS detrending followed by an ADF regression
/// without deterministic terms; lags chosen as in adf.
[[nodiscard]] UnitRootResult dfgls(std::span<const double> y,
                                   Deterministic det = Deterministic::constant,
                                   std::optional<std::size_t> max_lags = std::nullopt,
                                   LagSelection selection = LagSelection::aic);

/// Phillips-Perron Z_t with a Bartlett-kernel long-run variance.
[[nodiscard]] UnitRootResult pp(std::span<const double> y,
                                Deterministic det = Deterministic::constant,
                                std::optional<std::size_t> bandwidth = std::nullopt);

enum class Integration { I0, I1, I2plus };

[[nodiscard]] std::string_view to_string(Integration i);

struct IntegrationReport {
    Integration order = Integration::I0;
    /// ADF, DF-GLS and PP on the level and on the first difference. The
    /// decision uses ADF; the others are informative.
    std::vector<UnitRootResult> level;
    std::vector<UnitRootResult> difference;
};

/// I0 when ADF rejects on the level, I1 when it rejects on the first
/// difference, otherwise I2plus. Needs at least 50 observations.
[[nodiscard]] IntegrationReport classify_integration(std::span<const double> y,
                                                     Deterministic det = Deterministic::constant);

}  // namespace powsec::ur
