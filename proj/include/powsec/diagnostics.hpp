#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "powsec/ols.hpp"

namespace powsec::diag {

enum class Reference { chi_squared, f };

struct TestResult {
    std::string name;
    double statistic = 0.0;
    Reference reference = Reference::chi_squared;
    double df1 = 0.0;
    double df2 = 0.0;  ///< F only
    double p_value = 1.0;
    bool reject = false;  ///< at 5%

    /// "chi2(2)" or "F(2, 480)".
    [[nodiscard]] std::string distribution() const;
};

/// LM = (T - p) R^2 of u_t on X and u_{t-1..t-p} (pre-sample u = 0), chi2(p).
[[nodiscard]] TestResult breusch_godfrey(const ols::OlsFit& fit, std::size_t p);
/// Wald F on the lagged-residual block of the same auxiliary regression, F(p, T-k-p).
[[nodiscard]] TestResult durbin_alternative(const ols::OlsFit& fit, std::size_t p);
/// ESS/2 from u^2/sigma^2 (sigma^2 = SSR/T) on a constant and fitted values, chi2(1).
[[nodiscard]] TestResult breusch_pagan(const ols::OlsFit& fit);
/// T/6 (S^2 + (K-3)^2/4), chi2(2). Needs T >= 8.
[[nodiscard]] TestResult jarque_bera(const Eigen::VectorXd& residuals);

/// Standardized one-step-ahead prediction errors w_t, t = k+1..T. The first
/// k rows must be nonsingular; a singular start names the offending row.
[[nodiscard]] Eigen::VectorXd recursive_residuals(const Eigen::VectorXd& y, const Eigen::MatrixXd& X);

/// 5% boundary constant for the CUSUM of recursive residuals.
inline constexpr double kCusumBoundary5 = 0.948;

struct CusumResult {
    std::vector<std::size_t> t;  ///< 1-based observation index, k+1..T
    std::vector<double> path;
    std::vector<double> bound;   ///< symmetric: path must stay in [-bound, bound]
    std::vector<std::size_t> crossings;  ///< observation indices outside the band
    double sigma = 0.0;
    bool stable = true;
};

/// CUSUM_t = sum_{j<=t} w_j / sigma with sigma^2 = sum w^2 / (T - k), band
/// a [sqrt(T-k) + 2 (t-k)/sqrt(T-k)].
[[nodiscard]] CusumResult cusum(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                                double boundary = kCusumBoundary5);

struct DiagnosticsReport {
    std::vector<TestResult> tests;
    std::optional<CusumResult> cusum;
    std::vector<std::string> skipped;  ///< "test: reason" for tests that could not run
};

struct DiagnosticsOptions {
    std::size_t serial_lags = 1;
};

/// Battery applied to a fitted model: serial correlation (BG, Durbin),
/// heteroscedasticity (BP), normality (JB) and CUSUM stability. Tests that
/// cannot run on this fit are skipped, not fatal.
[[nodiscard]] DiagnosticsReport run_diagnostics(const ols::OlsFit& fit,
                                                const DiagnosticsOptions& options = {});

}  // namespace powsec::diag
