#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "powsec/critical_values.hpp"
#include "powsec/ols.hpp"
#include "powsec/timeseries.hpp"

namespace powsec::ardl {

struct ArdlSpec {
    std::string dependent;
    std::vector<std::string> regressors;
    std::size_t max_g = 4;  ///< lags of the dependent variable, >= 1
    std::size_t max_z = 4;  ///< lags of each regressor, >= 0
    /// Always on; kept so configs can state it.
    bool intercept = true;

    void validate() const;
};

struct ArdlOrders {
    std::size_t g = 1;
    std::vector<std::size_t> z;

    [[nodiscard]] std::size_t max_lag() const;
    [[nodiscard]] std::size_t total() const;
    /// "ARDL(2,1,0)".
    [[nodiscard]] std::string label() const;
    friend bool operator==(const ArdlOrders&, const ArdlOrders&) = default;
};

/// y_t = b0 + sum_{i=1..g} phi_i y_{t-i} + sum_j sum_{i=0..z_j} beta_{j,i} x_{j,t-i} + u_t.
struct ArdlFit {
    ArdlSpec spec;
    ArdlOrders orders;
    ols::OlsFit ols;
    /// Full level series the fit was built from.
    Eigen::VectorXd y;
    std::vector<Eigen::VectorXd> x;
    std::vector<ts::Date> dates;
    /// Index into y of the first regression observation.
    std::size_t start = 0;

    [[nodiscard]] double aic() const { return ols.aic; }
    [[nodiscard]] double intercept() const { return ols.coefficients(0); }
    /// phi_1..phi_g.
    [[nodiscard]] Eigen::VectorXd phi() const;
    /// beta_{j,0..z_j}.
    [[nodiscard]] Eigen::VectorXd beta(std::size_t j) const;
    /// Column of phi_1 and of beta_{j,0} in the design.
    [[nodiscard]] std::size_t phi_column() const { return 1; }
    [[nodiscard]] std::size_t beta_column(std::size_t j) const;
};

/// Regressor name for lag i of `base`: "base" for i = 0, else "base(-i)".
[[nodiscard]] std::string lag_name(const std::string& base, std::size_t i);

/// Column data for the spec, checked for presence and finiteness.
struct ArdlData {
    Eigen::VectorXd y;
    std::vector<Eigen::VectorXd> x;
    std::vector<ts::Date> dates;
};
[[nodiscard]] ArdlData extract(const ts::Dataset& data, const ArdlSpec& spec);

/// Lag-expanded design for rows start..T-1.
struct ArdlDesign {
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
    std::vector<std::string> names;
};
[[nodiscard]] ArdlDesign build_design(const ArdlData& d, const ArdlSpec& spec,
                                      const ArdlOrders& orders, std::size_t start);

struct Selection {
    ArdlOrders orders;
    double aic = 0.0;
    std::size_t candidates = 0;
    bool exhaustive = true;
};

/// Above this many candidates the search switches from exhaustive to
/// coordinate descent.
inline constexpr std::size_t kExhaustiveLimit = 4096;

/// AIC minimisation over g in 1..max_g and z_j in 0..max_z on the common
/// sample trimmed by max(max_g, max_z). Ties within 1e-9 (relative) go to the
/// smaller total lag order, then to the earlier candidate in enumeration order.
/// Coordinate descent starts from full lags and sweeps g, z_1, ..., z_k until
/// no coordinate improves.
[[nodiscard]] Selection select_orders(const ts::Dataset& data, const ArdlSpec& spec);

/// OLS on the lag-expanded design, sample trimmed by the largest chosen lag.
[[nodiscard]] ArdlFit fit_ardl(const ts::Dataset& data, const ArdlSpec& spec,
                               const ArdlOrders& orders);
[[nodiscard]] ArdlFit fit_ardl(const ArdlData& data, const ArdlSpec& spec, const ArdlOrders& orders);

enum class Verdict { no_long_run, inconclusive, cointegrated };
[[nodiscard]] std::string_view to_string(Verdict v);

struct BoundsLevel {
    double level = 0.0;
    cv::Bounds bounds;
};

struct BoundsResult {
    double f_statistic = 0.0;
    std::size_t k = 0;
    std::size_t df1 = 0;
    std::size_t df2 = 0;
    double level = 0.05;
    cv::Bounds bounds;                 ///< at `level`
    std::vector<BoundsLevel> table;  ///< every shipped level
    Verdict verdict = Verdict::no_long_run;
};

/// Verdict of F against a fixed pair of bounds.
[[nodiscard]] Verdict classify_bounds(double f, const cv::Bounds& bounds);

/// F statistic for joint nullity of the lagged-level terms of the conditional
/// ECM, computed as the equivalent Wald test of sum phi = 1 and
/// sum_i beta_{j,i} = 0 for every j on the ARDL estimates.
[[nodiscard]] double bounds_f_statistic(const ArdlFit& fit);
[[nodiscard]] BoundsResult bounds_test(const ArdlFit& fit, double level = 0.05);

struct Coefficient {
    std::string name;
    double value = 0.0;
    double std_error = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
};

/// dy_t = b0 - alpha (y_{t-1} - sum_j theta_j x_{j,t-1})
///        + sum_{i=1..g-1} psi_y,i dy_{t-i} + sum_j sum_{h=0..} psi_x,j,h dx_{j,t-h} + u_t.
/// psi_x,j,0 = beta_{j,0} and psi_x,j,h = -sum_{i>h} beta_{j,i}; for z_j = 0
/// the dx_{j,t} term is kept with coefficient beta_{j,0}.
struct EcmFit {
    double alpha = 0.0;  ///< 1 - sum phi; reported as the error-correction term -alpha
    double alpha_se = 0.0;
    Coefficient ect;  ///< -alpha with its inference
    std::vector<Coefficient> theta;
    std::vector<Coefficient> psi_y;
    std::vector<std::vector<Coefficient>> psi_x;
    Coefficient intercept;
    /// Fitted dy_t and residuals on the ARDL sample.
    Eigen::VectorXd fitted;
    Eigen::VectorXd residuals;
    double log_likelihood = 0.0;
};

/// Throws NumericError when |1 - sum phi| <= 1e-10.
[[nodiscard]] EcmFit to_ecm(const ArdlFit& fit);

/// Fitted dy_t evaluated directly from the ECM regressors and coefficients.
[[nodiscard]] Eigen::VectorXd ecm_fitted(const ArdlFit& fit, const EcmFit& ecm);

/// 1/|alpha| in periods, 0 < |alpha| <= 1.
[[nodiscard]] double speed_of_adjustment_days(double alpha);
/// 1/|coef| in periods, 0 < |coef| <= 1.
[[nodiscard]] double shock_persistence_days(double coef);

/// [1/hi, 1/lo] for an |alpha| printed to one significant digit, e.g.
/// 0.002 -> [1/0.0025, 1/0.0015] = [400, 666.7].
struct DaysInterval {
    double lo = 0.0;
    double hi = 0.0;
};
[[nodiscard]] DaysInterval days_interval_from_rounded(double rounded_alpha);

}  // namespace powsec::ardl
