#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace powsec::ols {

/// Least-squares fit with classical (homoscedastic) inference.
struct OlsFit {
    std::vector<std::string> names;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd std_errors;
    Eigen::VectorXd t_stats;
    Eigen::VectorXd p_values;
    Eigen::MatrixXd covariance;
    Eigen::VectorXd residuals;
    Eigen::VectorXd fitted;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double ssr = 0.0;
    double sigma2 = 0.0;  ///< SSR / (T - k)
    std::size_t nobs = 0;
    std::size_t n_params = 0;
    bool has_intercept = false;
    /// Kept for the diagnostics, which rerun auxiliary regressions.
    Eigen::MatrixXd design;
    Eigen::VectorXd response;

    /// Column position of `name`; throws std::out_of_range.
    [[nodiscard]] std::size_t index_of(std::string_view name) const;
    [[nodiscard]] double coefficient(std::string_view name) const {
        return coefficients(static_cast<Eigen::Index>(index_of(name)));
    }
};

/// T ln(SSR/T) + 2k.
[[nodiscard]] double aic(double ssr, std::size_t nobs, std::size_t n_params);
/// Gaussian log-likelihood at the ML variance SSR/T.
[[nodiscard]] double log_likelihood(double ssr, std::size_t nobs);

/// Fits y on X by column-pivoted Householder QR. `names` labels the columns
/// (defaults to x0, x1, ...). Throws NumericError naming the collinear columns
/// when X is rank deficient, and when T <= k.
[[nodiscard]] OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                         std::vector<std::string> names = {}, bool has_intercept = true);

/// Residual sum of squares only; same rank check, no inference.
[[nodiscard]] double ssr_only(const Eigen::VectorXd& y, const Eigen::MatrixXd& X);

}  // namespace powsec::ols
