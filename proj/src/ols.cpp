#include "powsec/ols.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "powsec/distributions.hpp"
#include "powsec/error.hpp"

namespace powsec::ols {

namespace {

std::vector<std::string> default_names(Eigen::Index k) {
    std::vector<std::string> out;
    for (Eigen::Index j = 0; j < k; ++j) out.push_back(fmt::format("x{}", j));
    return out;
}

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> checked_qr(const Eigen::VectorXd& y,
                                                       const Eigen::MatrixXd& X,
                                                       const std::vector<std::string>& names) {
    if (y.size() != X.rows()) {
        throw std::invalid_argument(
            fmt::format("response has {} rows, design has {}", y.size(), X.rows()));
    }
    if (X.rows() <= X.cols()) {
        throw NumericError(fmt::format("regression needs T > k (T = {}, k = {})", X.rows(), X.cols()));
    }
    if (!y.allFinite() || !X.allFinite()) throw NumericError("regression data contain NaN or Inf");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    // A column that is numerically zero or a combination of others falls
    // beyond the detected rank in the pivot order.
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    if (rank < X.cols()) {
        std::vector<std::string> bad;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index j = rank; j < X.cols(); ++j) bad.push_back(names[perm(j)]);
        throw NumericError(fmt::format("design matrix is rank deficient (rank {} of {}); collinear: {}",
                                       rank, X.cols(), fmt::join(bad, ", ")));
    }
    return qr;
}

}  // namespace

std::size_t OlsFit::index_of(std::string_view name) const {
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (names[j] == name) return j;
    }
    throw std::out_of_range(fmt::format("no regressor named '{}'", name));
}

double aic(double ssr, std::size_t nobs, std::size_t n_params) {
    const auto t = static_cast<double>(nobs);
    return t * std::log(ssr / t) + 2.0 * static_cast<double>(n_params);
}

double log_likelihood(double ssr, std::size_t nobs) {
    const auto t = static_cast<double>(nobs);
    return -0.5 * t * (std::log(2.0 * std::numbers::pi) + std::log(ssr / t) + 1.0);
}

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, std::vector<std::string> names,
           bool has_intercept) {
    if (names.empty()) names = default_names(X.cols());
    if (static_cast<Eigen::Index>(names.size()) != X.cols()) {
        throw std::invalid_argument(
            fmt::format("{} names for {} design columns", names.size(), X.cols()));
    }
    const auto qr = checked_qr(y, X, names);

    OlsFit fit;
    fit.names = std::move(names);
    fit.nobs = static_cast<std::size_t>(X.rows());
    fit.n_params = static_cast<std::size_t>(X.cols());
    fit.has_intercept = has_intercept;
    fit.coefficients = qr.solve(y);
    fit.fitted = X * fit.coefficients;
    fit.residuals = y - fit.fitted;
    fit.ssr = fit.residuals.squaredNorm();
    const auto t = static_cast<double>(fit.nobs);
    const auto k = static_cast<double>(fit.n_params);
    fit.sigma2 = fit.ssr / (t - k);

    // (X'X)^-1 = P R^-1 R^-T P'.
    const Eigen::Index kk = X.cols();
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(kk, kk).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(kk, kk));
    const Eigen::MatrixXd xtx_inv_perm = r_inv * r_inv.transpose();
    const auto& perm = qr.colsPermutation();
    fit.covariance = fit.sigma2 * (perm * xtx_inv_perm * perm.transpose());

    fit.std_errors = fit.covariance.diagonal().cwiseSqrt();
    fit.t_stats = fit.coefficients.cwiseQuotient(fit.std_errors);
    fit.p_values.resize(kk);
    for (Eigen::Index j = 0; j < kk; ++j) {
        fit.p_values(j) = dist::student_t_two_sided(fit.t_stats(j), t - k);
    }

    const double tss = has_intercept ? (y.array() - y.mean()).square().sum() : y.squaredNorm();
    fit.r_squared = tss > 0.0 ? 1.0 - fit.ssr / tss : 0.0;
    const double dof_total = has_intercept ? t - 1.0 : t;
    fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * dof_total / (t - k);
    fit.log_likelihood = log_likelihood(fit.ssr, fit.nobs);
    fit.aic = aic(fit.ssr, fit.nobs, fit.n_params);
    fit.design = X;
    fit.response = y;
    return fit;
}

double ssr_only(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
    const auto qr = checked_qr(y, X, default_names(X.cols()));
    return (y - X * qr.solve(y)).squaredNorm();
}

}  // namespace powsec::ols
