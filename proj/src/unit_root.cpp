#include "powsec/unit_root.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "powsec/error.hpp"
#include "powsec/ols.hpp"

namespace powsec::ur {

namespace {

enum class Terms { none, constant, constant_trend };

Terms terms_of(Deterministic det) {
    return det == Deterministic::constant ? Terms::constant : Terms::constant_trend;
}

std::size_t n_deterministic(Terms t) {
    return t == Terms::none ? 0 : (t == Terms::constant ? 1 : 2);
}

void check_input(std::span<const double> y, std::string_view test) {
    for (double v : y) {
        if (!std::isfinite(v)) throw DataError(fmt::format("{}: series contains NaN or Inf", test));
    }
    if (!y.empty()) {
        const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
        if (*lo == *hi) throw NumericError(fmt::format("{}: constant series, regression is degenerate", test));
    }
}

// Rows for dy indices first..n-2 (dy_i = y_{i+1} - y_i), columns
// [deterministics, y_i, dy_{i-1}, ..., dy_{i-lags}].
struct DfRegression {
    Eigen::MatrixXd X;
    Eigen::VectorXd dy;
    std::size_t level_col = 0;
};

DfRegression df_regression(std::span<const double> y, Terms terms, std::size_t lags,
                           std::size_t first) {
    const std::size_t n = y.size();
    const std::size_t det = n_deterministic(terms);
    const auto rows = static_cast<Eigen::Index>(n - 1 - first);
    const auto cols = static_cast<Eigen::Index>(det + 1 + lags);
    DfRegression r;
    r.X.resize(rows, cols);
    r.dy.resize(rows);
    r.level_col = det;
    for (Eigen::Index row = 0; row < rows; ++row) {
        const std::size_t i = first + static_cast<std::size_t>(row);
        r.dy(row) = y[i + 1] - y[i];
        Eigen::Index c = 0;
        if (terms != Terms::none) r.X(row, c++) = 1.0;
        if (terms == Terms::constant_trend) r.X(row, c++) = static_cast<double>(i + 1);
        r.X(row, c++) = y[i];
        for (std::size_t j = 1; j <= lags; ++j) r.X(row, c++) = y[i + 1 - j] - y[i - j];
    }
    return r;
}

// AIC over nested lag prefixes from one QR: with the lag columns last, the
// SSR of the first m columns is the tail sum of squares of Q'y.
std::size_t select_lags(std::span<const double> y, Terms terms, std::size_t max_lags) {
    const DfRegression r = df_regression(y, terms, max_lags, max_lags);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(r.X);
    const Eigen::VectorXd qty = qr.householderQ().adjoint() * r.dy;
    const auto N = static_cast<std::size_t>(r.X.rows());
    const std::size_t base = r.level_col + 1;
    std::size_t best = 0;
    double best_aic = 0.0;
    for (std::size_t p = 0; p <= max_lags; ++p) {
        const auto m = static_cast<Eigen::Index>(base + p);
        const double ssr = qty.tail(qty.size() - m).squaredNorm();
        const double aic = ols::aic(ssr, N, base + p);
        if (p == 0 || aic < best_aic) {
            best = p;
            best_aic = aic;
        }
    }
    return best;
}

struct DfStat {
    double t = 0.0;
    double se = 0.0;
    std::size_t nobs = 0;
    ols::OlsFit fit;
};

DfStat df_fit(std::span<const double> y, Terms terms, std::size_t lags) {
    const DfRegression r = df_regression(y, terms, lags, lags);
    DfStat out;
    out.fit = ols::ols(r.dy, r.X, {}, terms != Terms::none);
    const auto c = static_cast<Eigen::Index>(r.level_col);
    out.t = out.fit.t_stats(c);
    out.se = out.fit.std_errors(c);
    out.nobs = out.fit.nobs;
    return out;
}

std::size_t resolve_lags(std::span<const double> y, Terms terms, std::optional<std::size_t> max_lags,
                         LagSelection selection, std::string_view test) {
    const std::size_t n = y.size();
    const std::size_t cap = max_lags.value_or(default_max_lags(n));
    const std::size_t k = n_deterministic(terms) + 1 + cap;
    // Regression rows n - 1 - cap must exceed the column count with room to spare.
    if (n < cap + k + 6) {
        throw DataError(fmt::format("{}: series of length {} is too short for {} lags", test, n, cap));
    }
    return selection == LagSelection::aic ? select_lags(y, terms, cap) : cap;
}

UnitRootResult make_result(std::string test, Deterministic det, std::size_t lags, std::size_t nobs,
                           double stat, cv::UnitRootTable table) {
    UnitRootResult r;
    r.test = std::move(test);
    r.deterministic = det;
    r.lags = lags;
    r.nobs = nobs;
    r.statistic = stat;
    r.critical = cv::unit_root_critical_values(table, det, nobs);
    r.reject = stat < r.critical.five;
    return r;
}

}  // namespace

std::size_t default_max_lags(std::size_t nobs) {
    return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(nobs) / 100.0, 0.25)));
}

std::size_t default_bandwidth(std::size_t nobs) {
    return static_cast<std::size_t>(
        std::floor(4.0 * std::pow(static_cast<double>(nobs) / 100.0, 2.0 / 9.0)));
}

UnitRootResult adf(std::span<const double> y, Deterministic det, std::optional<std::size_t> max_lags,
                   LagSelection selection) {
    check_input(y, "adf");
    const Terms terms = terms_of(det);
    const std::size_t lags = resolve_lags(y, terms, max_lags, selection, "adf");
    const DfStat s = df_fit(y, terms, lags);
    return make_result("ADF", det, lags, s.nobs, s.t, cv::UnitRootTable::adf);
}

UnitRootResult dfgls(std::span<const double> y, Deterministic det, std::optional<std::size_t> max_lags,
                     LagSelection selection) {
    check_input(y, "dfgls");
    const std::size_t n = y.size();
    if (n < 10) throw DataError(fmt::format("dfgls: series of length {} is too short", n));
    const bool trend = det == Deterministic::constant_trend;
    const double abar = 1.0 - (trend ? 13.5 : 7.0) / static_cast<double>(n);
    const Eigen::Index N = static_cast<Eigen::Index>(n);
    const Eigen::Index kz = trend ? 2 : 1;

    Eigen::MatrixXd z(N, kz);
    for (Eigen::Index t = 0; t < N; ++t) {
        z(t, 0) = 1.0;
        if (trend) z(t, 1) = static_cast<double>(t + 1);
    }
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), N);
    Eigen::VectorXd yq(N);
    Eigen::MatrixXd zq(N, kz);
    yq(0) = yv(0);
    zq.row(0) = z.row(0);
    for (Eigen::Index t = 1; t < N; ++t) {
        yq(t) = yv(t) - abar * yv(t - 1);
        zq.row(t) = z.row(t) - abar * z.row(t - 1);
    }
    const Eigen::VectorXd b = zq.colPivHouseholderQr().solve(yq);
    const Eigen::VectorXd yd = yv - z * b;
    const std::span<const double> detrended(yd.data(), n);

    const std::size_t lags = resolve_lags(detrended, Terms::none, max_lags, selection, "dfgls");
    const DfStat s = df_fit(detrended, Terms::none, lags);
    return make_result("DF-GLS", det, lags, s.nobs, s.t, cv::UnitRootTable::dfgls);
}

UnitRootResult pp(std::span<const double> y, Deterministic det, std::optional<std::size_t> bandwidth) {
    check_input(y, "pp");
    const std::size_t n = y.size();
    if (n < 10) throw DataError(fmt::format("pp: series of length {} is too short", n));
    const std::size_t L = bandwidth.value_or(default_bandwidth(n));
    const DfStat s = df_fit(y, terms_of(det), 0);
    const Eigen::VectorXd& e = s.fit.residuals;
    const auto N = static_cast<double>(e.size());
    if (L >= static_cast<std::size_t>(e.size())) {
        throw DataError(fmt::format("pp: bandwidth {} exceeds the sample", L));
    }

    const double g0 = e.squaredNorm() / N;
    double lr = g0;
    for (std::size_t j = 1; j <= L; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double gj = e.tail(e.size() - jj).dot(e.head(e.size() - jj)) / N;
        lr += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(L + 1)) * gj;
    }
    if (!(lr > 0.0)) throw NumericError("pp: long-run variance estimate is not positive");
    const double lambda = std::sqrt(lr);
    const double s_reg = std::sqrt(s.fit.sigma2);
    const double z = std::sqrt(g0 / lr) * s.t - (lr - g0) / (2.0 * lambda) * (N * s.se / s_reg);
    return make_result("PP", det, L, s.nobs, z, cv::UnitRootTable::adf);
}

std::string_view to_string(Integration i) {
    switch (i) {
        case Integration::I0: return "I0";
        case Integration::I1: return "I1";
        case Integration::I2plus: return "I2plus";
    }
    return "?";
}

IntegrationReport classify_integration(std::span<const double> y, Deterministic det) {
    if (y.size() < 50) {
        throw DataError(fmt::format("classify_integration needs at least 50 observations, got {}", y.size()));
    }
    std::vector<double> dy(y.size() - 1);
    for (std::size_t i = 0; i + 1 < y.size(); ++i) dy[i] = y[i + 1] - y[i];

    IntegrationReport rep;
    rep.level = {adf(y, det), dfgls(y, det), pp(y, det)};
    rep.difference = {adf(dy, det), dfgls(dy, det), pp(dy, det)};
    if (rep.level.front().reject) {
        rep.order = Integration::I0;
    } else {
        rep.order = rep.difference.front().reject ? Integration::I1 : Integration::I2plus;
    }
    return rep;
}

}  // namespace powsec::ur
