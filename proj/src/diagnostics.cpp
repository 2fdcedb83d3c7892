#include "powsec/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "powsec/distributions.hpp"
#include "powsec/error.hpp"

namespace powsec::diag {

namespace {

constexpr double kLevel = 0.05;

TestResult chi2_result(std::string name, double stat, double df) {
    TestResult r;
    r.name = std::move(name);
    r.statistic = stat;
    r.reference = Reference::chi_squared;
    r.df1 = df;
    r.p_value = dist::chi_squared_sf(stat, df);
    r.reject = r.p_value < kLevel;
    return r;
}

struct SerialAux {
    double ssr_restricted = 0.0;
    double ssr_aux = 0.0;
    double t = 0.0;
    double k = 0.0;
};

SerialAux serial_aux(const ols::OlsFit& fit, std::size_t p, std::string_view test) {
    if (p == 0) throw std::invalid_argument(fmt::format("{}: lag order must be at least 1", test));
    const auto T = static_cast<Eigen::Index>(fit.nobs);
    const auto k = static_cast<Eigen::Index>(fit.n_params);
    const auto lags = static_cast<Eigen::Index>(p);
    if (T - k - lags <= 0) {
        throw NumericError(fmt::format("{}: insufficient observations (T = {}, k = {}, p = {})", test,
                                       T, k, p));
    }
    Eigen::MatrixXd aux(T, k + lags);
    aux.leftCols(k) = fit.design;
    aux.rightCols(lags).setZero();
    for (Eigen::Index j = 1; j <= lags; ++j) {
        aux.col(k + j - 1).tail(T - j) = fit.residuals.head(T - j);
    }
    SerialAux out;
    out.ssr_restricted = fit.residuals.squaredNorm();
    out.ssr_aux = ols::ssr_only(fit.residuals, aux);
    out.t = static_cast<double>(T);
    out.k = static_cast<double>(k);
    return out;
}

}  // namespace

std::string TestResult::distribution() const {
    if (reference == Reference::chi_squared) return fmt::format("chi2({})", df1);
    return fmt::format("F({}, {})", df1, df2);
}

TestResult breusch_godfrey(const ols::OlsFit& fit, std::size_t p) {
    const SerialAux a = serial_aux(fit, p, "breusch_godfrey");
    if (!(a.ssr_restricted > 0.0)) throw NumericError("breusch_godfrey: residuals are all zero");
    // Residuals are orthogonal to X, so u'u is the auxiliary total sum of squares.
    const double r2 = 1.0 - a.ssr_aux / a.ssr_restricted;
    const auto pd = static_cast<double>(p);
    return chi2_result("Breusch-Godfrey LM", (a.t - pd) * r2, pd);
}

TestResult durbin_alternative(const ols::OlsFit& fit, std::size_t p) {
    const SerialAux a = serial_aux(fit, p, "durbin_alternative");
    const auto pd = static_cast<double>(p);
    const double df2 = a.t - a.k - pd;
    if (!(a.ssr_aux > 0.0)) throw NumericError("durbin_alternative: auxiliary regression fits exactly");
    TestResult r;
    r.name = "Durbin alternative";
    r.statistic = ((a.ssr_restricted - a.ssr_aux) / pd) / (a.ssr_aux / df2);
    r.reference = Reference::f;
    r.df1 = pd;
    r.df2 = df2;
    r.p_value = dist::f_sf(r.statistic, pd, df2);
    r.reject = r.p_value < kLevel;
    return r;
}

TestResult breusch_pagan(const ols::OlsFit& fit) {
    const auto T = static_cast<double>(fit.nobs);
    const double s2 = fit.ssr / T;
    if (!(s2 > 0.0)) throw NumericError("breusch_pagan: zero residual variance");
    const Eigen::VectorXd g = fit.residuals.array().square() / s2;
    Eigen::MatrixXd aux(g.size(), 2);
    aux.col(0).setOnes();
    aux.col(1) = fit.fitted;
    const double ssr = ols::ssr_only(g, aux);
    const double tss = (g.array() - g.mean()).square().sum();
    return chi2_result("Breusch-Pagan", 0.5 * (tss - ssr), 1.0);
}

TestResult jarque_bera(const Eigen::VectorXd& residuals) {
    const auto n = residuals.size();
    if (n < 8) throw std::invalid_argument(fmt::format("jarque_bera needs T >= 8, got {}", n));
    const Eigen::ArrayXd d = residuals.array() - residuals.mean();
    const double m2 = d.square().mean();
    if (!(m2 > 0.0)) throw NumericError("jarque_bera: residuals are constant");
    const double skew = d.cube().mean() / std::pow(m2, 1.5);
    const double kurt = d.square().square().mean() / (m2 * m2);
    const double jb =
        static_cast<double>(n) / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
    return chi2_result("Jarque-Bera", jb, 2.0);
}

Eigen::VectorXd recursive_residuals(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
    const Eigen::Index T = X.rows();
    const Eigen::Index k = X.cols();
    if (y.size() != T) throw std::invalid_argument("recursive_residuals: y and X differ in length");
    if (k == 0 || T < k + 1) {
        throw std::invalid_argument(
            fmt::format("recursive_residuals needs T >= k + 1 (T = {}, k = {})", T, k));
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(X.topRows(k));
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) {
        throw NumericError(fmt::format(
            "recursive_residuals: singular recursive update at t = {} (first {} rows are collinear)",
            k, k));
    }
    // Exact start from the first k rows, then Sherman-Morrison updates.
    const Eigen::MatrixXd xk_inv = lu.inverse();
    Eigen::MatrixXd P = xk_inv * xk_inv.transpose();
    Eigen::VectorXd b = xk_inv * y.head(k);
    Eigen::VectorXd w(T - k);
    for (Eigen::Index t = k; t < T; ++t) {
        const Eigen::VectorXd x = X.row(t).transpose();
        const Eigen::VectorXd px = P * x;
        const double f = 1.0 + x.dot(px);
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw NumericError(
                fmt::format("recursive_residuals: singular recursive update at t = {}", t + 1));
        }
        const double e = y(t) - x.dot(b);
        w(t - k) = e / std::sqrt(f);
        b += px * (e / f);
        P -= (px * px.transpose()) / f;
    }
    return w;
}

CusumResult cusum(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, double boundary) {
    const Eigen::VectorXd w = recursive_residuals(y, X);
    const auto k = static_cast<std::size_t>(X.cols());
    const auto m = static_cast<std::size_t>(w.size());
    const double root = std::sqrt(static_cast<double>(m));
    CusumResult out;
    out.sigma = std::sqrt(w.squaredNorm() / static_cast<double>(m));
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        sum += w(static_cast<Eigen::Index>(j));
        const std::size_t t = k + 1 + j;
        const double value = out.sigma > 0.0 ? sum / out.sigma : 0.0;
        const double band = boundary * (root + 2.0 * static_cast<double>(j + 1) / root);
        out.t.push_back(t);
        out.path.push_back(value);
        out.bound.push_back(band);
        if (std::abs(value) > band) out.crossings.push_back(t);
    }
    out.stable = out.crossings.empty();
    return out;
}

DiagnosticsReport run_diagnostics(const ols::OlsFit& fit, const DiagnosticsOptions& options) {
    DiagnosticsReport report;
    auto attempt = [&](std::string_view name, auto&& fn) {
        try {
            fn();
        } catch (const NumericError& e) {
            report.skipped.push_back(fmt::format("{}: {}", name, e.what()));
        } catch (const std::invalid_argument& e) {
            report.skipped.push_back(fmt::format("{}: {}", name, e.what()));
        }
    };
    attempt("breusch_godfrey",
            [&] { report.tests.push_back(breusch_godfrey(fit, options.serial_lags)); });
    attempt("durbin_alternative",
            [&] { report.tests.push_back(durbin_alternative(fit, options.serial_lags)); });
    attempt("breusch_pagan", [&] { report.tests.push_back(breusch_pagan(fit)); });
    attempt("jarque_bera", [&] { report.tests.push_back(jarque_bera(fit.residuals)); });
    attempt("cusum", [&] { report.cusum = cusum(fit.response, fit.design); });
    return report;
}

}  // namespace powsec::diag
