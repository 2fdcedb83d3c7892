#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "powsec/diagnostics.hpp"
#include "powsec/distributions.hpp"
#include "powsec/error.hpp"
#include "powsec/ols.hpp"

using namespace powsec;

namespace {

struct Sample {
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
};

Sample regression(std::size_t n, std::uint64_t seed, double ar = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    const auto T = static_cast<Eigen::Index>(n);
    Sample s{Eigen::VectorXd(T), Eigen::MatrixXd(T, 2)};
    double e = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
        s.X(t, 0) = 1.0;
        s.X(t, 1) = n01(rng);
        e = ar * e + n01(rng);
        s.y(t) = 1.0 + 0.5 * s.X(t, 1) + e;
    }
    return s;
}

}  // namespace

TEST_CASE("Breusch-Godfrey against an explicit auxiliary regression") {
    const auto s = regression(120, 3, 0.4);
    const auto fit = ols::ols(s.y, s.X);
    const std::size_t p = 2;
    const auto T = s.y.size();
    Eigen::MatrixXd Z(T, 4);
    Z.leftCols(2) = s.X;
    for (Eigen::Index t = 0; t < T; ++t) {
        Z(t, 2) = t >= 1 ? fit.residuals(t - 1) : 0.0;
        Z(t, 3) = t >= 2 ? fit.residuals(t - 2) : 0.0;
    }
    const auto aux = ols::ols(fit.residuals, Z);
    const double r2 = 1.0 - aux.ssr / fit.residuals.squaredNorm();
    const auto bg = diag::breusch_godfrey(fit, p);
    CHECK(bg.statistic == doctest::Approx(static_cast<double>(T - 2) * r2).epsilon(1e-10));
    CHECK(bg.df1 == 2.0);
    CHECK(bg.p_value == doctest::Approx(dist::chi_squared_sf(bg.statistic, 2)).epsilon(1e-12));
    CHECK(bg.reject);
    CHECK(bg.distribution() == "chi2(2)");

    const auto du = diag::durbin_alternative(fit, p);
    CHECK(du.reference == diag::Reference::f);
    CHECK(du.df2 == static_cast<double>(T - 2 - 2));
    const double f = ((fit.residuals.squaredNorm() - aux.ssr) / 2.0) / (aux.ssr / static_cast<double>(T - 4));
    CHECK(du.statistic == doctest::Approx(f).epsilon(1e-10));
}

TEST_CASE("Breusch-Pagan and Jarque-Bera by formula") {
    const auto s = regression(200, 4);
    const auto fit = ols::ols(s.y, s.X);
    const double n = static_cast<double>(fit.nobs);
    const Eigen::VectorXd g = fit.residuals.array().square() / (fit.ssr / n);
    Eigen::MatrixXd Z(fit.residuals.size(), 2);
    Z.col(0).setOnes();
    Z.col(1) = fit.fitted;
    const auto aux = ols::ols(g, Z);
    const double ess = (aux.fitted.array() - g.mean()).square().sum();
    CHECK(diag::breusch_pagan(fit).statistic == doctest::Approx(ess / 2.0).epsilon(1e-10));

    const Eigen::VectorXd u = fit.residuals.array() - fit.residuals.mean();
    const double m2 = u.array().square().mean();
    const double skew = u.array().cube().mean() / std::pow(m2, 1.5);
    const double kurt = u.array().pow(4).mean() / (m2 * m2);
    const auto jb = diag::jarque_bera(fit.residuals);
    CHECK(jb.statistic == doctest::Approx(n / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0)).epsilon(1e-10));
    CHECK_THROWS_AS((void)diag::jarque_bera(Eigen::VectorXd::Ones(7)), std::invalid_argument);
}

TEST_CASE("recursive residuals match expanding-window refits") {
    const auto s = regression(40, 5);
    const auto w = diag::recursive_residuals(s.y, s.X);
    REQUIRE(w.size() == 38);
    for (Eigen::Index t = 2; t < 40; ++t) {
        const Eigen::MatrixXd Xt = s.X.topRows(t);
        const Eigen::MatrixXd xtx_inv = (Xt.transpose() * Xt).inverse();
        const Eigen::VectorXd b = xtx_inv * Xt.transpose() * s.y.head(t);
        const Eigen::RowVectorXd x = s.X.row(t);
        const double expect = (s.y(t) - x.dot(b)) / std::sqrt(1.0 + (x * xtx_inv * x.transpose())(0, 0));
        CHECK(w(t - 2) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("CUSUM band and stability") {
    const auto s = regression(300, 6);
    const auto c = diag::cusum(s.y, s.X);
    const double k = std::sqrt(298.0);
    CHECK(c.t.front() == 3);
    CHECK(c.t.back() == 300);
    CHECK(c.bound.front() == doctest::Approx(0.948 * (k + 2.0 / k)));
    CHECK(c.bound.back() == doctest::Approx(0.948 * 3.0 * k));
    CHECK(c.stable == c.crossings.empty());

    auto broken = s;
    for (Eigen::Index t = 150; t < 300; ++t) broken.y(t) += 3.0;
    CHECK_FALSE(diag::cusum(broken.y, broken.X).stable);
}

TEST_CASE("diagnostics battery skips what cannot run") {
    const auto s = regression(7, 7);
    const auto fit = ols::ols(s.y, s.X);
    const auto rep = diag::run_diagnostics(fit, {1});
    bool jb_skipped = false;
    for (const auto& sk : rep.skipped) jb_skipped = jb_skipped || sk.rfind("jarque_bera", 0) == 0;
    CHECK(jb_skipped);
    const auto full = diag::run_diagnostics(ols::ols(regression(100, 8).y, regression(100, 8).X), {2});
    CHECK(full.skipped.empty());
    CHECK(full.cusum.has_value());
    CHECK(full.tests.size() == 4);
}
