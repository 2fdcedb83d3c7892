#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "powsec/distributions.hpp"
#include "powsec/error.hpp"
#include "powsec/ols.hpp"

using namespace powsec;

TEST_CASE("distribution tails at textbook quantiles") {
    CHECK(dist::chi_squared_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(dist::chi_squared_sf(5.991464547107979, 2) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(dist::chi_squared_sf(0.0, 3) == 1.0);
    CHECK(dist::f_sf(3.0, 1e9, 1e9) < 1e-12);
    CHECK(dist::f_sf(4.964602743730711, 1, 10) == doctest::Approx(0.05).epsilon(1e-6));
    for (double t : {0.3, 1.7, 2.9}) {
        for (double d : {5.0, 40.0, 480.0}) {
            CHECK(dist::f_sf(t * t, 1, d) == doctest::Approx(dist::student_t_two_sided(t, d)).epsilon(1e-10));
        }
    }
    CHECK(dist::f_sf(2.0, 2, 1e7) == doctest::Approx(dist::chi_squared_sf(4.0, 2)).epsilon(1e-5));
    CHECK(dist::student_t_two_sided(1.959963984540054, 1e8) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(dist::student_t_two_sided(2.228138851986274, 10) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(dist::normal_cdf(0.0) == 0.5);
    CHECK(dist::normal_cdf(-1.6448536269514722) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK_THROWS_AS((void)dist::chi_squared_sf(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("incomplete gamma and beta identities") {
    for (double a : {0.5, 1.0, 3.5, 20.0}) {
        for (double x : {0.1, 1.0, 5.0, 30.0}) {
            CHECK(dist::regularized_gamma_p(a, x) + dist::regularized_gamma_q(a, x) == doctest::Approx(1.0));
        }
    }
    CHECK(dist::regularized_gamma_p(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
    for (double x : {0.05, 0.3, 0.7, 0.99}) {
        CHECK(dist::regularized_beta(2.0, 3.0, x) + dist::regularized_beta(3.0, 2.0, 1.0 - x) ==
              doctest::Approx(1.0).epsilon(1e-13));
        CHECK(dist::regularized_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-14));
    }
}

TEST_CASE("ols matches the normal equations") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01;
    const Eigen::Index T = 200;
    Eigen::MatrixXd X(T, 3);
    Eigen::VectorXd y(T);
    for (Eigen::Index t = 0; t < T; ++t) {
        X(t, 0) = 1.0;
        X(t, 1) = n01(rng);
        X(t, 2) = n01(rng) + 0.5 * X(t, 1);
        y(t) = 2.0 - X(t, 1) + 0.3 * X(t, 2) + n01(rng);
    }
    const auto fit = ols::ols(y, X, {"const", "a", "b"});
    const Eigen::MatrixXd xtx = X.transpose() * X;
    const Eigen::VectorXd b = xtx.ldlt().solve(X.transpose() * y);
    CHECK((fit.coefficients - b).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::VectorXd u = y - X * b;
    const double s2 = u.squaredNorm() / static_cast<double>(T - 3);
    const Eigen::MatrixXd cov = s2 * xtx.inverse();
    CHECK((fit.covariance - cov).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(fit.ssr == doctest::Approx(u.squaredNorm()).epsilon(1e-12));
    const double tss = (y.array() - y.mean()).square().sum();
    CHECK(fit.r_squared == doctest::Approx(1.0 - u.squaredNorm() / tss).epsilon(1e-12));
    CHECK(fit.coefficient("b") == fit.coefficients(2));
    CHECK(fit.log_likelihood == doctest::Approx(ols::log_likelihood(fit.ssr, T)));
    CHECK(fit.aic == doctest::Approx(ols::aic(fit.ssr, T, 3)));
    CHECK(std::abs(fit.residuals.sum()) < 1e-9);
    CHECK_THROWS_AS((void)fit.coefficient("zzz"), std::out_of_range);
}

TEST_CASE("ols reports collinearity and degenerate samples") {
    Eigen::MatrixXd X(10, 3);
    Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(10, 0, 9);
    X.col(0).setOnes();
    X.col(1) = Eigen::VectorXd::LinSpaced(10, 1, 10);
    X.col(2).setZero();
    try {
        (void)ols::ols(y, X, {"const", "t", "zero"});
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("zero") != std::string::npos);
    }
    X.col(2) = 2.0 * X.col(1);
    CHECK_THROWS_AS((void)ols::ols(y, X), NumericError);
    Eigen::MatrixXd tiny(2, 3);
    tiny.setRandom();
    CHECK_THROWS_AS((void)ols::ols(Eigen::VectorXd::Ones(2), tiny), NumericError);
}
