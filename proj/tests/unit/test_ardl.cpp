#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "powsec/ardl.hpp"
#include "powsec/error.hpp"
#include "powsec/ols.hpp"
#include "powsec/pipeline.hpp"
#include "powsec/synthetic.hpp"

using namespace powsec;

namespace {

ts::Dataset cointegrated_data(std::uint64_t seed, std::size_t n = 600) {
    std::mt19937_64 rng(seed);
    synthetic::CointegratedDgp dgp;
    dgp.nobs = n;
    dgp.alpha = 0.2;
    auto p = synthetic::cointegrated(dgp, rng);
    return synthetic::to_dataset({"y", "x"}, {std::move(p.y), std::move(p.x)});
}

ts::Dataset three_columns(std::uint64_t seed, std::size_t n = 300) {
    std::mt19937_64 rng(seed);
    auto a = synthetic::random_walk(n, rng);
    auto b = synthetic::random_walk(n, rng);
    auto e = synthetic::white_noise(n, rng);
    std::vector<double> y(n, 0.0);
    for (std::size_t t = 1; t < n; ++t) y[t] = 0.6 * y[t - 1] + 0.3 * a[t] + 0.1 * b[t - 1] + e[t];
    return synthetic::to_dataset({"y", "a", "b"}, {std::move(y), std::move(a), std::move(b)});
}

}  // namespace

TEST_CASE("design layout and names") {
    const auto data = three_columns(1, 50);
    const ardl::ArdlSpec spec{"y", {"a", "b"}, 3, 3};
    const auto d = ardl::extract(data, spec);
    const auto des = ardl::build_design(d, spec, {2, {1, 0}}, 3);
    CHECK(des.names == std::vector<std::string>{"const", "y(-1)", "y(-2)", "a", "a(-1)", "b"});
    CHECK(des.X.rows() == 47);
    CHECK(des.X(0, 1) == d.y(2));
    CHECK(des.X(0, 4) == d.x[0](2));
    CHECK(des.y(0) == d.y(3));
    CHECK(ardl::ArdlOrders{2, {1, 0}}.label() == "ARDL(2,1,0)");
    CHECK_THROWS_AS((void)ardl::extract(data, {"y", {"nope"}, 1, 1}), ConfigError);
    CHECK_THROWS_AS(ardl::ArdlSpec({"y", {}, 1, 1}).validate(), std::invalid_argument);
}

TEST_CASE("exhaustive order selection is the AIC argmin on the common sample") {
    const auto data = three_columns(2);
    const ardl::ArdlSpec spec{"y", {"a", "b"}, 3, 2};
    const auto sel = ardl::select_orders(data, spec);
    CHECK(sel.exhaustive);
    CHECK(sel.candidates == 3 * 3 * 3);
    const auto d = ardl::extract(data, spec);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 1; g <= 3; ++g) {
        for (std::size_t z1 = 0; z1 <= 2; ++z1) {
            for (std::size_t z2 = 0; z2 <= 2; ++z2) {
                const auto des = ardl::build_design(d, spec, {g, {z1, z2}}, 3);
                const auto fit = ols::ols(des.y, des.X);
                best = std::min(best, fit.aic);
            }
        }
    }
    CHECK(sel.aic == doctest::Approx(best).epsilon(1e-12));
    const auto chosen = ardl::build_design(d, spec, sel.orders, 3);
    CHECK(ols::ols(chosen.y, chosen.X).aic == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("ECM coefficients and delta-method errors") {
    const auto data = three_columns(3);
    const ardl::ArdlSpec spec{"y", {"a", "b"}, 3, 3};
    const auto fit = ardl::fit_ardl(data, spec, {2, {2, 1}});
    const auto ecm = ardl::to_ecm(fit);
    const Eigen::VectorXd phi = fit.phi();
    CHECK(ecm.alpha == doctest::Approx(1.0 - phi.sum()).epsilon(1e-14));
    CHECK(ecm.ect.value == -ecm.alpha);
    CHECK(ecm.theta[0].value == doctest::Approx(fit.beta(0).sum() / ecm.alpha).epsilon(1e-13));
    CHECK(ecm.psi_y[0].value == doctest::Approx(-phi(1)).epsilon(1e-14));
    CHECK(ecm.psi_x[0][0].value == doctest::Approx(fit.beta(0)(0)).epsilon(1e-14));
    CHECK(ecm.psi_x[0][1].value == doctest::Approx(-fit.beta(0)(2)).epsilon(1e-14));

    // Numerical gradient of theta_a with respect to the ARDL coefficients.
    const auto& cov = fit.ols.covariance;
    const Eigen::VectorXd b = fit.ols.coefficients;
    auto theta_a = [&](const Eigen::VectorXd& v) {
        const double alpha = 1.0 - v(1) - v(2);
        return (v(3) + v(4) + v(5)) / alpha;
    };
    Eigen::VectorXd grad(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        Eigen::VectorXd up = b;
        Eigen::VectorXd dn = b;
        up(i) += 1e-6;
        dn(i) -= 1e-6;
        grad(i) = (theta_a(up) - theta_a(dn)) / 2e-6;
    }
    const double se = std::sqrt(grad.dot(cov * grad));
    CHECK(ecm.theta[0].std_error == doctest::Approx(se).epsilon(1e-6));
    CHECK(ecm.alpha_se == doctest::Approx(std::sqrt(cov(1, 1) + cov(2, 2) + 2 * cov(1, 2))).epsilon(1e-12));
}

TEST_CASE("bounds F equals the level-block F of the ECM regression") {
    const auto data = three_columns(4);
    const ardl::ArdlSpec spec{"y", {"a", "b"}, 2, 2};
    const auto fit = ardl::fit_ardl(data, spec, {2, {1, 2}});
    const auto d = ardl::extract(data, spec);
    const auto start = static_cast<Eigen::Index>(fit.start);
    const auto n = static_cast<Eigen::Index>(fit.ols.nobs);
    auto lvl = [&](const Eigen::VectorXd& v, Eigen::Index lag) { return v.segment(start - lag, n); };
    auto dif = [&](const Eigen::VectorXd& v, Eigen::Index lag) {
        return Eigen::VectorXd(lvl(v, lag) - lvl(v, lag + 1));
    };
    // const, dy(-1), da, db, db(-1) | y(-1), a(-1), b(-1)
    Eigen::MatrixXd U(n, 8);
    U.col(0).setOnes();
    U.col(1) = dif(d.y, 1);
    U.col(2) = dif(d.x[0], 0);
    U.col(3) = dif(d.x[1], 0);
    U.col(4) = dif(d.x[1], 1);
    U.col(5) = lvl(d.y, 1);
    U.col(6) = lvl(d.x[0], 1);
    U.col(7) = lvl(d.x[1], 1);
    const Eigen::VectorXd dy = dif(d.y, 0);
    const double ssr_u = ols::ssr_only(dy, U);
    const double ssr_r = ols::ssr_only(dy, U.leftCols(5));
    CHECK(ssr_u == doctest::Approx(fit.ols.ssr).epsilon(1e-10));
    const double f = ((ssr_r - ssr_u) / 3.0) / (ssr_u / static_cast<double>(n - 8));
    CHECK(ardl::bounds_f_statistic(fit) == doctest::Approx(f).epsilon(1e-9));
    const auto bt = ardl::bounds_test(fit);
    CHECK(bt.k == 2);
    CHECK(bt.df1 == 3);
    CHECK(bt.verdict == ardl::classify_bounds(bt.f_statistic, bt.bounds));
}

TEST_CASE("bounds verdict bands") {
    const cv::Bounds b{3.0, 4.0};
    CHECK(ardl::classify_bounds(2.9, b) == ardl::Verdict::no_long_run);
    CHECK(ardl::classify_bounds(3.5, b) == ardl::Verdict::inconclusive);
    CHECK(ardl::classify_bounds(4.1, b) == ardl::Verdict::cointegrated);
}

TEST_CASE("a unit root in the lag polynomial leaves no ECM") {
    const auto data = three_columns(6);
    auto fit = ardl::fit_ardl(data, {"y", {"a", "b"}, 2, 1}, {2, {1, 1}});
    fit.ols.coefficients(1) = 0.25;
    fit.ols.coefficients(2) = 0.75;
    CHECK_THROWS_AS((void)ardl::to_ecm(fit), NumericError);
}

TEST_CASE("day conversions") {
    CHECK(ardl::speed_of_adjustment_days(-0.009) == doctest::Approx(111.111).epsilon(1e-5));
    CHECK(ardl::shock_persistence_days(-0.035) == doctest::Approx(28.5714).epsilon(1e-5));
    CHECK_THROWS_AS((void)ardl::speed_of_adjustment_days(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ardl::speed_of_adjustment_days(1.5), std::invalid_argument);
    const auto iv = ardl::days_interval_from_rounded(0.002);
    CHECK(iv.lo == doctest::Approx(400.0));
    CHECK(iv.hi == doctest::Approx(2000.0 / 3.0));
}

TEST_CASE("pipeline end to end") {
    const auto data = cointegrated_data(8);
    pipeline::ModelSpec m{"m", {"y", {"x"}, 3, 3}, std::nullopt};
    const auto rep = pipeline::run_pipeline(data, m);
    CHECK(rep.pretests.size() == 2);
    CHECK(rep.bounds.verdict == ardl::Verdict::cointegrated);
    REQUIRE(rep.ecm.has_value());
    CHECK(rep.ecm->alpha > 0.0);
    CHECK_FALSE(rep.difference_model.has_value());
    CHECK(rep.diagnostics.cusum.has_value());

    pipeline::ModelSpec fixed{"f", {"y", {"x"}, 3, 3}, ardl::ArdlOrders{2, {0}}};
    CHECK(pipeline::run_pipeline(data, fixed).fit.orders == ardl::ArdlOrders{2, {0}});
}

TEST_CASE("pipeline estimates a difference model without a long-run relation") {
    std::mt19937_64 rng(31);
    for (int attempt = 0; attempt < 20; ++attempt) {
        auto y = synthetic::random_walk(400, rng);
        auto x = synthetic::random_walk(400, rng);
        const auto data = synthetic::to_dataset({"y", "x"}, {y, x});
        const auto rep = pipeline::run_pipeline(data, {"rw", {"y", {"x"}, 2, 2}, std::nullopt});
        if (rep.bounds.verdict != ardl::Verdict::no_long_run) continue;
        REQUIRE(rep.difference_model.has_value());
        CHECK(rep.difference_model->spec.dependent == "D.y");
        return;
    }
    FAIL("no draw without a long-run relation");
}

TEST_CASE("pipeline errors carry the stage") {
    std::mt19937_64 rng(2);
    auto pair = synthetic::cointegrated({}, rng);
    auto z = synthetic::integrated_twice(pair.y.size(), rng);
    const auto data = synthetic::to_dataset({"y", "x", "z"}, {pair.y, pair.x, z});
    try {
        (void)pipeline::run_pipeline(data, {"i2", {"y", {"x", "z"}, 2, 2}, std::nullopt});
        FAIL("expected refusal");
    } catch (const PretestRefusal& e) {
        CHECK(std::string(e.what()).find("[pretest]") == 0);
        CHECK(std::string(e.what()).find("'z'") != std::string::npos);
    }
    pipeline::PipelineOptions off;
    off.pretests = false;
    CHECK_NOTHROW((void)pipeline::run_pipeline(data, {"i2", {"y", {"x", "z"}, 2, 2}, std::nullopt}, off));
    CHECK_THROWS_AS((void)pipeline::run_pipeline(data, {"bad", {"y", {"w"}, 2, 2}, std::nullopt}), ConfigError);
}
