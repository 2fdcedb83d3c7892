#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "powsec/critical_values.hpp"
#include "powsec/error.hpp"
#include "powsec/parallel.hpp"
#include "powsec/synthetic.hpp"
#include "powsec/unit_root.hpp"

using namespace powsec;
using cv::Deterministic;

namespace {

std::vector<double> affine(const std::vector<double>& y, double a, double b) {
    std::vector<double> out(y.size());
    std::transform(y.begin(), y.end(), out.begin(), [&](double v) { return a * v + b; });
    return out;
}

double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * v[i] + w * v[i + 1];
}

}  // namespace

TEST_CASE("lag and bandwidth rules") {
    CHECK(ur::default_max_lags(100) == 12);
    CHECK(ur::default_max_lags(500) == 17);
    CHECK(ur::default_bandwidth(100) == 4);
    CHECK(ur::default_bandwidth(500) == 5);
}

TEST_CASE("critical values interpolate in 1/T between buckets") {
    const auto a = cv::unit_root_critical_values(cv::UnitRootTable::adf, Deterministic::constant, 100);
    const auto b = cv::unit_root_critical_values(cv::UnitRootTable::adf, Deterministic::constant, 250);
    const auto mid = cv::unit_root_critical_value(cv::UnitRootTable::adf, Deterministic::constant, 150, 0.05);
    CHECK(a.one < a.five);
    CHECK(a.five < a.ten);
    CHECK(mid <= std::max(a.five, b.five));
    CHECK(mid >= std::min(a.five, b.five));
    CHECK(cv::unit_root_critical_value(cv::UnitRootTable::adf, Deterministic::constant, 100000, 0.05) ==
          doctest::Approx(-2.86).epsilon(0.01));
    CHECK(cv::unit_root_critical_value(cv::UnitRootTable::adf, Deterministic::constant_trend, 100000, 0.05) ==
          doctest::Approx(-3.41).epsilon(0.01));
    CHECK(cv::parse_deterministic("ct") == Deterministic::constant_trend);
    CHECK_THROWS_AS((void)cv::parse_deterministic("trend"), std::invalid_argument);
    const auto k1 = cv::bounds_critical_values(1, 0.05);
    CHECK(k1.lower < k1.upper);
    CHECK_THROWS_AS((void)cv::bounds_critical_values(1, 0.2), NumericError);
}

TEST_CASE("statistics are invariant to affine rescaling") {
    std::mt19937_64 rng(12);
    const auto rw = synthetic::random_walk(300, rng);
    const auto ar = synthetic::ar1(300, 0.8, rng);
    for (const auto* y : {&rw, &ar}) {
        const auto z = affine(*y, 3.7, -12.0);
        for (auto det : {Deterministic::constant, Deterministic::constant_trend}) {
            const auto a0 = ur::adf(*y, det);
            const auto a1 = ur::adf(z, det);
            CHECK(a0.lags == a1.lags);
            CHECK(std::abs(a0.statistic - a1.statistic) < 1e-10);
            CHECK(std::abs(ur::dfgls(*y, det).statistic - ur::dfgls(z, det).statistic) < 1e-10);
            CHECK(std::abs(ur::pp(*y, det).statistic - ur::pp(z, det).statistic) < 1e-10);
        }
    }
}

TEST_CASE("constant and short series are rejected") {
    const std::vector<double> flat(100, 4.2);
    CHECK_THROWS_AS((void)ur::adf(flat), NumericError);
    CHECK_THROWS_AS((void)ur::pp(flat), NumericError);
    const std::vector<double> tiny{1, 2, 3, 2, 1};
    CHECK_THROWS_AS((void)ur::adf(tiny), DataError);
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS((void)ur::classify_integration(synthetic::random_walk(49, rng)), DataError);
}

TEST_CASE("classification reports all three tests") {
    std::mt19937_64 rng(21);
    const auto rep = ur::classify_integration(synthetic::white_noise(400, rng));
    CHECK(rep.order == ur::Integration::I0);
    REQUIRE(rep.level.size() == 3);
    REQUIRE(rep.difference.size() == 3);
    CHECK(rep.level[0].test == "ADF");
    CHECK(rep.level[1].test == "DF-GLS");
    CHECK(rep.level[2].test == "PP");
    const auto i2 = ur::classify_integration(synthetic::integrated_twice(400, rng));
    CHECK(i2.order != ur::Integration::I0);
}

TEST_CASE("shipped 5% critical values match simulated null quantiles at T = 500") {
    constexpr std::size_t kReps = 20000;
    constexpr std::size_t T = 500;
    constexpr double kTol = 0.05;
    struct Case {
        cv::UnitRootTable table;
        Deterministic det;
    };
    for (const Case c : {Case{cv::UnitRootTable::adf, Deterministic::constant},
                         Case{cv::UnitRootTable::adf, Deterministic::constant_trend},
                         Case{cv::UnitRootTable::dfgls, Deterministic::constant},
                         Case{cv::UnitRootTable::dfgls, Deterministic::constant_trend}}) {
        const auto stats = replicate(kReps, 77, [&](std::mt19937_64& rng, std::size_t) {
            const auto y = synthetic::random_walk(T, rng);
            return c.table == cv::UnitRootTable::adf
                       ? ur::adf(y, c.det, 0, ur::LagSelection::fixed).statistic
                       : ur::dfgls(y, c.det, 0, ur::LagSelection::fixed).statistic;
        });
        const double shipped = cv::unit_root_critical_value(c.table, c.det, T - 1, 0.05);
        const double simulated = quantile(stats, 0.05);
        INFO("table ", static_cast<int>(c.table), " det ", cv::to_string(c.det), " shipped ", shipped,
             " simulated ", simulated);
        CHECK(std::abs(shipped - simulated) <= kTol);
    }
}
