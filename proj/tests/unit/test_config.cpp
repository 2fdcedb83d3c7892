#include <doctest.h>

#include <string>

#include "powsec/error.hpp"
#include "powsec/study_config.hpp"

using namespace powsec;

namespace {

std::string error_of(const std::string& text) {
    try {
        (void)config::parse(text, "/base");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal analyze config") {
    const auto c = config::parse(R"({"dataset": {"path": "data/d.csv"},
        "models": [{"dependent": "y", "regressors": ["x", "w"], "orders": [2, 1, 0]}],
        "analysis": {"deterministic": "ct", "level": 0.1}})",
                                 "/base");
    REQUIRE(c.dataset.has_value());
    CHECK(*c.dataset->path == std::filesystem::path("/base/data/d.csv"));
    REQUIRE(c.models.size() == 1);
    CHECK(c.models[0].name == "y");
    CHECK(c.models[0].ardl.regressors.size() == 2);
    CHECK(c.models[0].orders == ardl::ArdlOrders{2, {1, 0}});
    CHECK(c.analysis.deterministic == cv::Deterministic::constant_trend);
    CHECK(c.analysis.level == 0.1);
}

TEST_CASE("errors name the offending field") {
    CHECK(error_of("{").find("not valid JSON") != std::string::npos);
    CHECK(error_of(R"({"modles": []})").find("modles") != std::string::npos);
    CHECK(error_of(R"({"models": [{"dependent": "y", "regressors": ["x"], "max_lag": 3}]})").find("models[0]") !=
          std::string::npos);
    CHECK(error_of(R"({"models": [{"dependent": "y", "regressors": ["x"], "orders": [1]}]})").find("orders") !=
          std::string::npos);
    CHECK(error_of(R"({"models": [{"regressors": ["x"]}]})").find("dependent") != std::string::npos);
    CHECK(error_of(R"({"analysis": {"deterministic": "none"}})").find("deterministic") != std::string::npos);
    CHECK(error_of(R"({"dataset": {"synthetic": {"kind": "ar"}}})").find("kind") != std::string::npos);
    CHECK(error_of(R"({"sources": [{"name": "a", "path": "a.csv", "fill": "back"}]})").find("fill") !=
          std::string::npos);
}

TEST_CASE("simulate grid is a Cartesian product in fixed key order") {
    const auto c = config::parse(R"({"simulate": {"grid": {"n_miners": [2, 3], "gamma": [0.3, 0.6],
        "c": 1, "q": 10, "delta": 0.1, "expected_price": 100, "reward_btc": 1},
        "points": [{"gamma": 0.5, "n_miners": 4, "expected_price": 1, "reward_btc": 1}],
        "free_entry": true, "n_max": 1000}})");
    REQUIRE(c.simulate.has_value());
    const auto& pts = c.simulate->points;
    REQUIRE(pts.size() == 5);
    CHECK(pts[0].params.gamma == 0.3);
    CHECK(pts[0].market.n_miners == 2);
    CHECK(pts[1].market.n_miners == 3);
    CHECK(pts[2].params.gamma == 0.6);
    CHECK(pts[4].market.n_miners == 4);
    CHECK(c.simulate->free_entry);
    CHECK(c.simulate->free_entry_options.n_max == 1000);
}

TEST_CASE("attack scenarios inherit defaults") {
    const auto c = config::parse(R"({"attack": {"defaults": {"gamma": 0.5, "c": 1, "q": 10, "delta": 0.1,
        "expected_price": 100, "reward_btc": 1, "n_miners": 2, "power_multiple": 2},
        "scenarios": [{"name": "a", "payoff": 5}, {"name": "b", "c": 3, "double_spend_amount": 7, "price_drop": 0.5,
                       "min_deterrence": true}]}})");
    REQUIRE(c.attacks.size() == 2);
    CHECK(c.attacks[0].params.c == 1);
    CHECK(c.attacks[1].params.c == 3);
    CHECK(c.attacks[1].scenario.power_multiple == 2);
    CHECK(*c.attacks[0].scenario.payoff == 5);
    CHECK_FALSE(c.attacks[1].scenario.payoff.has_value());
    CHECK(*c.attacks[1].scenario.double_spend_amount == 7);
    CHECK(c.attacks[1].min_deterrence);
    CHECK(error_of(R"({"attack": {"scenarios": [{"name": "x", "speed": 2}]}})").find("speed") != std::string::npos);
}

TEST_CASE("synthetic dataset block") {
    const auto c = config::parse(R"({"dataset": {"synthetic": {"kind": "i2", "nobs": 900, "alpha": 0.05, "seed": 4}},
        "seed": 10})");
    REQUIRE(c.dataset.has_value());
    CHECK(c.dataset->synthetic_kind == "i2");
    CHECK(c.dataset->dgp.nobs == 900);
    CHECK(c.dataset->dgp.alpha == 0.05);
    CHECK(*c.dataset->seed == 4);
    CHECK(*c.seed == 10);
}

TEST_CASE("load resolves paths against the config file") {
    CHECK_THROWS_AS((void)config::load("/nonexistent/powsec.json"), ConfigError);
    const auto c = config::load(std::filesystem::path(POWSEC_FIXTURE_DIR) / "ingest.json");
    REQUIRE(c.sources.size() == 2);
    CHECK(c.sources[0].path == std::filesystem::path(POWSEC_FIXTURE_DIR) / "sources" / "hashrate.csv");
    CHECK(c.sources[1].fill == ingest::FillPolicy::forward);
    CHECK(c.variables[2].formula == ingest::Formula::hhi);
    CHECK_FALSE(c.variables[2].log);
}
