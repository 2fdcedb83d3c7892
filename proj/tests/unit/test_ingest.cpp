#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include "powsec/csv.hpp"
#include "powsec/error.hpp"
#include "powsec/ingest.hpp"

using namespace powsec;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = POWSEC_FIXTURE_DIR;

ingest::SourceSpec source(const std::string& file, const std::string& column = "value") {
    ingest::SourceSpec s;
    s.name = file;
    s.path = kFixtures / "sources" / file;
    s.value_column = column;
    return s;
}

}  // namespace

TEST_CASE("csv parsing handles quotes, comments and blank lines") {
    const auto t = csv::parse("a,b\n# note\n\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == "x,y");
    CHECK(t.rows[1][1] == "say \"hi\"");
    CHECK(t.line_numbers[0] == 4);
    CHECK(t.column("b") == 1);
    CHECK_THROWS_AS((void)t.column("c"), DataError);
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::parse_number(" 1.5e3 ", "x") == 1500.0);
    CHECK_THROWS_AS((void)csv::parse_number("1.5x", "x"), DataError);
    CHECK_THROWS_AS((void)csv::parse_number("", "x"), DataError);
}

TEST_CASE("load_csv sorts dates, forward fills gaps, rejects duplicates") {
    auto price = source("price.csv", "close");
    CHECK_THROWS_AS((void)ingest::load_csv(price), DataError);
    price.fill = ingest::FillPolicy::forward;
    const auto s = ingest::load_csv(price);
    CHECK(s.size() == 8);
    CHECK(s[0] == 800.0);
    CHECK(s[2] == 820.0);
    CHECK(s[7] == 870.0);
    CHECK_THROWS_AS((void)ingest::load_csv(source("duplicate.csv")), DataError);
    CHECK_THROWS_AS((void)ingest::load_csv(source("missing.csv")), DataError);
    CHECK_THROWS_AS((void)ingest::load_csv(source("price.csv", "value")), DataError);
}

TEST_CASE("derived variables") {
    CHECK(ingest::competition_intensity(1.0) == 0.0);
    CHECK(ingest::competition_intensity(2.0) == 0.25);
    CHECK_THROWS_AS((void)ingest::competition_intensity(0.5), std::invalid_argument);
    const std::vector<double> shares{0.5, 0.3, 0.2};
    CHECK(ingest::hhi(shares) == doctest::Approx(0.38));
    CHECK(ingest::hhi_normalised(shares) == doctest::Approx((0.38 - 1.0 / 3) / (1 - 1.0 / 3)));
    const std::vector<double> equal(5, 0.2);
    CHECK(std::abs(ingest::hhi_normalised(equal)) < 1e-15);
    const std::vector<double> bad{0.5, 0.6};
    CHECK_THROWS_AS((void)ingest::hhi(bad), std::invalid_argument);

    const ts::Date d0 = ts::parse_date("2014-01-01");
    const ts::Series reward("reward", d0, {3600.0, 7200.0});
    const ts::Series blocks("blocks", d0, {144.0, 144.0});
    const auto rpb = ingest::reward_per_block(reward, blocks);
    CHECK(rpb[0] == 25.0);
    CHECK(rpb[1] == 50.0);
    const ts::Series n("n", d0, {4.0, 10.0});
    CHECK(ingest::hhi_equal_shares(n)[0] == 0.25);
    CHECK(ingest::hhi_normalised_equal_shares(n)[1] == 0.0);
}

TEST_CASE("share panel rows are normalised") {
    ingest::SharePanelSpec spec;
    spec.name = "pools";
    spec.path = kFixtures / "sources" / "pools.csv";
    const auto panel = ingest::load_share_panel(spec);
    REQUIRE(panel.shares.size() == 8);
    CHECK(panel.shares[0][0] == doctest::Approx(0.5));
    const auto h = ingest::hhi(panel, "hhi");
    CHECK(h[0] == doctest::Approx(0.25 + 0.09 + 0.04));
    CHECK(h[4] == doctest::Approx(1.0 / 3));
}

TEST_CASE("build_dataset evaluates recipes and round-trips through CSV") {
    auto price = source("price.csv", "close");
    price.fill = ingest::FillPolicy::forward;
    std::map<std::string, ts::Series> sources{{"hashrate", ingest::load_csv(source("hashrate.csv"))},
                                              {"price", ingest::load_csv(price)}};
    const std::vector<ingest::VariableRecipe> recipes{{"hash", ingest::Formula::raw, {"hashrate"}, true},
                                                      {"price", ingest::Formula::raw, {"price"}, true}};
    const auto d = ingest::build_dataset(sources, {}, recipes);
    CHECK(d.rows() == 8);
    CHECK(d.column("hash")[5] == std::log(0.001));
    CHECK(d.column("price")[0] == std::log(800.0));

    const fs::path tmp = fs::temp_directory_path() / "powsec_unit_dataset.csv";
    csv::write_atomic(tmp, ingest::dataset_csv(d));
    const auto back = ingest::read_dataset(tmp);
    fs::remove(tmp);
    REQUIRE(back.rows() == d.rows());
    for (const auto& name : d.names()) {
        for (std::size_t i = 0; i < d.rows(); ++i) CHECK(back.column(name)[i] == d.column(name)[i]);
    }

    const std::vector<ingest::VariableRecipe> unknown{{"x", ingest::Formula::raw, {"nope"}, true}};
    CHECK_THROWS_AS((void)ingest::build_dataset(sources, {}, unknown), ConfigError);
    CHECK_THROWS_AS((void)ingest::parse_formula("cubic"), ConfigError);
}
