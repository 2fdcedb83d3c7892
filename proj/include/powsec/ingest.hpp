#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "powsec/timeseries.hpp"

namespace powsec::ingest {

enum class FillPolicy { none, forward };

/// One raw input file: a date column and a value column.
struct SourceSpec {
    std::string name;
    std::filesystem::path path;
    std::string date_column = "date";
    std::string value_column = "value";
    std::string date_format = "%Y-%m-%d";
    std::string unit;
    FillPolicy fill = FillPolicy::none;
};

/// Per-pool hash rates (or shares) by date: a date column plus one column per
/// pool. Rows are normalised to shares when `normalise` is set. Every column
/// counts as a participant (n = panel width) for the normalised index.
struct SharePanelSpec {
    std::string name;
    std::filesystem::path path;
    std::string date_column = "date";
    std::string date_format = "%Y-%m-%d";
    bool normalise = true;
};

struct SharePanel {
    std::string name;
    std::vector<ts::Date> dates;
    std::vector<std::vector<double>> shares;  // one vector per date
};

enum class Formula { raw, reward_per_block, competition_intensity, hhi, hhi_normalised };

[[nodiscard]] Formula parse_formula(std::string_view tag);
[[nodiscard]] std::string_view to_string(Formula f);

/// Builds one dataset column from named sources (or earlier outputs).
struct VariableRecipe {
    std::string output;
    Formula formula = Formula::raw;
    std::vector<std::string> inputs;
    bool log = true;
};

/// Loads and date-sorts one source. Duplicate dates are rejected; calendar
/// gaps are filled from the previous observation under FillPolicy::forward
/// and rejected otherwise.
[[nodiscard]] ts::Series load_csv(const SourceSpec& spec);
[[nodiscard]] SharePanel load_share_panel(const SharePanelSpec& spec);

/// USD reward per day divided by blocks per day.
[[nodiscard]] ts::Series reward_per_block(const ts::Series& reward_usd_daily,
                                          const ts::Series& blocks_daily);

/// (n - 1) / n^2, defined for n >= 1.
[[nodiscard]] double competition_intensity(double n_miners);
[[nodiscard]] ts::Series competition_intensity(const ts::Series& n_miners);

/// Sum of squared shares. Shares must be nonnegative and sum to one.
[[nodiscard]] double hhi(std::span<const double> shares);
/// (H - 1/n) / (1 - 1/n); needs n >= 2.
[[nodiscard]] double hhi_normalised(std::span<const double> shares);

/// Equal-share concentration from a miner count: H = 1/n.
[[nodiscard]] ts::Series hhi_equal_shares(const ts::Series& n_miners);
[[nodiscard]] ts::Series hhi_normalised_equal_shares(const ts::Series& n_miners);
[[nodiscard]] ts::Series hhi(const SharePanel& panel, std::string name);
[[nodiscard]] ts::Series hhi_normalised(const SharePanel& panel, std::string name);

struct BuildOptions {
    double log_floor = ts::kDefaultLogFloor;
};

/// Evaluates recipes in dependency order, aligns the outputs on their common
/// dates and applies the log transform to recipes that request it.
[[nodiscard]] ts::Dataset build_dataset(const std::map<std::string, ts::Series>& sources,
                                        const std::map<std::string, SharePanel>& panels,
                                        std::span<const VariableRecipe> recipes,
                                        const BuildOptions& options = {});

/// Wide CSV with a `date` column followed by one column per variable, values
/// in shortest round-trip form so a reread reproduces the doubles exactly.
[[nodiscard]] std::string dataset_csv(const ts::Dataset& d);
/// Reads a file written by dataset_csv (or any wide daily CSV of that shape).
[[nodiscard]] ts::Dataset read_dataset(const std::filesystem::path& path);

}  // namespace powsec::ingest
