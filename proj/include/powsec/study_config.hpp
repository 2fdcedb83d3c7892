#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "powsec/attack_model.hpp"
#include "powsec/ingest.hpp"
#include "powsec/mining_model.hpp"
#include "powsec/pipeline.hpp"
#include "powsec/synthetic.hpp"

namespace powsec::config {

/// Where analyze gets its data: a dataset CSV or a seeded synthetic draw.
struct DatasetSource {
    std::optional<std::filesystem::path> path;
    /// "cointegrated" or "i2" (cointegrated pair plus an I(2) column "z").
    std::string synthetic_kind;
    synthetic::CointegratedDgp dgp;
    std::optional<std::uint64_t> seed;
};

/// One equilibrium evaluation point.
struct SimulatePoint {
    mining::MinerParams params;
    mining::MarketState market;
};

struct SimulateBlock {
    std::vector<SimulatePoint> points;
    bool free_entry = false;
    mining::FreeEntryOptions free_entry_options;
};

struct AttackCase {
    std::string name;
    mining::MinerParams params;
    mining::MarketState market;
    attack::AttackScenario scenario;
    bool min_deterrence = false;
};

struct StudyConfig {
    std::filesystem::path base_dir;  ///< relative paths resolve against this
    std::vector<ingest::SourceSpec> sources;
    std::vector<ingest::SharePanelSpec> share_panels;
    std::vector<ingest::VariableRecipe> variables;
    double log_floor = ts::kDefaultLogFloor;

    std::optional<DatasetSource> dataset;
    std::vector<pipeline::ModelSpec> models;
    pipeline::PipelineOptions analysis;

    std::optional<SimulateBlock> simulate;
    std::vector<AttackCase> attacks;
    std::optional<std::uint64_t> seed;
};

/// Parses a JSON study description. Throws ConfigError with the JSON path of
/// the offending field.
[[nodiscard]] StudyConfig parse(std::string_view json_text,
                                const std::filesystem::path& base_dir = {});
[[nodiscard]] StudyConfig load(const std::filesystem::path& path);

}  // namespace powsec::config
