#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "powsec/pipeline.hpp"

namespace powsec::report {

/// "***" below 1%, "**" below 5%, "*" below 10%.
[[nodiscard]] std::string stars(double p_value);

/// Obs / Mean / Std. Dev. / Min / Max per variable.
[[nodiscard]] std::string summary_table(const ts::SummaryStats& stats);
/// Variables (rows) by model (columns), "x" where a model includes the variable.
[[nodiscard]] std::string model_matrix(std::span<const pipeline::ModelSpec> models);

[[nodiscard]] std::string to_text(const pipeline::PipelineReport& r);
[[nodiscard]] nlohmann::ordered_json to_json(const pipeline::PipelineReport& r);

/// Long-format CSV tables over several model runs.
[[nodiscard]] std::string coefficients_csv(std::span<const pipeline::PipelineReport> reports);
[[nodiscard]] std::string pretests_csv(std::span<const pipeline::PipelineReport> reports);
[[nodiscard]] std::string bounds_csv(std::span<const pipeline::PipelineReport> reports);
[[nodiscard]] std::string diagnostics_csv(std::span<const pipeline::PipelineReport> reports);
[[nodiscard]] std::string cusum_csv(std::span<const pipeline::PipelineReport> reports);

/// Rounds |alpha| to `decimals` places, as printed in result tables.
[[nodiscard]] double rounded(double v, int decimals);

}  // namespace powsec::report
