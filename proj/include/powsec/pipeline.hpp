#pragma once

#include <optional>
#include <string>
#include <vector>

#include "powsec/ardl.hpp"
#include "powsec/diagnostics.hpp"
#include "powsec/timeseries.hpp"
#include "powsec/unit_root.hpp"

namespace powsec::pipeline {

struct ModelSpec {
    std::string name;
    ardl::ArdlSpec ardl;
    /// Skips AIC selection when set.
    std::optional<ardl::ArdlOrders> orders;
};

struct PipelineOptions {
    ur::Deterministic deterministic = ur::Deterministic::constant;
    double level = 0.05;
    std::size_t serial_lags = 1;
    bool pretests = true;
};

struct VariablePretest {
    std::string name;
    ur::IntegrationReport report;
};

struct PipelineReport {
    std::string model;
    ardl::ArdlSpec spec;
    ts::SummaryStats summary;
    std::vector<VariablePretest> pretests;
    ardl::Selection selection;
    ardl::ArdlFit fit;
    ardl::BoundsResult bounds;
    std::optional<ardl::EcmFit> ecm;
    std::string ecm_error;  ///< set when the ECM could not be formed
    /// Short-run model in first differences, estimated when the bounds test
    /// finds no long-run relationship.
    std::optional<ardl::ArdlFit> difference_model;
    diag::DiagnosticsReport diagnostics;
};

/// Pretests, order selection, fit, bounds test, ECM and diagnostics. Throws
/// PretestRefusal when a variable is I(2) or higher; every other failure is
/// rethrown with the stage name prefixed and the error type preserved.
[[nodiscard]] PipelineReport run_pipeline(const ts::Dataset& data, const ModelSpec& model,
                                          const PipelineOptions& options = {});

}  // namespace powsec::pipeline
