#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>

namespace powsec::cli {

enum class Format { text, csv, json };

struct RunConfig {
    std::string subcommand;
    std::filesystem::path config;
    std::filesystem::path out_dir;
    std::set<Format> formats{Format::text, Format::csv, Format::json};
    std::optional<std::uint64_t> seed;
    int verbosity = 0;
};

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kData = 2,
    kNumeric = 3,
    kRefused = 4,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "POWSEC_OUT_DIR";

/// Each command writes its files under run.out_dir and returns an exit code;
/// domain errors propagate as exceptions.
int cmd_ingest(const RunConfig& run, std::ostream& log);
int cmd_analyze(const RunConfig& run, std::ostream& log);
int cmd_simulate(const RunConfig& run, std::ostream& log);
int cmd_attack(const RunConfig& run, std::ostream& log);

/// Maps the exception currently being handled to an exit code and prints it.
int report_error(std::ostream& err);

/// Full command line: parse, dispatch, map errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace powsec::cli
