#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace powsec::csv {

struct Table {
    std::vector<std::string> header;
    /// Data rows; `line_numbers[i]` is the 1-based file line of `rows[i]`.
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    /// Index of a header column; throws DataError naming the column.
    [[nodiscard]] std::size_t column(std::string_view name) const;
};

/// Comma-separated text with a header row. Blank lines and lines starting
/// with '#' are skipped; fields may be double-quoted.
[[nodiscard]] Table parse(std::string_view text, std::string_view origin = "<memory>");
[[nodiscard]] Table read(const std::filesystem::path& path);

[[nodiscard]] std::vector<std::string> split_line(std::string_view line);

/// Quotes a field when it contains a delimiter, quote, or newline.
[[nodiscard]] std::string escape(std::string_view field);

/// Parses a decimal number; throws DataError with `context` on failure.
[[nodiscard]] double parse_number(std::string_view text, std::string_view context);

/// Writes `content` to `path` through a temporary file and rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace powsec::csv
