#pragma once

// Table output. CSV carries the metadata as leading "# key: value" lines
// (wall_time_s always last), then a header row and one row per grid point in
// %.11e notation. JSON is {metadata, columns, rows} with NaN as null.

#include <filesystem>
#include <string>

#include "magblock/sweep.hpp"

namespace magblock {

enum class OutputFormat { csv, json };

OutputFormat output_format_from_string(std::string_view name);
const char* extension(OutputFormat format) noexcept;

std::string to_csv(const ResultTable& table);
std::string to_json(const ResultTable& table);

/// Writes `table` to `path`. Throws IoError naming the path on failure.
void emit(const ResultTable& table, OutputFormat format, const std::filesystem::path& path);

/// Parses text produced by to_csv. Metadata values are kept as JSON when
/// they parse, as strings otherwise.
ResultTable parse_csv(const std::string& text);
ResultTable read_csv(const std::filesystem::path& path);

}  // namespace magblock
