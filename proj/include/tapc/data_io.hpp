#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tapc/ci_tests.hpp"

namespace tapc {

/// Rectangular numeric CSV; rows are time points in file order. A first
/// row with any non-numeric cell is taken as the header. Lines starting
/// with '#' and blank lines are skipped. Errors name the source, line and
/// column (1-based) and are thrown as ConfigError.
DataMatrix parse_csv(std::string_view text, std::string_view source = "<input>");
DataMatrix ingest_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place, so a
/// reader never sees a partial file.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace tapc
