#pragma once

#include <filesystem>
#include <string>

namespace arraycap {

/// Shortest decimal representation that round-trips to the same double.
/// Negative zero prints as 0.
std::string format_number(double value);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace arraycap
