#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "arraycap/text_io.hpp"

namespace arraycap::detail {

using arraycap::format_number;
using arraycap::write_file_atomically;

/// Strict decimal parse of a whole field; throws ParseError mentioning `context`.
double parse_number(std::string_view field, const std::string& context);

/// Split one CSV record on commas and trim surrounding whitespace.
std::vector<std::string> split_csv(std::string_view line);

/// One data record of a CSV file, with its 1-based line number.
struct CsvRow {
  std::size_t line;
  std::vector<std::string> fields;
};

/// Reads a headered CSV document. Blank lines and lines starting with '#'
/// are skipped. The header must match `expected_header` exactly (after
/// trimming); every data row must carry the same number of fields.
std::vector<CsvRow> read_csv(std::istream& in, const std::vector<std::string>& expected_header,
                             const std::string& what);

}  // namespace arraycap::detail
