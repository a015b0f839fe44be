#pragma once

#include <filesystem>
#include <string_view>

#include "hdlrt/matrix.hpp"

namespace hdlrt {

// Rectangular numeric CSV: one observation per line, one variable per
// column. A first line that does not parse as numbers is treated as a
// header and skipped. Blank lines are ignored.
DataMatrix parse_csv_text(std::string_view text);

// Throws IoError when the file cannot be read.
DataMatrix parse_csv(const std::filesystem::path& path);

}  // namespace hdlrt
