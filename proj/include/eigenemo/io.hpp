#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace eigenemo::io {

/// Writes content to a sibling temp file, then renames it over path.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Decimal form with 17 significant digits; parses back to the same double.
std::string format_double(double x);

}  // namespace eigenemo::io
