#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace volspill::csv {

/// Shortest round-trip decimal representation.
std::string format_double(double x);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

double parse_double(std::string_view field);

/// Opens `path` for writing, creating parent directories. Throws InputError on failure.
std::ofstream open_for_write(const std::filesystem::path& path);

} // namespace volspill::csv
