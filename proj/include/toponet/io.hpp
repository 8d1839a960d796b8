#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace toponet::io {

/// Shortest decimal text that round-trips, at most 17 significant digits.
/// Infinity is written as "inf".
std::string format_double(double x);

/// Parses a decimal real or "inf"; throws std::invalid_argument otherwise.
double parse_double(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Derives an independent 64-bit seed for stream `index` of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace toponet::io
