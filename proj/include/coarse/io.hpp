#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "coarse/graphs.hpp"

namespace coarse {

/// Shortest round-trip decimal form of `x`, locale independent.
std::string format_double(double x);

/// Edge-list format: "n m" on the first line, then m lines "u v" (0-based).
/// Parallel edges repeat lines. Throws std::runtime_error on malformed input.
FiniteGraph read_edge_list(std::istream &in);
FiniteGraph read_edge_list(const std::filesystem::path &path);
void write_edge_list(std::ostream &out, const FiniteGraph &g);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

std::string read_file(const std::filesystem::path &path);

/// "3..10", "4,8,16" or a mix such as "3..5,8". Throws std::invalid_argument.
std::vector<int> parse_size_list(std::string_view text);

} // namespace coarse
