#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text utilities shared by the line-oriented parsers.
namespace sarplan::text {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_ws(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view s); // handles \r\n
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

// Whole-token parse; nullopt on trailing garbage or non-finite result.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Shortest representation that round-trips exactly.
std::string format_double(double v);
// Fixed decimals, for human-facing output only.
std::string format_fixed(double v, int decimals);

} // namespace sarplan::text
