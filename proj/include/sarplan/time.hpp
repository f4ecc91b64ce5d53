#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace sarplan {

using UtcInstant = std::chrono::sys_time<std::chrono::milliseconds>;

// ISO-8601: YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+HH:MM|-HH:MM]. Offsets are
// applied to yield UTC; a missing designator is read as UTC.
std::optional<UtcInstant> parse_utc(std::string_view text);
// YYYY-MM-DDTHH:MM:SS.fffZ
std::string format_utc(UtcInstant t);

} // namespace sarplan
