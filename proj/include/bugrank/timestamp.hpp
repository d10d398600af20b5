#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace bugrank {

/// UTC instant with millisecond resolution, as stored in the dump.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses "YYYY-MM-DDTHH:MM:SS[.fff]" (the dump format). Returns nullopt on
/// anything else.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SS.fff".
std::string format_timestamp(Timestamp t);

}  // namespace bugrank
