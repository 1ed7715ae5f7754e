#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace snapinfo {

using Timestamp = std::chrono::sys_seconds;
using Day = std::chrono::sys_days;

/// Parses ISO-8601 "YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM)" into UTC.
/// A zone designator is required. Returns nullopt on any syntax error.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Parses "YYYY-MM-DD".
std::optional<Day> parse_day(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(Timestamp t);

/// "YYYY-MM-DD"
std::string format_day(Day d);

inline Day utc_day(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

}  // namespace snapinfo
