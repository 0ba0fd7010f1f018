#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pointillist {

// Buckets are ordinals since the Unix epoch: hour index = floor(ts/3600),
// day index = floor(hour/24). A fixed timezone offset shifts the boundary.

using HourIndex = std::int64_t;
using DayIndex = std::int64_t;

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

constexpr HourIndex hour_bucket(std::int64_t ts_seconds, int tz_offset_minutes = 0) {
  return floor_div(ts_seconds + static_cast<std::int64_t>(tz_offset_minutes) * 60, 3600);
}

constexpr DayIndex day_of_hour(HourIndex h) { return floor_div(h, 24); }
constexpr HourIndex first_hour_of_day(DayIndex d) { return d * 24; }

/// Parses "YYYY-MM-DD" into a day index; nullopt on malformed or
/// non-existent dates.
std::optional<DayIndex> parse_date(std::string_view s);

/// Parses "YYYY-MM-DDTHH" into an hour index.
std::optional<HourIndex> parse_hour_stamp(std::string_view s);

std::string format_date(DayIndex day);
std::string format_hour_stamp(HourIndex hour);

}  // namespace pointillist
