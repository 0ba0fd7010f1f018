#include "pointillist/time_bucket.hpp"

#include <chrono>
#include <cstdio>

namespace pointillist {

namespace {

std::optional<DayIndex> ymd_to_day(int y, unsigned m, unsigned d) {
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

std::optional<DayIndex> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto ys = s.substr(0, 4), ms = s.substr(5, 2), ds = s.substr(8, 2);
  if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds)) return std::nullopt;
  int y = std::stoi(std::string(ys));
  unsigned m = static_cast<unsigned>(std::stoi(std::string(ms)));
  unsigned d = static_cast<unsigned>(std::stoi(std::string(ds)));
  return ymd_to_day(y, m, d);
}

std::optional<HourIndex> parse_hour_stamp(std::string_view s) {
  if (s.size() != 13 || s[10] != 'T') return std::nullopt;
  auto hs = s.substr(11, 2);
  if (!all_digits(hs)) return std::nullopt;
  int h = std::stoi(std::string(hs));
  if (h < 0 || h > 23) return std::nullopt;
  auto day = parse_date(s.substr(0, 10));
  if (!day) return std::nullopt;
  return first_hour_of_day(*day) + h;
}

std::string format_date(DayIndex day) {
  std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

std::string format_hour_stamp(HourIndex hour) {
  DayIndex day = day_of_hour(hour);
  int h = static_cast<int>(hour - first_hour_of_day(day));
  char buf[8];
  std::snprintf(buf, sizeof buf, "T%02d", h);
  return format_date(day) + buf;
}

}  // namespace pointillist
