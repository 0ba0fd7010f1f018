#pragma once

// Shared test fixtures: the published daily trigram counts for
// 谷歌开发者大会 (26 Oct .. 8 Nov 2011) and helpers to build stores from
// hand-written daily rows.

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "pointillist/gram.hpp"
#include "pointillist/gram_store.hpp"
#include "pointillist/time_bucket.hpp"

namespace fixtures {

inline constexpr int kGoogleDays = 14;
inline const char* kGoogleStartDate = "2011-10-26";

struct DailyRow {
  const char* gram;  // UTF-8
  std::array<std::int64_t, kGoogleDays> counts;
};

// Row order follows the phrase 谷歌开发者大会 left to right.
inline const std::array<DailyRow, 5> kGoogleRows = {{
    {"谷歌开", {1, 68, 5, 0, 1, 1, 4, 0, 2, 4, 0, 0, 3, 1}},
    {"歌开发", {1, 68, 4, 0, 1, 1, 0, 0, 2, 4, 0, 0, 0, 0}},
    {"开发者", {49, 127, 43, 46, 44, 65, 50, 49, 227, 129, 38, 39, 65, 63}},
    {"发者大", {15, 56, 5, 4, 13, 10, 6, 11, 166, 84, 14, 11, 21, 14}},
    {"者大会", {15, 56, 5, 4, 14, 9, 6, 11, 168, 85, 14, 10, 21, 13}},
}};

inline pointillist::DayIndex google_start_day() {
  return *pointillist::parse_date(kGoogleStartDate);
}

inline pointillist::Gram gram(const char* utf8) {
  return *pointillist::Gram::from_utf8(utf8);
}

// The normative daily count-file form of the table, sorted by gram then
// date, exactly as a hand-written fixture file would look.
inline std::string google_counts_file() {
  struct Line {
    std::string gram;
    std::string date;
    std::int64_t count;
  };
  std::vector<Line> lines;
  auto start = google_start_day();
  for (const auto& row : kGoogleRows)
    for (int d = 0; d < kGoogleDays; ++d)
      lines.push_back({row.gram, pointillist::format_date(start + d),
                       row.counts[static_cast<std::size_t>(d)]});
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.gram != b.gram) return *pointillist::Gram::from_utf8(a.gram) < *pointillist::Gram::from_utf8(b.gram);
    return a.date < b.date;
  });
  std::ostringstream out;
  for (const auto& l : lines) out << l.gram << '\t' << l.date << '\t' << l.count << '\n';
  return out.str();
}

inline pointillist::GramStore google_store() {
  std::istringstream in(google_counts_file());
  auto store = pointillist::GramStore::load(in);
  store.seal();
  return store;
}

// Builds a sealed store from (gram, daily counts) rows starting at
// start_day; counts land on hour 0 of each day.
inline pointillist::GramStore store_from_rows(
    const std::vector<std::pair<std::string, std::vector<std::int64_t>>>& rows,
    pointillist::DayIndex start_day = 0) {
  pointillist::GramStore store;
  for (const auto& [g, counts] : rows) {
    auto gg = pointillist::Gram::from_utf8(g);
    for (std::size_t d = 0; d < counts.size(); ++d)
      if (counts[d] > 0)
        store.record(*gg, pointillist::first_hour_of_day(start_day + static_cast<std::int64_t>(d)),
                     counts[d]);
  }
  store.seal();
  return store;
}

}  // namespace fixtures
