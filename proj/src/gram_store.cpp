#include "pointillist/gram_store.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

namespace pointillist {

void GramStore::require_sealed() const {
  if (!sealed_) throw std::logic_error("gram store must be sealed before queries");
}

void GramStore::require_open() const {
  if (sealed_) throw std::logic_error("gram store is sealed");
}

void GramStore::record(const Gram& gram, HourIndex hour, std::int64_t delta) {
  require_open();
  if (delta < 1) throw std::invalid_argument("record delta must be >= 1");
  open_[gram][hour] += delta;
}

void GramStore::merge(GramStore&& other) {
  require_open();
  other.require_open();
  for (auto& [gram, hours] : other.open_) {
    auto& mine = open_[gram];
    for (auto& [h, c] : hours) mine[h] += c;
  }
  other.open_.clear();
}

void GramStore::seal() {
  require_open();
  entries_.reserve(open_.size());
  order_.reserve(open_.size());
  for (auto& [gram, hours] : open_) {
    SealedEntry e;
    e.hours.assign(hours.begin(), hours.end());
    std::sort(e.hours.begin(), e.hours.end());
    // peak single-day count
    std::int64_t day_sum = 0, peak = 0;
    DayIndex cur_day = 0;
    bool have_day = false;
    for (auto& [h, c] : e.hours) {
      DayIndex d = day_of_hour(h);
      if (!have_day || d != cur_day) {
        peak = std::max(peak, day_sum);
        day_sum = 0;
        cur_day = d;
        have_day = true;
      }
      day_sum += c;
    }
    e.peak_daily = std::max(peak, day_sum);
    order_.push_back(gram);
    entries_.emplace(gram, std::move(e));
  }
  open_.clear();
  std::sort(order_.begin(), order_.end());
  sealed_ = true;
}

FrequencySeries GramStore::daily_series(const Gram& gram, DayIndex start_day, int num_days) const {
  require_sealed();
  if (num_days < 1) throw std::invalid_argument("num_days must be >= 1");
  FrequencySeries s;
  s.gram = gram;
  s.start_day = start_day;
  s.values.assign(static_cast<std::size_t>(num_days), 0);
  auto it = entries_.find(gram);
  if (it == entries_.end()) return s;
  const auto& hours = it->second.hours;
  HourIndex lo = first_hour_of_day(start_day);
  HourIndex hi = first_hour_of_day(start_day + num_days);
  auto b = std::lower_bound(hours.begin(), hours.end(), lo,
                            [](const auto& p, HourIndex h) { return p.first < h; });
  for (; b != hours.end() && b->first < hi; ++b)
    s.values[static_cast<std::size_t>(day_of_hour(b->first) - start_day)] += b->second;
  return s;
}

std::int64_t GramStore::window_total(const Gram& gram, DayIndex start_day, int num_days) const {
  require_sealed();
  auto it = entries_.find(gram);
  if (it == entries_.end()) return 0;
  const auto& hours = it->second.hours;
  HourIndex lo = first_hour_of_day(start_day);
  HourIndex hi = first_hour_of_day(start_day + num_days);
  auto b = std::lower_bound(hours.begin(), hours.end(), lo,
                            [](const auto& p, HourIndex h) { return p.first < h; });
  std::int64_t total = 0;
  for (; b != hours.end() && b->first < hi; ++b) total += b->second;
  return total;
}

std::int64_t GramStore::peak_daily(const Gram& gram) const {
  require_sealed();
  auto it = entries_.find(gram);
  return it == entries_.end() ? 0 : it->second.peak_daily;
}

const std::vector<Gram>& GramStore::grams() const {
  require_sealed();
  return order_;
}

std::vector<Gram> GramStore::grams_above_peak(std::int64_t min_peak) const {
  require_sealed();
  std::vector<Gram> out;
  for (const Gram& g : order_)
    if (entries_.at(g).peak_daily > min_peak) out.push_back(g);
  return out;
}

std::size_t GramStore::gram_count() const {
  return sealed_ ? entries_.size() : open_.size();
}

void GramStore::save(std::ostream& out, Granularity g) const {
  require_sealed();
  for (const Gram& gram : order_) {
    const auto& hours = entries_.at(gram).hours;
    std::string u = gram.utf8();
    if (g == Granularity::Hour) {
      for (auto& [h, c] : hours)
        out << u << '\t' << format_hour_stamp(h) << '\t' << c << '\n';
    } else {
      // aggregate consecutive hours of the same day
      std::size_t i = 0;
      while (i < hours.size()) {
        DayIndex d = day_of_hour(hours[i].first);
        std::int64_t sum = 0;
        while (i < hours.size() && day_of_hour(hours[i].first) == d) sum += hours[i++].second;
        out << u << '\t' << format_date(d) << '\t' << sum << '\n';
      }
    }
  }
}

void GramStore::save(const std::string& path, Granularity g) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  save(f, g);
  if (!f.good()) throw std::runtime_error("write failed: " + path);
}

GramStore GramStore::load(std::istream& in) {
  GramStore store;
  std::string line;
  std::uint64_t offset = 0;
  auto fail = [&](const std::string& msg) -> StoreFormatError {
    return StoreFormatError(msg + " at byte " + std::to_string(offset), offset);
  };
  while (std::getline(in, line)) {
    std::uint64_t line_bytes = line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) {
      auto t1 = line.find('\t');
      auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
      if (t1 == std::string::npos || t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos)
        throw fail("expected 3 tab-separated fields");
      std::string_view gs(line.data(), t1);
      std::string_view stamp(line.data() + t1 + 1, t2 - t1 - 1);
      std::string_view cs(line.data() + t2 + 1, line.size() - t2 - 1);

      auto gram = Gram::from_utf8(gs);
      if (!gram) throw fail("bad gram field");

      HourIndex hour;
      if (stamp.find('T') != std::string_view::npos) {
        auto h = parse_hour_stamp(stamp);
        if (!h) throw fail("bad hour stamp");
        hour = *h;
      } else {
        auto d = parse_date(stamp);
        if (!d) throw fail("bad date stamp");
        hour = first_hour_of_day(*d);
      }

      std::int64_t count = 0;
      auto [p, ec] = std::from_chars(cs.data(), cs.data() + cs.size(), count);
      if (ec != std::errc() || p != cs.data() + cs.size() || count < 0)
        throw fail("bad count field");
      if (count > 0) store.record(*gram, hour, count);
    }
    offset += line_bytes;
  }
  return store;
}

GramStore GramStore::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return load(f);
}

}  // namespace pointillist
