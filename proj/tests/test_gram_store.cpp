#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pointillist/gram_store.hpp"

using namespace pointillist;

namespace {
Gram g(const char* s) { return *Gram::from_utf8(s); }
}

TEST_CASE("record is additive and aggregates into days") {
  GramStore store;
  store.record(g("ABC"), 100, 2);
  store.record(g("ABC"), 100, 3);
  store.record(g("XYZ"), 101, 7);
  store.seal();

  DayIndex day = day_of_hour(100);
  auto s = store.daily_series(g("ABC"), day, 1);
  CHECK(s.values == std::vector<std::int64_t>{5});

  // hours 100 and 101 fall in the same day
  auto x = store.daily_series(g("XYZ"), day, 1);
  CHECK(x.values == std::vector<std::int64_t>{7});

  CHECK_THROWS_AS(store.daily_series(g("ABC"), 0, 0), std::invalid_argument);
}

TEST_CASE("record rejects non-positive deltas and sealed stores reject writes") {
  GramStore store;
  CHECK_THROWS_AS(store.record(g("ABC"), 0, 0), std::invalid_argument);
  store.record(g("ABC"), 0, 1);
  store.seal();
  CHECK_THROWS_AS(store.record(g("ABC"), 0, 1), std::logic_error);
  CHECK_THROWS_AS(store.seal(), std::logic_error);
}

TEST_CASE("daily series fills missing days with zeros and offsets correctly") {
  GramStore store;
  store.record(g("ABC"), first_hour_of_day(10) + 13, 7);
  store.seal();

  auto s = store.daily_series(g("ABC"), 8, 5);
  CHECK(s.values == std::vector<std::int64_t>{0, 0, 7, 0, 0});

  auto unknown = store.daily_series(g("没有的"), 8, 5);
  CHECK(unknown.values == std::vector<std::int64_t>{0, 0, 0, 0, 0});
}

TEST_CASE("Table III fixture loads and answers the published series") {
  auto store = fixtures::google_store();
  auto start = fixtures::google_start_day();
  auto s = store.daily_series(g("发者大"), start, 14);
  CHECK(s.values ==
        std::vector<std::int64_t>{15, 56, 5, 4, 13, 10, 6, 11, 166, 84, 14, 11, 21, 14});

  for (const auto& row : fixtures::kGoogleRows) {
    auto series = store.daily_series(g(row.gram), start, fixtures::kGoogleDays);
    for (int d = 0; d < fixtures::kGoogleDays; ++d)
      CHECK(series.values[static_cast<std::size_t>(d)] == row.counts[static_cast<std::size_t>(d)]);
  }
}

TEST_CASE("save/load round trip preserves every daily answer") {
  oracle::TestRng rng(7);
  GramStore store;
  const char* grams[] = {"AAA", "AAB", "ABB", "中华人", "BB", "C"};
  for (const char* name : grams)
    for (int k = 0; k < 20; ++k)
      store.record(g(name), static_cast<HourIndex>(rng.below(24 * 20)), 1 + static_cast<std::int64_t>(rng.below(5)));
  store.seal();

  for (auto gran : {GramStore::Granularity::Hour, GramStore::Granularity::Day}) {
    std::ostringstream out;
    store.save(out, gran);
    std::istringstream in(out.str());
    auto loaded = GramStore::load(in);
    loaded.seal();
    CHECK(loaded.gram_count() == store.gram_count());
    for (const char* name : grams) {
      auto a = store.daily_series(g(name), 0, 22);
      auto b = loaded.daily_series(g(name), 0, 22);
      CHECK(a.values == b.values);
    }
    // saved bytes are themselves stable across a round trip
    std::ostringstream out2;
    loaded.save(out2, gran);
    CHECK(out.str() == out2.str());
  }
}

TEST_CASE("hourly save keeps hour-level detail, daily save collapses it") {
  GramStore store;
  store.record(g("ABC"), first_hour_of_day(3) + 1, 2);
  store.record(g("ABC"), first_hour_of_day(3) + 9, 3);
  store.seal();

  std::ostringstream hourly, daily;
  store.save(hourly, GramStore::Granularity::Hour);
  store.save(daily, GramStore::Granularity::Day);
  CHECK(hourly.str() == "ABC\t1970-01-04T01\t2\nABC\t1970-01-04T09\t3\n");
  CHECK(daily.str() == "ABC\t1970-01-04\t5\n");
}

TEST_CASE("load of empty input yields an empty store") {
  std::istringstream in("");
  auto store = GramStore::load(in);
  store.seal();
  CHECK(store.gram_count() == 0);
  CHECK(store.grams().empty());
  CHECK(store.grams_above_peak(0).empty());
}

TEST_CASE("load accepts zero counts and rejects corrupt lines with a byte offset") {
  {
    std::istringstream in("ABC\t2011-10-26\t0\n");
    auto store = GramStore::load(in);
    store.seal();
    CHECK(store.gram_count() == 0);
  }
  {
    std::istringstream in("ABC\t2011-10-26\t3\nABC\tnot-a-date\t4\n");
    CHECK_THROWS_AS(GramStore::load(in), StoreFormatError);
  }
  {
    std::istringstream in("ABC\t2011-10-26\t3\nABC\t2011-10-27\t-1\n");
    try {
      GramStore::load(in);
      FAIL("expected StoreFormatError");
    } catch (const StoreFormatError& e) {
      CHECK(e.byte_offset == 17);  // start of the offending line
      CHECK(std::string(e.what()).find("17") != std::string::npos);
    }
  }
}

TEST_CASE("grams_above_peak uses the peak single day strictly") {
  GramStore store;
  // peak day count 99 spread over two hours of one day
  store.record(g("AAA"), first_hour_of_day(5) + 2, 44);
  store.record(g("AAA"), first_hour_of_day(5) + 7, 55);
  // total 120 but never more than 60 in one day
  store.record(g("BBB"), first_hour_of_day(5), 60);
  store.record(g("BBB"), first_hour_of_day(6), 60);
  store.seal();

  CHECK(store.peak_daily(g("AAA")) == 99);
  CHECK(store.peak_daily(g("BBB")) == 60);
  CHECK(store.peak_daily(g("CCC")) == 0);

  auto all = store.grams_above_peak(0);
  CHECK(all.size() == 2);
  CHECK(std::is_sorted(all.begin(), all.end()));

  auto above99 = store.grams_above_peak(99);
  CHECK(above99.empty());  // 99 is excluded by the strict comparison
  auto above59 = store.grams_above_peak(59);
  CHECK(above59.size() == 2);
}

TEST_CASE("merge equals single-threaded counting") {
  GramStore a, b, whole;
  a.record(g("ABC"), 10, 1);
  b.record(g("ABC"), 10, 2);
  b.record(g("BCD"), 11, 4);
  whole.record(g("ABC"), 10, 3);
  whole.record(g("BCD"), 11, 4);
  a.merge(std::move(b));
  a.seal();
  whole.seal();
  std::ostringstream sa, sw;
  a.save(sa, GramStore::Granularity::Hour);
  whole.save(sw, GramStore::Granularity::Hour);
  CHECK(sa.str() == sw.str());
}

TEST_CASE("day/hour consistency holds for random stores") {
  oracle::TestRng rng(99);
  GramStore store;
  std::map<std::pair<std::string, DayIndex>, std::int64_t> expect;
  const char* names[] = {"AAA", "BBB", "ABA"};
  for (int k = 0; k < 500; ++k) {
    const char* name = names[rng.below(3)];
    HourIndex h = static_cast<HourIndex>(rng.below(24 * 10));
    std::int64_t delta = 1 + static_cast<std::int64_t>(rng.below(4));
    store.record(g(name), h, delta);
    expect[{name, day_of_hour(h)}] += delta;
  }
  store.seal();
  for (const char* name : names) {
    auto s = store.daily_series(g(name), 0, 10);
    for (int d = 0; d < 10; ++d) {
      auto it = expect.find({name, d});
      std::int64_t want = it == expect.end() ? 0 : it->second;
      CHECK(s.values[static_cast<std::size_t>(d)] == want);
    }
  }
}
