#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pointillist/gram.hpp"
#include "pointillist/time_bucket.hpp"

namespace pointillist {

/// Per-gram daily counts over a contiguous day range. Days with no
/// recorded occurrences are zero.
struct FrequencySeries {
  Gram gram;
  DayIndex start_day = 0;
  std::vector<std::int64_t> values;
};

struct StoreFormatError : std::runtime_error {
  StoreFormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what), byte_offset(offset) {}
  std::uint64_t byte_offset;
};

/// Hourly counter store. Lifecycle is "record, seal, then query": an open
/// store accepts record()/merge(), a sealed store is immutable and answers
/// queries. Daily values are derived from the hourly counts.
class GramStore {
 public:
  GramStore() = default;
  GramStore(GramStore&&) = default;
  GramStore& operator=(GramStore&&) = default;

  void record(const Gram& gram, HourIndex hour, std::int64_t delta);

  /// Sums another open store's counts into this one (shard merge).
  void merge(GramStore&& other);

  void seal();
  bool sealed() const { return sealed_; }

  // --- queries (sealed store only) ---

  FrequencySeries daily_series(const Gram& gram, DayIndex start_day, int num_days) const;

  /// Total count of `gram` over [start_day, start_day + num_days).
  std::int64_t window_total(const Gram& gram, DayIndex start_day, int num_days) const;

  /// Largest single-day count of `gram`; 0 for unknown grams.
  std::int64_t peak_daily(const Gram& gram) const;

  /// All stored grams in codepoint order.
  const std::vector<Gram>& grams() const;

  /// Grams whose peak single-day count strictly exceeds `min_peak`.
  std::vector<Gram> grams_above_peak(std::int64_t min_peak) const;

  std::size_t gram_count() const;

  // --- persistence ---
  // Text table, one line per (gram, bucket): gram<TAB>stamp<TAB>count,
  // sorted by gram then stamp. Day stamps are YYYY-MM-DD, hour stamps
  // YYYY-MM-DDTHH; load() tells them apart per line.

  enum class Granularity { Day, Hour };

  void save(std::ostream& out, Granularity g = Granularity::Day) const;
  void save(const std::string& path, Granularity g = Granularity::Day) const;

  static GramStore load(std::istream& in);  // returns an open store
  static GramStore load(const std::string& path);

 private:
  struct SealedEntry {
    std::vector<std::pair<HourIndex, std::int64_t>> hours;  // sorted by hour
    std::int64_t peak_daily = 0;
  };

  void require_sealed() const;
  void require_open() const;

  std::unordered_map<Gram, std::unordered_map<HourIndex, std::int64_t>, GramHash> open_;
  std::unordered_map<Gram, SealedEntry, GramHash> entries_;
  std::vector<Gram> order_;
  bool sealed_ = false;
};

}  // namespace pointillist
