#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pointillist/connector.hpp"
#include "pointillist/gram_store.hpp"

namespace pointillist {

enum class BaselineMode { PrevDay, TrailingAvg };

const char* to_string(BaselineMode m);

/// A (gram, date) whose epsilon-smoothed change rate exceeded the
/// threshold. The analysis window is 11 days with the spike at index 5
/// (5 days before and 5 after).
struct TrendHit {
  Gram gram;
  DayIndex spike_day = 0;
  double change_rate = 0.0;
  DayIndex window_start = 0;
  static constexpr int kWindowDays = 11;
};

struct TrendScanConfig {
  DayIndex from_day = 0;
  DayIndex to_day = 0;  // inclusive
  double threshold = 100.0;
  double epsilon = 1.0;
  BaselineMode baseline = BaselineMode::PrevDay;
  int threads = 1;
};

/// rate(gram, d) = (FT_d + eps) / (B + eps) with B the previous day's
/// frequency, or the trailing 7-day mean in TrailingAvg mode. Emits one
/// hit per (gram, day) with rate > threshold, ordered by gram then date.
/// The range must cover >= 2 days (>= 8 for TrailingAvg).
std::vector<TrendHit> scan(const GramStore& store, const TrendScanConfig& config);

struct TrendPhraseResult {
  TrendHit hit;
  bool connected = false;
  RootVerdict verdict;  // populated either way; explains skips
  std::vector<PhraseCandidate> phrases;
};

/// Runs connect() on each hit over its 11-day window. Hits whose gram
/// fails root validation in that window are recorded as skips, never
/// fatal. Order follows the input hits regardless of thread count.
std::vector<TrendPhraseResult> trends_to_phrases(std::span<const TrendHit> hits,
                                                 const GramStore& store,
                                                 const ConnectorConfig& base_config,
                                                 int threads = 1);

}  // namespace pointillist
