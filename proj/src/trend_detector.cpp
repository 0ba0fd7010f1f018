#include "pointillist/trend_detector.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace pointillist {

const char* to_string(BaselineMode m) {
  return m == BaselineMode::PrevDay ? "prev" : "avg7";
}

namespace {

void scan_gram(const GramStore& store, const Gram& gram, const TrendScanConfig& cfg,
               int num_days, std::vector<TrendHit>& out) {
  FrequencySeries s = store.daily_series(gram, cfg.from_day, num_days);
  const auto& v = s.values;
  std::size_t first = cfg.baseline == BaselineMode::PrevDay ? 1 : 7;
  for (std::size_t d = first; d < v.size(); ++d) {
    double baseline;
    if (cfg.baseline == BaselineMode::PrevDay) {
      baseline = static_cast<double>(v[d - 1]);
    } else {
      std::int64_t sum = 0;
      for (std::size_t k = d - 7; k < d; ++k) sum += v[k];
      baseline = static_cast<double>(sum) / 7.0;
    }
    double rate = (static_cast<double>(v[d]) + cfg.epsilon) / (baseline + cfg.epsilon);
    if (rate > cfg.threshold) {
      DayIndex spike = cfg.from_day + static_cast<DayIndex>(d);
      out.push_back(TrendHit{gram, spike, rate, spike - 5});
    }
  }
}

}  // namespace

std::vector<TrendHit> scan(const GramStore& store, const TrendScanConfig& cfg) {
  if (!(cfg.epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  std::int64_t span = cfg.to_day - cfg.from_day + 1;
  int min_days = cfg.baseline == BaselineMode::PrevDay ? 2 : 8;
  if (span < min_days)
    throw std::invalid_argument("date range must cover at least " + std::to_string(min_days) +
                                " days for this baseline mode");
  int num_days = static_cast<int>(span);

  const auto& grams = store.grams();
  int threads = std::max(1, cfg.threads);
  if (threads == 1 || grams.size() < 2) {
    std::vector<TrendHit> hits;
    for (const Gram& g : grams) scan_gram(store, g, cfg, num_days, hits);
    return hits;
  }

  std::size_t shards = std::min<std::size_t>(static_cast<std::size_t>(threads), grams.size());
  std::vector<std::vector<TrendHit>> parts(shards);
  std::vector<std::thread> workers;
  workers.reserve(shards);
  for (std::size_t sh = 0; sh < shards; ++sh) {
    workers.emplace_back([&, sh] {
      std::size_t lo = grams.size() * sh / shards;
      std::size_t hi = grams.size() * (sh + 1) / shards;
      for (std::size_t i = lo; i < hi; ++i) scan_gram(store, grams[i], cfg, num_days, parts[sh]);
    });
  }
  for (auto& w : workers) w.join();

  // contiguous shards over the sorted gram list concatenate back into
  // (gram, date) order
  std::vector<TrendHit> hits;
  for (auto& p : parts) hits.insert(hits.end(), p.begin(), p.end());
  return hits;
}

std::vector<TrendPhraseResult> trends_to_phrases(std::span<const TrendHit> hits,
                                                 const GramStore& store,
                                                 const ConnectorConfig& base_config,
                                                 int threads) {
  std::vector<TrendPhraseResult> results(hits.size());
  auto run_one = [&](std::size_t i) {
    const TrendHit& hit = hits[i];
    TrendPhraseResult& r = results[i];
    r.hit = hit;
    ConnectorConfig cfg = base_config;
    cfg.from_day = hit.window_start;
    cfg.num_days = TrendHit::kWindowDays;
    cfg.trace = nullptr;  // per-hit traces would interleave across threads
    FrequencySeries s = store.daily_series(hit.gram, cfg.from_day, cfg.num_days);
    r.verdict = validate_root(s, cfg.root_criteria);
    if (!r.verdict.valid) return;  // recorded skip
    ConnectResult cr = connect(hit.gram, cfg, store);
    r.connected = true;
    r.phrases = apply_alternate_policy(std::move(cr.phrases), cfg);
  };

  int t = std::max(1, threads);
  if (t == 1 || hits.size() < 2) {
    for (std::size_t i = 0; i < hits.size(); ++i) run_one(i);
    return results;
  }
  std::size_t shards = std::min<std::size_t>(static_cast<std::size_t>(t), hits.size());
  std::vector<std::thread> workers;
  workers.reserve(shards);
  for (std::size_t sh = 0; sh < shards; ++sh) {
    workers.emplace_back([&, sh] {
      for (std::size_t i = sh; i < hits.size(); i += shards) run_one(i);
    });
  }
  for (auto& w : workers) w.join();
  return results;
}

}  // namespace pointillist
