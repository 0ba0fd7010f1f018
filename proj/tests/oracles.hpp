#pragma once

// Independent oracles for the derived expected values. Everything here is
// deliberately written from the plain formulas (straight loops, separate
// square roots, full sorts) so it shares no code path with the library
// implementation it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pointillist/connector.hpp"
#include "pointillist/gram_store.hpp"
#include "pointillist/timeseries.hpp"
#include "pointillist/unicode.hpp"

namespace oracle {

inline std::optional<double> cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
    na += static_cast<long double>(a[i]) * static_cast<long double>(a[i]);
    nb += static_cast<long double>(b[i]) * static_cast<long double>(b[i]);
  }
  if (na == 0 || nb == 0) return std::nullopt;
  return static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
}

inline std::vector<double> to_doubles(const std::vector<std::int64_t>& v) {
  return std::vector<double>(v.begin(), v.end());
}

inline std::optional<double> flatness(const std::vector<std::int64_t>& counts) {
  std::vector<double> ones(counts.size(), 1.0);
  return cosine(to_doubles(counts), ones);
}

inline std::vector<double> dft(const std::vector<std::int64_t>& v) {
  std::vector<double> out;
  for (std::size_t i = 1; i < v.size(); ++i)
    out.push_back(static_cast<double>(v[i]) - static_cast<double>(v[i - 1]));
  return out;
}

inline std::vector<double> cft(const std::vector<std::int64_t>& v, double eps) {
  std::vector<double> out;
  for (std::size_t i = 1; i < v.size(); ++i)
    out.push_back(std::log10((static_cast<double>(v[i]) + eps) /
                             (static_cast<double>(v[i - 1]) + eps)));
  return out;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// ---- exhaustive Connector reference ----
// Enumerates every threshold-surviving rightward overlap chain from the
// root (no branch-width cut, no budget) and ranks by directly computed
// simPath. Mirrors the contract: stem recomputed per node, simScore =
// max of the three cosines, zero-norm cosines count as 0, phrases capped
// at max_chars characters.

struct OraclePhrase {
  std::u32string chars;
  std::vector<pointillist::Gram> trigrams;
  double sim_path = 0.0;
};

class ExhaustiveConnector {
 public:
  ExhaustiveConnector(const pointillist::GramStore& store, pointillist::DayIndex from_day,
                      int num_days, pointillist::VectorKind kind, double threshold, int max_chars,
                      double cft_epsilon = 1.0)
      : store_(store), from_day_(from_day), num_days_(num_days), kind_(kind),
        threshold_(threshold), max_chars_(max_chars), cft_epsilon_(cft_epsilon) {
    for (const auto& g : store.grams()) {
      if (g.size() != 3) continue;
      std::int64_t total = 0;
      auto s = store.daily_series(g, from_day, num_days);
      for (auto c : s.values) total += c;
      if (total > 0) window_trigrams_.push_back(g);
    }
  }

  std::vector<OraclePhrase> run(const pointillist::Gram& root) {
    results_.clear();
    std::u32string chars(root.codepoints().begin(), root.codepoints().end());
    std::vector<pointillist::Gram> chain{root};
    explore(root, chars, chain);
    std::sort(results_.begin(), results_.end(), [](const OraclePhrase& a, const OraclePhrase& b) {
      if (a.sim_path != b.sim_path) return a.sim_path > b.sim_path;
      return a.chars < b.chars;
    });
    return results_;
  }

 private:
  const std::vector<double>& vec(const pointillist::Gram& g) {
    auto it = vecs_.find(g);
    if (it != vecs_.end()) return it->second;
    auto s = store_.daily_series(g, from_day_, num_days_);
    std::vector<double> v;
    switch (kind_) {
      case pointillist::VectorKind::Ft: v = to_doubles(s.values); break;
      case pointillist::VectorKind::Dft: v = dft(s.values); break;
      case pointillist::VectorKind::Cft: v = cft(s.values, cft_epsilon_); break;
    }
    return vecs_.emplace(g, std::move(v)).first->second;
  }

  double med(const pointillist::Gram& g) {
    auto it = meds_.find(g);
    if (it != meds_.end()) return it->second;
    auto s = store_.daily_series(g, from_day_, num_days_);
    double m = median(to_doubles(s.values));
    return meds_.emplace(g, m).first->second;
  }

  pointillist::Gram stem_of_chain(const std::vector<pointillist::Gram>& chain) {
    pointillist::Gram best = chain[0];
    double bm = med(chain[0]);
    for (std::size_t i = 1; i < chain.size(); ++i) {
      double m = med(chain[i]);
      if (m < bm) {
        bm = m;
        best = chain[i];
      }
    }
    return best;
  }

  double path_score(const std::vector<pointillist::Gram>& chain,
                    const pointillist::Gram& stem) {
    double product = 1.0;
    for (const auto& t : chain) {
      if (t == stem) continue;
      auto c = cosine(vec(stem), vec(t));
      double f = c.value_or(0.0);
      product *= f < 0.0 ? 0.0 : f;
    }
    return product;
  }

  void explore(const pointillist::Gram& root, std::u32string& chars,
               std::vector<pointillist::Gram>& chain) {
    pointillist::Gram stem = stem_of_chain(chain);
    std::vector<pointillist::Gram> surviving;
    if (static_cast<int>(chars.size()) < max_chars_) {
      const auto& parent = chain.back();
      for (const auto& cand : window_trigrams_) {
        if (cand.at(0) != chars[chars.size() - 2] || cand.at(1) != chars[chars.size() - 1])
          continue;
        double s_root = cosine(vec(cand), vec(root)).value_or(0.0);
        double s_parent = cosine(vec(cand), vec(parent)).value_or(0.0);
        double s_stem = cosine(vec(cand), vec(stem)).value_or(0.0);
        double score = std::max(s_root, std::max(s_parent, s_stem));
        if (score >= threshold_) surviving.push_back(cand);
      }
    }
    if (surviving.empty()) {
      results_.push_back(OraclePhrase{chars, chain, path_score(chain, stem)});
      return;
    }
    for (const auto& cand : surviving) {
      chars.push_back(cand.at(2));
      chain.push_back(cand);
      explore(root, chars, chain);
      chain.pop_back();
      chars.pop_back();
    }
  }

  const pointillist::GramStore& store_;
  pointillist::DayIndex from_day_;
  int num_days_;
  pointillist::VectorKind kind_;
  double threshold_;
  int max_chars_;
  double cft_epsilon_;
  std::vector<pointillist::Gram> window_trigrams_;
  std::map<pointillist::Gram, std::vector<double>> vecs_;
  std::map<pointillist::Gram, double> meds_;
  std::vector<OraclePhrase> results_;
};

// ---- brute-force trend scan ----

struct OracleHit {
  pointillist::Gram gram;
  pointillist::DayIndex spike_day;
  double rate;
};

inline std::vector<OracleHit> trend_hits(const pointillist::GramStore& store,
                                         pointillist::DayIndex from_day,
                                         pointillist::DayIndex to_day, double threshold,
                                         double eps, bool trailing_avg) {
  std::vector<OracleHit> hits;
  int days = static_cast<int>(to_day - from_day + 1);
  for (const auto& g : store.grams()) {
    auto s = store.daily_series(g, from_day, days);
    std::size_t first = trailing_avg ? 7 : 1;
    for (std::size_t d = first; d < s.values.size(); ++d) {
      double baseline;
      if (trailing_avg) {
        double sum = 0;  // exact for integer counts below 2^53
        for (std::size_t k = d - 7; k < d; ++k) sum += static_cast<double>(s.values[k]);
        baseline = sum / 7.0;
      } else {
        baseline = static_cast<double>(s.values[d - 1]);
      }
      double rate = (static_cast<double>(s.values[d]) + eps) / (baseline + eps);
      if (rate > threshold)
        hits.push_back(OracleHit{g, from_day + static_cast<pointillist::DayIndex>(d), rate});
    }
  }
  return hits;
}

// test-local deterministic rng (xorshift*), distinct from the library's
struct TestRng {
  std::uint64_t s;
  explicit TestRng(std::uint64_t seed) : s(seed ? seed : 0x9E3779B97F4A7C15ull) {}
  std::uint64_t next() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return s * 0x2545F4914F6CDD1Dull;
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Random store with overlap structure: trigrams over a small alphabet so
// continuation chains exist, a few of them sharing scaled copies of one
// burst shape so correlated chains exist too. Returns the store plus the
// trigrams it holds.
struct RandomStore {
  pointillist::GramStore store;
  std::vector<pointillist::Gram> trigrams;
  int days = 0;
};

inline RandomStore random_chain_store(std::uint64_t seed, int max_trigrams = 60) {
  TestRng rng(seed);
  int alphabet = 5 + static_cast<int>(rng.below(5));  // 5..9 characters
  int days = 8 + static_cast<int>(rng.below(5));      // 8..12 days
  int count = 20 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_trigrams - 19)));

  std::vector<std::u32string> keys;
  std::map<std::u32string, std::vector<std::int64_t>> rows;
  auto rand_char = [&] { return static_cast<char32_t>(U'A' + rng.below(static_cast<std::uint64_t>(alphabet))); };

  // one shared burst shape for the correlated subset
  std::vector<std::int64_t> shape;
  for (int d = 0; d < days; ++d) shape.push_back(1 + static_cast<std::int64_t>(rng.below(4)));
  shape[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(days)))] += 60;

  while (static_cast<int>(rows.size()) < count) {
    std::u32string key;
    key += rand_char();
    key += rand_char();
    key += rand_char();
    if (rows.count(key)) continue;
    std::vector<std::int64_t> series;
    if (rng.below(3) == 0) {  // correlated: scaled copy of the shape
      std::int64_t c = 1 + static_cast<std::int64_t>(rng.below(5));
      for (auto x : shape) series.push_back(x * c);
    } else {
      for (int d = 0; d < days; ++d) series.push_back(static_cast<std::int64_t>(rng.below(12)));
    }
    rows.emplace(std::move(key), std::move(series));
  }

  RandomStore out;
  out.days = days;
  pointillist::GramStore store;
  for (const auto& [key, series] : rows) {
    auto g = pointillist::Gram::from_codepoints(
        std::span<const char32_t>(key.data(), key.size()));
    out.trigrams.push_back(g);
    for (int d = 0; d < days; ++d)
      if (series[static_cast<std::size_t>(d)] > 0)
        store.record(g, pointillist::first_hour_of_day(d), series[static_cast<std::size_t>(d)]);
  }
  store.seal();
  out.store = std::move(store);
  return out;
}

// Empty string when the implementation's result list matches the oracle's
// (same phrases, same sim_path values, both correctly ranked); otherwise a
// description of the first mismatch. Near-ties (within tol) may order
// either way between the two implementations.
inline std::string compare_with_exhaustive(const std::vector<pointillist::PhraseCandidate>& got,
                                           const std::vector<OraclePhrase>& want,
                                           double tol = 1e-9) {
  if (got.size() != want.size())
    return "candidate count mismatch: got " + std::to_string(got.size()) + ", oracle " +
           std::to_string(want.size());
  std::map<std::u32string, double> oracle_paths;
  for (const auto& p : want) {
    if (oracle_paths.count(p.chars)) return "oracle produced a duplicate phrase";
    oracle_paths[p.chars] = p.sim_path;
  }
  for (const auto& p : got) {
    auto it = oracle_paths.find(p.chars);
    if (it == oracle_paths.end()) return "phrase not in oracle set: " + pointillist::to_utf8(p.chars);
    if (std::abs(it->second - p.sim_path) > tol)
      return "sim_path mismatch on " + pointillist::to_utf8(p.chars) + ": got " +
             std::to_string(p.sim_path) + ", oracle " + std::to_string(it->second);
  }
  for (std::size_t i = 0; i + 1 < got.size(); ++i) {
    if (got[i].sim_path < got[i + 1].sim_path)
      return "implementation ranking not descending";
    if (want[i].sim_path < want[i + 1].sim_path) return "oracle ranking not descending";
  }
  // rank agreement up to near-ties
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].chars == want[i].chars) continue;
    if (std::abs(got[i].sim_path - want[i].sim_path) > tol)
      return "ordering mismatch at rank " + std::to_string(i) + ": got " +
             pointillist::to_utf8(got[i].chars) + " vs oracle " + pointillist::to_utf8(want[i].chars);
  }
  return {};
}

}  // namespace oracle
