#include "pointillist/connector.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pointillist/unicode.hpp"

namespace pointillist {

const char* to_string(KindChoice k) {
  switch (k) {
    case KindChoice::Ft: return "ft";
    case KindChoice::Dft: return "dft";
    case KindChoice::Cft: return "cft";
    case KindChoice::Auto: return "auto";
  }
  return "?";
}

std::string PhraseCandidate::utf8() const { return to_utf8(chars); }

CandidateIndex CandidateIndex::build(const GramStore& store, DayIndex from_day, int num_days,
                                     bool with_predecessors) {
  CandidateIndex index;
  for (const Gram& g : store.grams()) {
    if (g.size() != 3) continue;
    if (store.window_total(g, from_day, num_days) <= 0) continue;
    index.leading_[key(g.at(0), g.at(1))].push_back(g);
    if (with_predecessors) index.trailing_[key(g.at(1), g.at(2))].push_back(g);
  }
  for (const auto& [k, v] : index.leading_) index.max_degree_ = std::max(index.max_degree_, v.size());
  return index;
}

std::span<const Gram> CandidateIndex::continuations(char32_t a, char32_t b) const {
  auto it = leading_.find(key(a, b));
  if (it == leading_.end()) return {};
  return it->second;
}

std::span<const Gram> CandidateIndex::predecessors(char32_t b, char32_t c) const {
  auto it = trailing_.find(key(b, c));
  if (it == trailing_.end()) return {};
  return it->second;
}

TrendVectorCache::TrendVectorCache(const GramStore& store, DayIndex from_day, int num_days,
                                   VectorKind kind, double cft_epsilon)
    : store_(store), from_day_(from_day), num_days_(num_days), kind_(kind),
      cft_epsilon_(cft_epsilon) {}

const std::vector<double>& TrendVectorCache::vector_for(const Gram& gram) {
  auto it = vectors_.find(gram);
  if (it != vectors_.end()) return it->second;
  FrequencySeries s = store_.daily_series(gram, from_day_, num_days_);
  TrendVector v = make_vector(kind_, s, cft_epsilon_);
  return vectors_.emplace(gram, std::move(v.values)).first->second;
}

namespace {

double median_of(std::vector<double> v) {
  std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  double hi = *mid;
  double lo = *std::max_element(v.begin(), mid);
  return (lo + hi) / 2.0;
}

}  // namespace

double TrendVectorCache::median_ft(const Gram& gram) {
  auto it = medians_.find(gram);
  if (it != medians_.end()) return it->second;
  FrequencySeries s = store_.daily_series(gram, from_day_, num_days_);
  std::vector<double> vals(s.values.begin(), s.values.end());
  double med = median_of(std::move(vals));
  return medians_.emplace(gram, med).first->second;
}

Gram stem_of(std::span<const Gram> trigrams, const GramStore& store, DayIndex from_day,
             int num_days) {
  if (trigrams.empty()) throw std::invalid_argument("stem_of: empty trigram list");
  Gram best = trigrams[0];
  double best_med = 0.0;
  for (std::size_t i = 0; i < trigrams.size(); ++i) {
    FrequencySeries s = store.daily_series(trigrams[i], from_day, num_days);
    std::vector<double> vals(s.values.begin(), s.values.end());
    double med = median_of(std::move(vals));
    if (i == 0 || med < best_med) {  // ties keep the earliest position
      best = trigrams[i];
      best_med = med;
    }
  }
  return best;
}

SimScore sim_score(const Gram& candidate, const Gram& root, const Gram& parent, const Gram& stem,
                   TrendVectorCache& vectors) {
  const auto& cv = vectors.vector_for(candidate);
  SimScore s;
  auto one = [&](const Gram& other, double& out) {
    auto c = cosine(std::span<const double>(cv), std::span<const double>(vectors.vector_for(other)));
    if (!c) {
      out = 0.0;
      ++s.undefined;
    } else {
      out = *c;
    }
  };
  one(root, s.sim_root);
  one(parent, s.sim_parent);
  one(stem, s.sim_stem);
  s.score = std::max(s.sim_root, std::max(s.sim_parent, s.sim_stem));
  return s;
}

double sim_path(std::span<const Gram> trigrams, const Gram& stem, TrendVectorCache& vectors) {
  const auto& sv = vectors.vector_for(stem);
  double product = 1.0;
  for (const Gram& t : trigrams) {
    if (t == stem) continue;  // the stem term contributes exactly 1
    auto c = cosine(std::span<const double>(sv), std::span<const double>(vectors.vector_for(t)));
    double factor = c.value_or(0.0);
    product *= factor < 0.0 ? 0.0 : factor;
  }
  return product;
}

namespace {

struct Search {
  const ConnectorConfig& cfg;
  const GramStore& store;
  const CandidateIndex& index;
  TrendVectorCache& vectors;
  Gram root;
  std::chrono::steady_clock::time_point deadline;
  bool has_deadline = false;

  std::vector<PhraseCandidate> out;
  bool budget_exhausted = false;
  std::uint64_t nodes = 0;
  std::uint64_t undefined = 0;

  bool expired() {
    if (!has_deadline) return false;
    if (std::chrono::steady_clock::now() < deadline) return false;
    budget_exhausted = true;
    return true;
  }

  Gram stem_for(std::span<const Gram> trigrams) {
    Gram best = trigrams[0];
    double best_med = 0.0;
    for (std::size_t i = 0; i < trigrams.size(); ++i) {
      double med = vectors.median_ft(trigrams[i]);
      if (i == 0 || med < best_med) {
        best = trigrams[i];
        best_med = med;
      }
    }
    return best;
  }

  struct Child {
    Gram gram;
    SimScore score;
    bool left;  // bidirectional: candidate extends the phrase leftward
  };

  void trace_step(const std::u32string& chars, const Child& c, const char* disposition) {
    if (!cfg.trace) return;
    *cfg.trace << "trace: phrase=" << to_utf8(chars) << " cand=" << c.gram.utf8()
               << (c.left ? " side=left" : "") << " simRoot=" << c.score.sim_root
               << " simParent=" << c.score.sim_parent << " simStem=" << c.score.sim_stem
               << " simScore=" << c.score.score << ' ' << disposition << '\n';
  }

  void dfs(std::u32string& chars, std::vector<Gram>& trigrams, std::vector<StepScore>& steps) {
    ++nodes;
    Gram stem = stem_for(trigrams);

    std::vector<Child> kept;
    bool at_cap = static_cast<int>(chars.size()) >= cfg.max_phrase_chars;
    if (!at_cap && !expired()) {
      const Gram& parent = trigrams.back();
      std::vector<Child> scored;
      auto consider = [&](std::span<const Gram> cands, bool left) {
        for (const Gram& cand : cands) {
          SimScore s = sim_score(cand, root, left ? trigrams.front() : parent, stem, vectors);
          undefined += static_cast<std::uint64_t>(s.undefined);
          scored.push_back(Child{cand, s, left});
        }
      };
      std::size_t n = chars.size();
      consider(index.continuations(chars[n - 2], chars[n - 1]), false);
      if (cfg.bidirectional) consider(index.predecessors(chars[0], chars[1]), true);

      std::sort(scored.begin(), scored.end(), [](const Child& a, const Child& b) {
        if (a.score.score != b.score.score) return a.score.score > b.score.score;
        if (a.left != b.left) return !a.left;  // right extensions first on ties
        return a.gram < b.gram;
      });
      if (scored.size() > static_cast<std::size_t>(cfg.branch_width))
        scored.resize(static_cast<std::size_t>(cfg.branch_width));
      for (const Child& c : scored) {
        if (c.score.score >= cfg.sim_threshold) {
          trace_step(chars, c, "kept");
          kept.push_back(c);
        } else {
          trace_step(chars, c, "pruned");
        }
      }
    }

    if (kept.empty()) {
      // maximal phrase: none of the surviving children extend it
      PhraseCandidate pc;
      pc.chars = chars;
      pc.trigrams = trigrams;
      pc.stem = stem;
      pc.sim_path = sim_path(trigrams, stem, vectors);
      pc.per_step_scores = steps;
      out.push_back(std::move(pc));
      return;
    }

    for (const Child& c : kept) {
      steps.push_back(StepScore{c.gram, c.score.sim_root, c.score.sim_parent, c.score.sim_stem,
                                c.score.score});
      if (c.left) {
        chars.insert(chars.begin(), c.gram.at(0));
        trigrams.insert(trigrams.begin(), c.gram);
        dfs(chars, trigrams, steps);
        trigrams.erase(trigrams.begin());
        chars.erase(chars.begin());
      } else {
        chars.push_back(c.gram.at(2));
        trigrams.push_back(c.gram);
        dfs(chars, trigrams, steps);
        trigrams.pop_back();
        chars.pop_back();
      }
      steps.pop_back();
    }
  }
};

}  // namespace

ConnectResult connect(const Gram& root, const ConnectorConfig& config, const GramStore& store) {
  if (root.size() != 3) throw std::invalid_argument("root must be a trigram");
  if (config.num_days < 1) throw std::invalid_argument("window must cover at least one day");
  if (config.branch_width < 1) throw std::invalid_argument("branch_width must be >= 1");
  if (config.max_phrase_chars < 3) throw std::invalid_argument("max_phrase_chars must be >= 3");
  if (!(config.sim_threshold > 0.0 && config.sim_threshold <= 1.0))
    throw std::invalid_argument("sim_threshold must be in (0, 1]");

  ConnectResult result;
  FrequencySeries root_series = store.daily_series(root, config.from_day, config.num_days);
  result.root_verdict = validate_root(root_series, config.root_criteria);
  if (!result.root_verdict.valid && !config.force_root)
    throw InvalidRootError("invalid root trigram " + root.utf8() + ": " +
                               to_string(result.root_verdict.reason),
                           result.root_verdict);

  VectorKind kind;
  switch (config.vector_kind) {
    case KindChoice::Ft: kind = VectorKind::Ft; break;
    case KindChoice::Dft: kind = VectorKind::Dft; break;
    case KindChoice::Cft: kind = VectorKind::Cft; break;
    case KindChoice::Auto:
    default:
      kind = select_kind(compute_features(root_series, config.cft_epsilon), config.selector);
      break;
  }
  result.kind_used = kind;

  CandidateIndex index = CandidateIndex::build(store, config.from_day, config.num_days,
                                               config.bidirectional);
  TrendVectorCache vectors(store, config.from_day, config.num_days, kind, config.cft_epsilon);

  Search search{config, store, index, vectors, root, {}, false, {}, false, 0, 0};
  if (config.time_budget.count() > 0) {
    search.deadline = std::chrono::steady_clock::now() + config.time_budget;
    search.has_deadline = true;
  }

  std::u32string chars(root.codepoints().begin(), root.codepoints().end());
  std::vector<Gram> trigrams{root};
  std::vector<StepScore> steps;
  search.dfs(chars, trigrams, steps);

  std::sort(search.out.begin(), search.out.end(), [](const PhraseCandidate& a, const PhraseCandidate& b) {
    if (a.sim_path != b.sim_path) return a.sim_path > b.sim_path;
    return a.chars < b.chars;
  });
  result.phrases = std::move(search.out);
  result.budget_exhausted = search.budget_exhausted;
  result.nodes_expanded = search.nodes;
  result.undefined_similarities = search.undefined;
  return result;
}

std::vector<PhraseCandidate> apply_alternate_policy(std::vector<PhraseCandidate> ranked,
                                                    const ConnectorConfig& config) {
  if (config.alternate_policy == AlternatePolicy::All || ranked.size() <= 1) return ranked;
  std::vector<PhraseCandidate> kept;
  kept.reserve(ranked.size());
  kept.push_back(std::move(ranked.front()));  // the best phrase is the result regardless
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    double floor = config.alternate_policy == AlternatePolicy::Plain
                       ? config.sim_threshold
                       : std::pow(config.sim_threshold,
                                  static_cast<double>(ranked[i].trigrams.size()));
    if (ranked[i].sim_path >= floor) kept.push_back(std::move(ranked[i]));
  }
  return kept;
}

}  // namespace pointillist
