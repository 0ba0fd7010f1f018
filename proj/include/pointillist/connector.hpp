#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pointillist/gram_store.hpp"
#include "pointillist/root_validator.hpp"
#include "pointillist/timeseries.hpp"
#include "pointillist/vector_selector.hpp"

namespace pointillist {

enum class KindChoice { Ft, Dft, Cft, Auto };

const char* to_string(KindChoice k);

/// Which of the ranked maximal phrases beyond the best one get reported.
/// LengthFair compares sim_path against sim_threshold^(trigram count) so a
/// product score over a long chain is not held to a single-step floor;
/// Plain uses the raw threshold; All keeps everything.
enum class AlternatePolicy { All, Plain, LengthFair };

struct ConnectorConfig {
  double sim_threshold = 0.97;
  int branch_width = 5;
  std::chrono::milliseconds time_budget{60000};  // <= 0 disables the budget
  int max_phrase_chars = 32;
  DayIndex from_day = 0;
  int num_days = 0;
  KindChoice vector_kind = KindChoice::Auto;
  double cft_epsilon = 1.0;
  bool bidirectional = false;  // also extend left via trigrams ending in the first bigram
  bool force_root = false;     // search even when root validation fails
  AlternatePolicy alternate_policy = AlternatePolicy::All;
  RootCriteria root_criteria;
  const SelectorModel* selector = nullptr;  // used by KindChoice::Auto; nullptr = heuristic
  std::ostream* trace = nullptr;            // per-step scores, diagnostics only
};

struct InvalidRootError : std::runtime_error {
  InvalidRootError(const std::string& what, RootVerdict v)
      : std::runtime_error(what), verdict(std::move(v)) {}
  RootVerdict verdict;
};

/// One accepted extension: the candidate trigram and its cosines against
/// the root, parent and stem at the time of the step. sim_score is their
/// maximum.
struct StepScore {
  Gram candidate;
  double sim_root = 0.0;
  double sim_parent = 0.0;
  double sim_stem = 0.0;
  double sim_score = 0.0;
};

struct PhraseCandidate {
  std::u32string chars;
  std::vector<Gram> trigrams;  // consecutive trigrams overlap in 2 chars
  Gram stem;
  double sim_path = 0.0;
  std::vector<StepScore> per_step_scores;

  std::string utf8() const;
};

struct ConnectResult {
  std::vector<PhraseCandidate> phrases;  // sim_path descending, ties by chars
  RootVerdict root_verdict;
  VectorKind kind_used = VectorKind::Ft;
  bool budget_exhausted = false;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t undefined_similarities = 0;  // zero-norm cosines ranked as 0
};

/// Index from a trigram's leading (and optionally trailing) bigram to the
/// trigrams carrying it, restricted to trigrams with nonzero frequency in
/// the window. Lists are in codepoint order.
class CandidateIndex {
 public:
  static CandidateIndex build(const GramStore& store, DayIndex from_day, int num_days,
                              bool with_predecessors = false);

  std::span<const Gram> continuations(char32_t a, char32_t b) const;
  std::span<const Gram> predecessors(char32_t b, char32_t c) const;

  std::size_t max_degree() const { return max_degree_; }

 private:
  static std::uint64_t key(char32_t a, char32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }
  std::unordered_map<std::uint64_t, std::vector<Gram>> leading_;
  std::unordered_map<std::uint64_t, std::vector<Gram>> trailing_;
  std::size_t max_degree_ = 0;
};

/// Lazily built trend vectors (and FT medians) for one window+kind.
class TrendVectorCache {
 public:
  TrendVectorCache(const GramStore& store, DayIndex from_day, int num_days, VectorKind kind,
                   double cft_epsilon = 1.0);

  const std::vector<double>& vector_for(const Gram& gram);
  double median_ft(const Gram& gram);
  VectorKind kind() const { return kind_; }

 private:
  const GramStore& store_;
  DayIndex from_day_;
  int num_days_;
  VectorKind kind_;
  double cft_epsilon_;
  std::unordered_map<Gram, std::vector<double>, GramHash> vectors_;
  std::unordered_map<Gram, double, GramHash> medians_;
};

/// The phrase member with the lowest median daily frequency over the
/// window; ties go to the earliest position. It stands in for the whole
/// phrase's frequency.
Gram stem_of(std::span<const Gram> trigrams, const GramStore& store, DayIndex from_day,
             int num_days);

struct SimScore {
  double sim_root = 0.0;
  double sim_parent = 0.0;
  double sim_stem = 0.0;
  double score = 0.0;  // max of the three
  int undefined = 0;   // how many of the three were zero-norm sentinels
};

SimScore sim_score(const Gram& candidate, const Gram& root, const Gram& parent, const Gram& stem,
                   TrendVectorCache& vectors);

/// Product over the phrase's trigrams of cosine(stem, trigram). The stem's
/// own factor is exactly 1; negative or undefined correlations contribute 0
/// so the product stays in [0, 1].
double sim_path(std::span<const Gram> trigrams, const Gram& stem, TrendVectorCache& vectors);

inline double clamped_product(std::span<const double> factors) {
  double p = 1.0;
  for (double f : factors) p *= f < 0.0 ? 0.0 : f;
  return p;
}

/// Scored depth-first search from `root`: candidates at each node are the
/// continuations of the phrase's last bigram, scored against root, parent
/// and stem (stem recomputed after every extension), sorted by score with
/// codepoint tie-break, cut to branch_width, pruned below sim_threshold.
/// Every node with no surviving child becomes a ranked PhraseCandidate.
ConnectResult connect(const Gram& root, const ConnectorConfig& config, const GramStore& store);

/// Presentation filter: the best phrase always stays; alternates stay per
/// the configured policy.
std::vector<PhraseCandidate> apply_alternate_policy(std::vector<PhraseCandidate> ranked,
                                                    const ConnectorConfig& config);

}  // namespace pointillist
