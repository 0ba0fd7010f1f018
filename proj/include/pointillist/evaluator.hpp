#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace pointillist {

enum class RunVerdict { Match, Correct, Wrong, InvalidRoot };

const char* to_string(RunVerdict v);

/// One Connector run: the root queried and its top result. Runs whose
/// root failed validation carry invalid_root and no result.
struct EvalRun {
  std::string root;                // UTF-8
  std::string result;              // UTF-8 phrase; empty when invalid_root
  bool invalid_root = false;
  std::int64_t peak_frequency = 0; // root's peak single-day count (strata)
};

struct EvalItem {
  EvalRun run;
  RunVerdict verdict = RunVerdict::Wrong;
};

struct EvalReport {
  std::uint64_t valid_roots = 0;
  std::uint64_t lexicon_matches = 0;
  std::uint64_t human_correct_extra = 0;
  std::uint64_t wrong = 0;
  std::uint64_t invalid_roots = 0;
  double lcp = 0.0;  // lexicon_matches / valid_roots
  double up = 0.0;   // (lexicon_matches + human_correct_extra) / valid_roots
  std::vector<EvalItem> ledger;
};

using Lexicon = std::set<std::string>;
using Judgments = std::map<std::string, bool>;

/// Exact lexicon match wins; otherwise a positive human judgment counts
/// toward unconstrained precision only. Phrases are compared by codepoint
/// equality after trimming surrounding whitespace. Throws on an empty
/// denominator (no valid roots).
EvalReport evaluate(std::span<const EvalRun> runs, const Lexicon& lexicon,
                    const Judgments& judgments);

struct Stratum {
  std::int64_t threshold = -1;  // -1: the single total stratum
  EvalReport report;
};

/// Cumulative frequency strata: a run lands in every stratum whose
/// threshold its root's peak single-day frequency strictly exceeds.
/// Thresholds must be strictly decreasing; an empty list yields one total
/// stratum. Strata with no valid roots report zero precision rather than
/// raising.
std::vector<Stratum> stratify(std::span<const EvalRun> runs, const Lexicon& lexicon,
                              const Judgments& judgments, std::span<const std::int64_t> thresholds);

std::string trim_phrase(std::string_view s);

}  // namespace pointillist
