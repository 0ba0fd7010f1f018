#include "pointillist/evaluator.hpp"

#include <stdexcept>

namespace pointillist {

const char* to_string(RunVerdict v) {
  switch (v) {
    case RunVerdict::Match: return "MATCH";
    case RunVerdict::Correct: return "CORRECT";
    case RunVerdict::Wrong: return "WRONG";
    case RunVerdict::InvalidRoot: return "INVALID_ROOT";
  }
  return "?";
}

std::string trim_phrase(std::string_view s) {
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  };
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

namespace {

EvalReport compute_report(std::span<const EvalRun> runs, const Lexicon& lexicon,
                          const Judgments& judgments) {
  EvalReport r;
  r.ledger.reserve(runs.size());
  for (const EvalRun& run : runs) {
    EvalItem item{run, RunVerdict::Wrong};
    if (run.invalid_root) {
      item.verdict = RunVerdict::InvalidRoot;
      ++r.invalid_roots;
    } else {
      ++r.valid_roots;
      std::string phrase = trim_phrase(run.result);
      if (lexicon.count(phrase) > 0) {
        item.verdict = RunVerdict::Match;
        ++r.lexicon_matches;
      } else if (auto it = judgments.find(phrase); it != judgments.end() && it->second) {
        item.verdict = RunVerdict::Correct;
        ++r.human_correct_extra;
      } else {
        item.verdict = RunVerdict::Wrong;
        ++r.wrong;
      }
    }
    r.ledger.push_back(std::move(item));
  }
  if (r.valid_roots > 0) {
    r.lcp = static_cast<double>(r.lexicon_matches) / static_cast<double>(r.valid_roots);
    r.up = static_cast<double>(r.lexicon_matches + r.human_correct_extra) /
           static_cast<double>(r.valid_roots);
  }
  return r;
}

}  // namespace

EvalReport evaluate(std::span<const EvalRun> runs, const Lexicon& lexicon,
                    const Judgments& judgments) {
  EvalReport r = compute_report(runs, lexicon, judgments);
  if (r.valid_roots == 0) throw std::runtime_error("empty denominator: no valid roots");
  return r;
}

std::vector<Stratum> stratify(std::span<const EvalRun> runs, const Lexicon& lexicon,
                              const Judgments& judgments,
                              std::span<const std::int64_t> thresholds) {
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (thresholds[i] >= thresholds[i - 1])
      throw std::invalid_argument("strata thresholds must be strictly decreasing");

  std::vector<Stratum> out;
  if (thresholds.empty()) {
    out.push_back(Stratum{-1, compute_report(runs, lexicon, judgments)});
    return out;
  }
  for (std::int64_t t : thresholds) {
    std::vector<EvalRun> subset;
    for (const EvalRun& run : runs)
      if (run.peak_frequency > t) subset.push_back(run);
    out.push_back(Stratum{t, compute_report(subset, lexicon, judgments)});
  }
  return out;
}

}  // namespace pointillist
