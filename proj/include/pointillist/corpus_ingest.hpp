#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pointillist/gram.hpp"
#include "pointillist/gram_store.hpp"

namespace pointillist {

struct Post {
  std::string id;
  std::int64_t ts = 0;  // seconds since epoch, UTC
  std::string text;     // UTF-8
};

/// One aggregated occurrence record: `gram` was seen `count` times in
/// hour bucket `hour`.
struct GramEvent {
  Gram gram;
  HourIndex hour = 0;
  std::int64_t count = 0;
};

enum class InputFormat { Jsonl, Tsv };
enum class EligibleSet { Cjk, All };

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::uint64_t line_number)
      : std::runtime_error(what), line(line_number) {}
  std::uint64_t line;  // 1-based
};

struct ParseConfig {
  InputFormat format = InputFormat::Jsonl;
  bool strict = false;  // abort on the first malformed line
};

struct ParseResult {
  std::vector<Post> posts;
  std::uint64_t rejected = 0;
};

/// Line-delimited records, one Post per well-formed line, in input order.
/// Malformed lines are counted and skipped; in strict mode the first one
/// raises ParseError with its line number.
ParseResult parse_posts(std::istream& in, const ParseConfig& config);

/// Sliding window of n consecutive eligible characters. A character
/// outside the eligible set breaks the window and is never emitted;
/// windows never span a break. Under EligibleSet::Cjk the eligible range
/// is CJK Unified Ideographs (U+4E00..U+9FFF) plus Extension A
/// (U+3400..U+4DBF).
std::vector<Gram> extract_grams(std::string_view text_utf8, int n, EligibleSet eligible);

bool is_eligible_char(char32_t cp, EligibleSet eligible);

struct IngestConfig {
  std::vector<int> ngram_sizes = {3};  // subset of {1,2,3}
  EligibleSet eligible = EligibleSet::Cjk;
  int tz_offset_minutes = 0;
  int threads = 1;
};

/// Counts every window occurrence (repeats within one post included),
/// bucketed by the post's hour. Returns an open store. With threads > 1
/// the posts are sharded, counted independently and merged by summation,
/// which leaves the aggregate identical to a single-threaded run.
GramStore ingest(std::span<const Post> posts, const IngestConfig& config);

struct IngestStats {
  std::uint64_t posts = 0;
  std::uint64_t rejected = 0;
};

/// Streaming parse + ingest over line-delimited input.
GramStore ingest_stream(std::istream& in, const ParseConfig& parse_config,
                        const IngestConfig& ingest_config, IngestStats* stats = nullptr);

}  // namespace pointillist
