#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pointillist/time_bucket.hpp"

namespace pointillist {

/// One phrase to plant in the corpus: it appears embedded in filler text
/// exactly profile[d] times on day d.
struct InjectionSpec {
  std::string phrase;                 // UTF-8, 3..16 chars from the eligible range
  std::vector<std::int64_t> profile;  // one count per corpus day
  int spike_day = -1;                 // -1: derived as argmax of the profile
};

struct BackgroundConfig {
  int num_grams = 10000;
  double zipf_exponent = 1.1;
  double base_rate = 50.0;          // expected daily count of the rank-1 gram
  char32_t alphabet_first = 0x5100; // background alphabet: a CJK subrange
  int alphabet_size = 256;
  int grams_per_post = 64;          // background grams packed per post, break-separated
};

struct SynthConfig {
  std::uint64_t seed = 42;
  DayIndex start_day = 0;
  int days = 15;
  int filler_per_side = 2;       // background chars around each planted phrase
  bool allow_collisions = false; // permit phrases sharing a trigram
  BackgroundConfig background;
};

/// Everything needed to regenerate the corpus byte for byte.
struct Manifest {
  SynthConfig config;
  std::vector<InjectionSpec> specs;

  std::string to_json() const;
  static Manifest from_json(const std::string& text);
};

/// Writes the corpus to `posts_out` in the default ingest format (JSONL,
/// fields id/ts/text) and returns the manifest. Posts are timestamped
/// uniformly within each day. Background trigram frequencies follow a
/// Zipf-like daily rate distribution; the background alphabet is disjoint
/// from the phrase characters, so injected trigram counts match their
/// profiles exactly. Output is intended for CJK-eligible ingestion:
/// background grams are separated by window-breaking ASCII.
Manifest generate(std::span<const InjectionSpec> specs, const SynthConfig& config,
                  std::ostream& posts_out);

Manifest generate_from_manifest(const Manifest& manifest, std::ostream& posts_out);

}  // namespace pointillist
