#include "pointillist/synth_corpus.hpp"

#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "pointillist/corpus_ingest.hpp"
#include "pointillist/gram.hpp"
#include "pointillist/rng.hpp"
#include "pointillist/unicode.hpp"

namespace pointillist {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<char32_t> decode_phrase(const InjectionSpec& spec, const SynthConfig& cfg) {
  std::vector<char32_t> cps;
  if (!decode_utf8(spec.phrase, cps)) throw std::invalid_argument("phrase is not valid UTF-8");
  if (cps.size() < 3 || cps.size() > 16)
    throw std::invalid_argument("phrase must be 3..16 characters: " + spec.phrase);
  char32_t bg_lo = cfg.background.alphabet_first;
  char32_t bg_hi = bg_lo + static_cast<char32_t>(cfg.background.alphabet_size);
  for (char32_t c : cps) {
    if (!is_eligible_char(c, EligibleSet::Cjk))
      throw std::invalid_argument("phrase character outside the eligible range: " + spec.phrase);
    if (c >= bg_lo && c < bg_hi)
      throw std::invalid_argument("phrase overlaps the background alphabet: " + spec.phrase);
  }
  return cps;
}

std::set<std::u32string> trigrams_of(const std::vector<char32_t>& cps) {
  std::set<std::u32string> out;
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i)
    out.insert(std::u32string(cps.begin() + static_cast<std::ptrdiff_t>(i),
                              cps.begin() + static_cast<std::ptrdiff_t>(i + 3)));
  return out;
}

void validate_specs(std::span<const InjectionSpec> specs, const SynthConfig& cfg,
                    std::vector<std::vector<char32_t>>& decoded) {
  if (cfg.days < 1) throw std::invalid_argument("corpus must span at least one day");
  if (cfg.background.num_grams < 0) throw std::invalid_argument("num_grams must be >= 0");
  if (cfg.background.alphabet_size < 2) throw std::invalid_argument("background alphabet too small");
  std::int64_t cube = static_cast<std::int64_t>(cfg.background.alphabet_size);
  cube = cube * cube * cube;
  if (cfg.background.num_grams > cube)
    throw std::invalid_argument("background alphabet too small for num_grams");
  if (cfg.background.base_rate < 0 || cfg.background.base_rate > 500)
    throw std::invalid_argument("base_rate must be in [0, 500]");
  if (cfg.filler_per_side < 0) throw std::invalid_argument("filler_per_side must be >= 0");

  std::vector<std::set<std::u32string>> tri;
  for (const auto& spec : specs) {
    if (spec.profile.size() != static_cast<std::size_t>(cfg.days))
      throw std::invalid_argument("profile length must equal the corpus day span: " + spec.phrase);
    for (auto c : spec.profile)
      if (c < 0) throw std::invalid_argument("profile counts must be >= 0");
    if (spec.spike_day != -1 && (spec.spike_day < 0 || spec.spike_day >= cfg.days))
      throw std::invalid_argument("spike_day out of range: " + spec.phrase);
    decoded.push_back(decode_phrase(spec, cfg));
    tri.push_back(trigrams_of(decoded.back()));
  }
  if (!cfg.allow_collisions) {
    for (std::size_t i = 0; i < tri.size(); ++i)
      for (std::size_t j = i + 1; j < tri.size(); ++j)
        for (const auto& t : tri[i])
          if (tri[j].count(t) > 0)
            throw std::invalid_argument("phrases share trigram " + to_utf8(t) + " (" +
                                        specs[i].phrase + " / " + specs[j].phrase +
                                        "); pass allow_collisions to permit this");
  }
}

std::string background_gram(const BackgroundConfig& bg, int rank) {
  int b = bg.alphabet_size;
  int d0 = rank % b, d1 = (rank / b) % b, d2 = rank / (b * b);
  std::string out;
  append_utf8(out, bg.alphabet_first + static_cast<char32_t>(d2));
  append_utf8(out, bg.alphabet_first + static_cast<char32_t>(d1));
  append_utf8(out, bg.alphabet_first + static_cast<char32_t>(d0));
  return out;
}

}  // namespace

Manifest generate(std::span<const InjectionSpec> specs, const SynthConfig& cfg,
                  std::ostream& posts_out) {
  std::vector<std::vector<char32_t>> decoded;
  validate_specs(specs, cfg, decoded);

  Manifest manifest;
  manifest.config = cfg;
  manifest.specs.assign(specs.begin(), specs.end());
  for (std::size_t i = 0; i < manifest.specs.size(); ++i) {
    if (manifest.specs[i].spike_day == -1) {
      int best = 0;
      for (int d = 1; d < cfg.days; ++d)
        if (specs[i].profile[static_cast<std::size_t>(d)] >
            specs[i].profile[static_cast<std::size_t>(best)])
          best = d;
      manifest.specs[i].spike_day = best;
    }
  }

  SplitMix64 rng(cfg.seed);
  const auto& bg = cfg.background;

  // phrase utf8 with fresh filler around each occurrence
  auto make_phrase_post = [&](const std::vector<char32_t>& cps) {
    std::string text;
    for (int k = 0; k < cfg.filler_per_side; ++k)
      append_utf8(text, bg.alphabet_first + static_cast<char32_t>(rng.next_below(
                            static_cast<std::uint64_t>(bg.alphabet_size))));
    for (char32_t c : cps) append_utf8(text, c);
    for (int k = 0; k < cfg.filler_per_side; ++k)
      append_utf8(text, bg.alphabet_first + static_cast<char32_t>(rng.next_below(
                            static_cast<std::uint64_t>(bg.alphabet_size))));
    return text;
  };

  std::uint64_t seq = 0;
  std::vector<std::string> texts;
  for (int d = 0; d < cfg.days; ++d) {
    texts.clear();
    // planted phrases first, in spec order
    for (std::size_t s = 0; s < specs.size(); ++s) {
      std::int64_t n = specs[s].profile[static_cast<std::size_t>(d)];
      for (std::int64_t k = 0; k < n; ++k) texts.push_back(make_phrase_post(decoded[s]));
    }
    // background grams, Zipf-like daily rates, packed with break separators
    std::string packed;
    int in_post = 0;
    auto flush_packed = [&] {
      if (in_post > 0) {
        texts.push_back(packed);
        packed.clear();
        in_post = 0;
      }
    };
    for (int r = 0; r < bg.num_grams; ++r) {
      double rate = bg.base_rate / std::pow(static_cast<double>(r + 1), bg.zipf_exponent);
      std::int64_t count = rng.poisson(rate);
      for (std::int64_t k = 0; k < count; ++k) {
        if (in_post > 0) packed += ' ';
        packed += background_gram(bg, r);
        if (++in_post >= bg.grams_per_post) flush_packed();
      }
    }
    flush_packed();

    std::int64_t day_start = (cfg.start_day + d) * 86400;
    std::size_t n = texts.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t ts = day_start + static_cast<std::int64_t>(
                                        (static_cast<double>(i) + 0.5) * 86400.0 /
                                        static_cast<double>(n));
      ordered_json j;
      j["id"] = "s" + std::to_string(seq++);
      j["ts"] = ts;
      j["text"] = texts[i];
      posts_out << j.dump() << '\n';
    }
  }
  return manifest;
}

Manifest generate_from_manifest(const Manifest& manifest, std::ostream& posts_out) {
  return generate(manifest.specs, manifest.config, posts_out);
}

std::string Manifest::to_json() const {
  ordered_json j;
  j["format"] = "pointillist-synth-manifest";
  j["version"] = 1;
  j["seed"] = config.seed;
  j["start_date"] = format_date(config.start_day);
  j["days"] = config.days;
  j["filler_per_side"] = config.filler_per_side;
  j["allow_collisions"] = config.allow_collisions;
  j["background"] = {
      {"num_grams", config.background.num_grams},
      {"zipf_exponent", config.background.zipf_exponent},
      {"base_rate", config.background.base_rate},
      {"alphabet_first", static_cast<std::uint32_t>(config.background.alphabet_first)},
      {"alphabet_size", config.background.alphabet_size},
      {"grams_per_post", config.background.grams_per_post},
  };
  ordered_json phrases = ordered_json::array();
  for (const auto& s : specs) {
    ordered_json p;
    p["phrase"] = s.phrase;
    p["profile"] = s.profile;
    p["spike_day"] = s.spike_day;
    phrases.push_back(std::move(p));
  }
  j["phrases"] = std::move(phrases);
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "pointillist-synth-manifest")
    throw std::runtime_error("not a synth manifest");
  Manifest m;
  m.config.seed = j.at("seed").get<std::uint64_t>();
  auto day = parse_date(j.at("start_date").get<std::string>());
  if (!day) throw std::runtime_error("bad start_date in manifest");
  m.config.start_day = *day;
  m.config.days = j.at("days").get<int>();
  m.config.filler_per_side = j.at("filler_per_side").get<int>();
  m.config.allow_collisions = j.at("allow_collisions").get<bool>();
  const auto& b = j.at("background");
  m.config.background.num_grams = b.at("num_grams").get<int>();
  m.config.background.zipf_exponent = b.at("zipf_exponent").get<double>();
  m.config.background.base_rate = b.at("base_rate").get<double>();
  m.config.background.alphabet_first = static_cast<char32_t>(b.at("alphabet_first").get<std::uint32_t>());
  m.config.background.alphabet_size = b.at("alphabet_size").get<int>();
  m.config.background.grams_per_post = b.at("grams_per_post").get<int>();
  for (const auto& p : j.at("phrases")) {
    InjectionSpec s;
    s.phrase = p.at("phrase").get<std::string>();
    s.profile = p.at("profile").get<std::vector<std::int64_t>>();
    s.spike_day = p.at("spike_day").get<int>();
    m.specs.push_back(std::move(s));
  }
  return m;
}

}  // namespace pointillist
