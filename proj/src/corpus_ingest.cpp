#include "pointillist/corpus_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <optional>
#include <thread>

#include <json.hpp>

#include "pointillist/unicode.hpp"

namespace pointillist {

namespace {

std::optional<Post> parse_jsonl_line(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  auto id = j.find("id");
  auto ts = j.find("ts");
  auto text = j.find("text");
  if (id == j.end() || ts == j.end() || text == j.end()) return std::nullopt;
  if (!id->is_string() || !ts->is_number_integer() || !text->is_string()) return std::nullopt;
  Post p;
  p.id = id->get<std::string>();
  p.ts = ts->get<std::int64_t>();
  p.text = text->get<std::string>();
  return p;
}

std::optional<Post> parse_tsv_line(const std::string& line) {
  auto t1 = line.find('\t');
  if (t1 == std::string::npos) return std::nullopt;
  auto t2 = line.find('\t', t1 + 1);
  if (t2 == std::string::npos) return std::nullopt;
  if (line.find('\t', t2 + 1) != std::string::npos) return std::nullopt;  // tabs in text: reject
  std::string_view ts_field(line.data() + t1 + 1, t2 - t1 - 1);
  Post p;
  p.id = line.substr(0, t1);
  auto [ptr, ec] = std::from_chars(ts_field.data(), ts_field.data() + ts_field.size(), p.ts);
  if (ec != std::errc() || ptr != ts_field.data() + ts_field.size()) return std::nullopt;
  p.text = line.substr(t2 + 1);
  if (!is_valid_utf8(p.text)) return std::nullopt;
  return p;
}

void count_post(const Post& post, const IngestConfig& config, GramStore& store) {
  std::vector<char32_t> cps;
  if (!decode_utf8(post.text, cps)) return;  // rejected at parse; unreachable for parsed posts
  HourIndex hour = hour_bucket(post.ts, config.tz_offset_minutes);
  // walk maximal eligible segments once, emit every window size in one pass
  std::size_t seg_start = 0;
  auto flush = [&](std::size_t seg_end) {
    std::size_t len = seg_end - seg_start;
    for (int n : config.ngram_sizes) {
      if (len < static_cast<std::size_t>(n)) continue;
      for (std::size_t i = seg_start; i + static_cast<std::size_t>(n) <= seg_end; ++i)
        store.record(Gram::from_codepoints({cps.data() + i, static_cast<std::size_t>(n)}), hour, 1);
    }
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (!is_eligible_char(cps[i], config.eligible)) {
      flush(i);
      seg_start = i + 1;
    }
  }
  flush(cps.size());
}

void validate_ngram_sizes(const std::vector<int>& sizes) {
  if (sizes.empty()) throw std::invalid_argument("at least one n-gram size required");
  for (int n : sizes)
    if (n < 1 || n > 3) throw std::invalid_argument("n-gram sizes must be in {1,2,3}");
}

}  // namespace

bool is_eligible_char(char32_t cp, EligibleSet eligible) {
  if (eligible == EligibleSet::All) return true;
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF);
}

ParseResult parse_posts(std::istream& in, const ParseConfig& config) {
  ParseResult result;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto post = config.format == InputFormat::Jsonl ? parse_jsonl_line(line) : parse_tsv_line(line);
    if (post) {
      result.posts.push_back(std::move(*post));
    } else if (config.strict) {
      throw ParseError("malformed record at line " + std::to_string(line_no), line_no);
    } else {
      ++result.rejected;
    }
  }
  return result;
}

std::vector<Gram> extract_grams(std::string_view text_utf8, int n, EligibleSet eligible) {
  if (n < 1 || n > 3) throw std::invalid_argument("n must be in {1,2,3}");
  std::vector<char32_t> cps;
  if (!decode_utf8(text_utf8, cps)) throw std::invalid_argument("invalid UTF-8");
  std::vector<Gram> out;
  std::size_t seg_start = 0;
  auto flush = [&](std::size_t seg_end) {
    for (std::size_t i = seg_start; i + static_cast<std::size_t>(n) <= seg_end; ++i)
      out.push_back(Gram::from_codepoints({cps.data() + i, static_cast<std::size_t>(n)}));
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (!is_eligible_char(cps[i], eligible)) {
      flush(i);
      seg_start = i + 1;
    }
  }
  flush(cps.size());
  return out;
}

GramStore ingest(std::span<const Post> posts, const IngestConfig& config) {
  validate_ngram_sizes(config.ngram_sizes);
  int threads = std::max(1, config.threads);
  if (threads == 1 || posts.size() < 2) {
    GramStore store;
    for (const Post& p : posts) count_post(p, config, store);
    return store;
  }
  std::size_t shards = std::min<std::size_t>(static_cast<std::size_t>(threads), posts.size());
  std::vector<GramStore> parts(shards);
  std::vector<std::thread> workers;
  workers.reserve(shards);
  for (std::size_t s = 0; s < shards; ++s) {
    workers.emplace_back([&, s] {
      std::size_t lo = posts.size() * s / shards;
      std::size_t hi = posts.size() * (s + 1) / shards;
      for (std::size_t i = lo; i < hi; ++i) count_post(posts[i], config, parts[s]);
    });
  }
  for (auto& w : workers) w.join();
  GramStore store = std::move(parts[0]);
  for (std::size_t s = 1; s < shards; ++s) store.merge(std::move(parts[s]));
  return store;
}

GramStore ingest_stream(std::istream& in, const ParseConfig& parse_config,
                        const IngestConfig& ingest_config, IngestStats* stats) {
  validate_ngram_sizes(ingest_config.ngram_sizes);
  GramStore store;
  IngestStats local;
  // parse in blocks so ingestion can shard without holding the whole input
  constexpr std::size_t kBlockLines = 1 << 16;
  std::string line;
  std::vector<Post> block;
  std::uint64_t line_no = 0;
  bool eof = false;
  while (!eof) {
    block.clear();
    while (block.size() < kBlockLines) {
      if (!std::getline(in, line)) {
        eof = true;
        break;
      }
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto post = parse_config.format == InputFormat::Jsonl ? parse_jsonl_line(line)
                                                            : parse_tsv_line(line);
      if (post) {
        block.push_back(std::move(*post));
      } else if (parse_config.strict) {
        throw ParseError("malformed record at line " + std::to_string(line_no), line_no);
      } else {
        ++local.rejected;
      }
    }
    if (block.empty()) continue;
    local.posts += block.size();
    store.merge(ingest(block, ingest_config));
  }
  if (stats) *stats = local;
  return store;
}

}  // namespace pointillist
