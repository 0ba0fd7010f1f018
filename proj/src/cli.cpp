#include "pointillist/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pointillist/connector.hpp"
#include "pointillist/corpus_ingest.hpp"
#include "pointillist/evaluator.hpp"
#include "pointillist/gram_store.hpp"
#include "pointillist/synth_corpus.hpp"
#include "pointillist/trend_detector.hpp"
#include "pointillist/vector_selector.hpp"

namespace pointillist {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// "60s", "1500ms", "2m", bare seconds, or off/none/0 to disable
std::chrono::milliseconds parse_budget(const std::string& s) {
  if (s == "off" || s == "none" || s == "0") return std::chrono::milliseconds(0);
  std::size_t pos = 0;
  while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
    ++pos;
  if (pos == 0) throw UsageError("bad duration: " + s);
  double value = std::stod(s.substr(0, pos));
  std::string unit = s.substr(pos);
  double ms;
  if (unit == "ms") ms = value;
  else if (unit == "s" || unit.empty()) ms = value * 1000.0;
  else if (unit == "m") ms = value * 60000.0;
  else throw UsageError("bad duration unit: " + s);
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

std::string format_budget(std::chrono::milliseconds ms) {
  if (ms.count() <= 0) return "off";
  if (ms.count() % 1000 == 0) return std::to_string(ms.count() / 1000) + "s";
  return std::to_string(ms.count()) + "ms";
}

DayIndex parse_date_arg(const std::string& s, const char* flag) {
  auto d = parse_date(s);
  if (!d) throw UsageError(std::string(flag) + ": bad date '" + s + "' (expected YYYY-MM-DD)");
  return *d;
}

Gram parse_gram_arg(const std::string& s, const char* flag, int required_len = 0) {
  auto g = Gram::from_utf8(s);
  if (!g) throw UsageError(std::string(flag) + ": '" + s + "' is not a 1..3 character gram");
  if (required_len != 0 && g->size() != required_len)
    throw UsageError(std::string(flag) + ": '" + s + "' must be exactly " +
                     std::to_string(required_len) + " characters");
  return *g;
}

InputFormat parse_format(const std::string& s) {
  if (s == "jsonl") return InputFormat::Jsonl;
  if (s == "tsv") return InputFormat::Tsv;
  throw UsageError("--format must be jsonl or tsv");
}

EligibleSet parse_eligible(const std::string& s) {
  if (s == "cjk") return EligibleSet::Cjk;
  if (s == "all") return EligibleSet::All;
  throw UsageError("--eligible must be cjk or all");
}

std::vector<int> parse_ngrams(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok != "1" && tok != "2" && tok != "3") throw UsageError("--ngrams must list sizes from {1,2,3}");
    int n = tok[0] - '0';
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  }
  if (out.empty()) throw UsageError("--ngrams must list at least one size");
  return out;
}

KindChoice parse_kind_choice(const std::string& s, bool allow_auto) {
  if (s == "ft") return KindChoice::Ft;
  if (s == "dft") return KindChoice::Dft;
  if (s == "cft") return KindChoice::Cft;
  if (s == "auto" && allow_auto) return KindChoice::Auto;
  throw UsageError(std::string("--kind must be ft, dft or cft") + (allow_auto ? " or auto" : ""));
}

GramStore load_sealed_store(const std::string& path) {
  if (path.empty())
    throw UsageError("no store given: pass --store or set POINTILLIST_STORE");
  GramStore store = GramStore::load(path);
  store.seal();
  return store;
}

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void print_config(std::ostream& out, const ConfigEcho& kv) {
  for (const auto& [k, v] : kv) out << k << ' ' << v << '\n';
}

// ---- subcommand state ----

struct IngestArgs {
  std::string in, store_path, out_path;
  std::string format = "jsonl";
  std::string ngrams = "3";
  std::string eligible = "cjk";
  std::string granularity;  // default depends on subcommand
  int tz_offset = 0;
  bool strict = false;
  int threads = 1;
};

struct WindowArgs {
  std::string from;
  int days = 0;
};

struct ConnectArgs {
  std::string store_path, root, from;
  int days = 0;
  int threads = 1;
  std::string kind = "auto";
  double threshold = 0.97;
  int width = 5;
  std::string budget = "60s";
  int max_chars = 32;
  double epsilon = 1.0;
  double flatness = 0.98;
  double max_zero_fraction = 0.5;
  bool alternates = false;
  std::string alternate_floor = "length-fair";
  bool force = false;
  bool bidirectional = false;
  bool trace = false;
  std::string model_path;
};

ConnectorConfig make_connector_config(const ConnectArgs& a, const SelectorModel* model,
                                      std::ostream* trace_stream) {
  ConnectorConfig cfg;
  cfg.sim_threshold = a.threshold;
  cfg.branch_width = a.width;
  cfg.time_budget = parse_budget(a.budget);
  cfg.max_phrase_chars = a.max_chars;
  cfg.vector_kind = parse_kind_choice(a.kind, true);
  cfg.cft_epsilon = a.epsilon;
  cfg.bidirectional = a.bidirectional;
  cfg.force_root = a.force;
  cfg.root_criteria.flatness_threshold = a.flatness;
  cfg.root_criteria.max_zero_fraction = a.max_zero_fraction;
  if (!a.alternates) {
    cfg.alternate_policy = AlternatePolicy::All;  // filtered to top-1 at print time
  } else if (a.alternate_floor == "plain") {
    cfg.alternate_policy = AlternatePolicy::Plain;
  } else if (a.alternate_floor == "length-fair") {
    cfg.alternate_policy = AlternatePolicy::LengthFair;
  } else {
    throw UsageError("--alternate-floor must be length-fair or plain");
  }
  cfg.selector = model;
  cfg.trace = a.trace ? trace_stream : nullptr;
  return cfg;
}

int run_ingest_like(const IngestArgs& a, bool daily_default, std::ostream& out, std::ostream& err) {
  (void)out;
  ParseConfig pc{parse_format(a.format), a.strict};
  IngestConfig ic;
  ic.ngram_sizes = parse_ngrams(a.ngrams);
  ic.eligible = parse_eligible(a.eligible);
  ic.tz_offset_minutes = a.tz_offset;
  ic.threads = a.threads;

  std::string dest = daily_default ? a.out_path : a.store_path;
  if (dest.empty()) throw UsageError(daily_default ? "--out is required" : "--store is required");
  std::string gran = a.granularity.empty() ? (daily_default ? "day" : "hour") : a.granularity;
  GramStore::Granularity g;
  if (gran == "day") g = GramStore::Granularity::Day;
  else if (gran == "hour") g = GramStore::Granularity::Hour;
  else throw UsageError("--granularity must be hour or day");

  std::ifstream in(a.in, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + a.in);
  IngestStats stats;
  GramStore store = ingest_stream(in, pc, ic, &stats);
  store.seal();
  store.save(dest, g);
  err << "posts=" << stats.posts << " rejected=" << stats.rejected
      << " grams=" << store.gram_count() << " -> " << dest << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pointillist: reconstructs words, idioms and memes from the temporal "
               "correlation of character trigram frequencies"};
  app.require_subcommand(0, 1);
  bool want_config = false;
  const char* kPrintConfigHelp = "print the effective configuration and exit";
  app.add_flag("--print-config", want_config, kPrintConfigHelp);

  std::string default_store;
  if (const char* env = std::getenv("POINTILLIST_STORE")) default_store = env;

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus with injected phrases");
  struct {
    std::string spec, out_path, manifest, start_date = "2011-07-23";
    std::uint64_t seed = 42;
    int days = 15, filler = 2, bg_grams = 10000, grams_per_post = 64;
    double bg_rate = 50.0, bg_exponent = 1.1;
    bool allow_collisions = false;
  } synth_args;
  synth_cmd->add_option("--spec", synth_args.spec, "injection spec file (JSONL)")->required();
  synth_cmd->add_option("--out", synth_args.out_path, "output posts file")->required();
  synth_cmd->add_option("--manifest", synth_args.manifest, "manifest path (default <out>.manifest.json)");
  synth_cmd->add_option("--seed", synth_args.seed, "generator seed");
  synth_cmd->add_option("--days", synth_args.days, "corpus day span");
  synth_cmd->add_option("--start-date", synth_args.start_date, "first corpus day (YYYY-MM-DD)");
  synth_cmd->add_option("--filler", synth_args.filler, "filler characters per side of a phrase");
  synth_cmd->add_option("--bg-grams", synth_args.bg_grams, "distinct background trigrams");
  synth_cmd->add_option("--bg-rate", synth_args.bg_rate, "daily rate of the rank-1 background gram");
  synth_cmd->add_option("--bg-exponent", synth_args.bg_exponent, "Zipf exponent of background rates");
  synth_cmd->add_option("--grams-per-post", synth_args.grams_per_post, "background grams per post");
  synth_cmd->add_flag("--allow-collisions", synth_args.allow_collisions,
                      "permit phrases sharing a trigram");

  // ingest / count
  auto* ingest_cmd = app.add_subcommand("ingest", "count grams from posts into a store file");
  auto* count_cmd = app.add_subcommand("count", "count grams from posts into a daily counts table");
  IngestArgs ingest_args, count_args;
  auto add_ingest_flags = [&](CLI::App* cmd, IngestArgs& a, bool daily) {
    cmd->add_option("--in", a.in, "posts file")->required();
    if (daily)
      cmd->add_option("--out", a.out_path, "counts table to write")->required();
    else
      cmd->add_option("--store", a.store_path, "store file to write")
          ->envname("POINTILLIST_STORE");
    cmd->add_option("--format", a.format, "jsonl or tsv");
    cmd->add_option("--ngrams", a.ngrams, "comma list from {1,2,3}");
    cmd->add_option("--eligible", a.eligible, "cjk or all");
    cmd->add_option("--tz-offset", a.tz_offset, "bucket timezone offset in minutes");
    cmd->add_flag("--strict", a.strict, "abort on the first malformed line");
    cmd->add_option("--threads", a.threads, "ingest shards");
    cmd->add_option("--granularity", a.granularity, "hour or day");
  };
  add_ingest_flags(ingest_cmd, ingest_args, false);
  add_ingest_flags(count_cmd, count_args, true);

  // validate-root
  auto* vroot_cmd = app.add_subcommand("validate-root", "check the two root exclusion rules");
  struct {
    std::string store_path, gram, from;
    int days = 0;
    double flatness = 0.98, max_zero_fraction = 0.5;
  } vroot_args;
  vroot_cmd->add_option("--store", vroot_args.store_path)->envname("POINTILLIST_STORE");
  vroot_cmd->add_option("--gram", vroot_args.gram, "root trigram")->required();
  vroot_cmd->add_option("--from", vroot_args.from, "window start (YYYY-MM-DD)")->required();
  vroot_cmd->add_option("--days", vroot_args.days, "window length")->required();
  vroot_cmd->add_option("--flatness", vroot_args.flatness, "flatness threshold");
  vroot_cmd->add_option("--max-zero-fraction", vroot_args.max_zero_fraction,
                        "zero-day share above which the root is too sparse");

  // sim
  auto* sim_cmd = app.add_subcommand("sim", "cosine similarity of two grams' trend vectors");
  struct {
    std::string store_path, gram_a, gram_b, kind = "ft", from;
    int days = 0;
    double epsilon = 1.0;
  } sim_args;
  sim_cmd->add_option("--store", sim_args.store_path)->envname("POINTILLIST_STORE");
  sim_cmd->add_option("--gram-a", sim_args.gram_a)->required();
  sim_cmd->add_option("--gram-b", sim_args.gram_b)->required();
  sim_cmd->add_option("--kind", sim_args.kind, "ft, dft or cft");
  sim_cmd->add_option("--from", sim_args.from, "window start (YYYY-MM-DD)")->required();
  sim_cmd->add_option("--days", sim_args.days, "window length")->required();
  sim_cmd->add_option("--epsilon", sim_args.epsilon, "CFT smoothing");

  // train-selector
  auto* train_cmd = app.add_subcommand("train-selector", "fit the FT/DFT/CFT choice model");
  struct {
    std::string labels, store_path, out_path;
    double epsilon = 1.0, lambda = 0.01;
    int iterations = 4000;
  } train_args;
  train_cmd->add_option("--labels", train_args.labels, "labeled examples file")->required();
  train_cmd->add_option("--store", train_args.store_path)->envname("POINTILLIST_STORE");
  train_cmd->add_option("--out", train_args.out_path, "model file to write")->required();
  train_cmd->add_option("--epsilon", train_args.epsilon, "change-rate smoothing");
  train_cmd->add_option("--lambda", train_args.lambda, "regularization strength");
  train_cmd->add_option("--iterations", train_args.iterations, "training iterations");

  // connect
  auto* connect_cmd = app.add_subcommand("connect", "reconstruct a phrase from a root trigram");
  ConnectArgs connect_args;
  connect_cmd->add_option("--store", connect_args.store_path)->envname("POINTILLIST_STORE");
  connect_cmd->add_option("--root", connect_args.root, "root trigram")->required();
  connect_cmd->add_option("--from", connect_args.from, "window start (YYYY-MM-DD)")->required();
  connect_cmd->add_option("--days", connect_args.days, "window length")->required();
  connect_cmd->add_option("--kind", connect_args.kind, "ft, dft, cft or auto");
  connect_cmd->add_option("--threshold", connect_args.threshold, "simScore pruning threshold");
  connect_cmd->add_option("--width", connect_args.width, "candidates considered per node");
  connect_cmd->add_option("--budget", connect_args.budget, "search time budget (e.g. 60s, off)");
  connect_cmd->add_option("--max-chars", connect_args.max_chars, "phrase length cap");
  connect_cmd->add_option("--epsilon", connect_args.epsilon, "CFT smoothing");
  connect_cmd->add_option("--flatness", connect_args.flatness, "root flatness threshold");
  connect_cmd->add_option("--max-zero-fraction", connect_args.max_zero_fraction,
                          "root sparsity threshold");
  connect_cmd->add_flag("--alternates", connect_args.alternates, "print qualifying alternates too");
  connect_cmd->add_option("--alternate-floor", connect_args.alternate_floor,
                          "length-fair or plain");
  connect_cmd->add_flag("--force", connect_args.force, "search even if the root is invalid");
  connect_cmd->add_flag("--bidirectional", connect_args.bidirectional, "also extend leftward");
  connect_cmd->add_flag("--trace", connect_args.trace, "emit per-step scores on stderr");
  connect_cmd->add_option("--model", connect_args.model_path, "selector model for --kind auto");
  connect_cmd->add_option("--threads", connect_args.threads)
      ->group("");  // accepted for parity; connect output is thread-count independent

  // trends
  auto* trends_cmd = app.add_subcommand("trends", "scan for day-over-day frequency spikes");
  struct {
    std::string store_path, from, to, baseline = "prev";
    double threshold = 100.0, epsilon = 1.0;
    int threads = 1;
    bool connect = false;
    ConnectArgs connect_args;  // connector settings for --connect
  } trends_args;
  trends_cmd->add_option("--store", trends_args.store_path)->envname("POINTILLIST_STORE");
  trends_cmd->add_option("--from", trends_args.from, "range start (YYYY-MM-DD)")->required();
  trends_cmd->add_option("--to", trends_args.to, "range end, inclusive")->required();
  trends_cmd->add_option("--threshold", trends_args.threshold, "change-rate threshold");
  trends_cmd->add_option("--baseline", trends_args.baseline, "prev or avg7");
  trends_cmd->add_option("--epsilon", trends_args.epsilon, "rate smoothing");
  trends_cmd->add_option("--threads", trends_args.threads, "scan shards");
  trends_cmd->add_flag("--connect", trends_args.connect, "run Connector on each hit's window");
  trends_cmd->add_option("--kind", trends_args.connect_args.kind, "vector kind for --connect");
  trends_cmd->add_option("--sim-threshold", trends_args.connect_args.threshold,
                         "simScore threshold for --connect");
  trends_cmd->add_option("--width", trends_args.connect_args.width, "branch width for --connect");
  trends_cmd->add_option("--budget", trends_args.connect_args.budget, "budget for --connect");
  trends_cmd->add_option("--max-chars", trends_args.connect_args.max_chars,
                         "phrase cap for --connect");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "lexicon-constrained and unconstrained precision");
  struct {
    std::string results, lexicon, judgments, strata;
  } eval_args;
  eval_cmd->add_option("--results", eval_args.results, "runs file: root<TAB>result[<TAB>peak]")
      ->required();
  eval_cmd->add_option("--lexicon", eval_args.lexicon, "one phrase per line")->required();
  eval_cmd->add_option("--judgments", eval_args.judgments, "phrase<TAB>1|0");
  eval_cmd->add_option("--strata", eval_args.strata, "comma list, strictly decreasing (e.g. 99,29,4)");

  for (CLI::App* sub : app.get_subcommands(nullptr))
    sub->add_flag("--print-config", want_config, kPrintConfigHelp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (app.get_subcommands().empty()) {
      if (want_config) {
        print_config(out, {
            {"store", default_store.empty() ? "(unset)" : default_store},
            {"format", "jsonl"},
            {"ngrams", "3"},
            {"eligible", "cjk"},
            {"tz_offset_minutes", "0"},
            {"strict", "false"},
            {"threads", "1"},
            {"sim_threshold", "0.97"},
            {"flatness_threshold", "0.98"},
            {"max_zero_fraction", "0.5"},
            {"branch_width", "5"},
            {"time_budget", "60s"},
            {"max_phrase_chars", "32"},
            {"vector_kind", "auto"},
            {"cft_epsilon", "1"},
            {"trend_threshold", "100"},
            {"trend_baseline", "prev"},
            {"trend_epsilon", "1"},
        });
        return 0;
      }
      err << app.help();
      return 2;
    }

    if (app.got_subcommand(synth_cmd)) {
      if (want_config) {
        print_config(out, {
            {"spec", synth_args.spec},
            {"out", synth_args.out_path},
            {"manifest", synth_args.manifest.empty() ? synth_args.out_path + ".manifest.json"
                                                     : synth_args.manifest},
            {"seed", std::to_string(synth_args.seed)},
            {"days", std::to_string(synth_args.days)},
            {"start_date", synth_args.start_date},
            {"filler_per_side", std::to_string(synth_args.filler)},
            {"bg_grams", std::to_string(synth_args.bg_grams)},
            {"bg_rate", fmt_num(synth_args.bg_rate)},
            {"bg_exponent", fmt_num(synth_args.bg_exponent)},
            {"grams_per_post", std::to_string(synth_args.grams_per_post)},
            {"allow_collisions", synth_args.allow_collisions ? "true" : "false"},
        });
        return 0;
      }
      std::ifstream spec_in(synth_args.spec, std::ios::binary);
      if (!spec_in) throw std::runtime_error("cannot open: " + synth_args.spec);
      std::vector<InjectionSpec> specs;
      std::string line;
      std::uint64_t line_no = 0;
      while (std::getline(spec_in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("phrase") || !j.contains("profile"))
          throw std::runtime_error("bad spec record at line " + std::to_string(line_no));
        InjectionSpec s;
        s.phrase = j.at("phrase").get<std::string>();
        s.profile = j.at("profile").get<std::vector<std::int64_t>>();
        s.spike_day = j.value("spike_day", -1);
        specs.push_back(std::move(s));
      }
      SynthConfig cfg;
      cfg.seed = synth_args.seed;
      cfg.start_day = parse_date_arg(synth_args.start_date, "--start-date");
      cfg.days = synth_args.days;
      cfg.filler_per_side = synth_args.filler;
      cfg.allow_collisions = synth_args.allow_collisions;
      cfg.background.num_grams = synth_args.bg_grams;
      cfg.background.base_rate = synth_args.bg_rate;
      cfg.background.zipf_exponent = synth_args.bg_exponent;
      cfg.background.grams_per_post = synth_args.grams_per_post;
      std::ofstream posts(synth_args.out_path, std::ios::binary);
      if (!posts) throw std::runtime_error("cannot open for writing: " + synth_args.out_path);
      Manifest manifest = generate(specs, cfg, posts);
      std::string mpath = synth_args.manifest.empty() ? synth_args.out_path + ".manifest.json"
                                                      : synth_args.manifest;
      std::ofstream mf(mpath, std::ios::binary);
      if (!mf) throw std::runtime_error("cannot open for writing: " + mpath);
      mf << manifest.to_json();
      err << "synth: " << specs.size() << " phrases over " << cfg.days << " days -> "
          << synth_args.out_path << '\n';
      return 0;
    }

    if (app.got_subcommand(ingest_cmd) || app.got_subcommand(count_cmd)) {
      bool daily = app.got_subcommand(count_cmd);
      IngestArgs& a = daily ? count_args : ingest_args;
      if (want_config) {
        print_config(out, {
            {"in", a.in},
            {daily ? "out" : "store", daily ? a.out_path : a.store_path},
            {"format", a.format},
            {"ngrams", a.ngrams},
            {"eligible", a.eligible},
            {"tz_offset_minutes", std::to_string(a.tz_offset)},
            {"strict", a.strict ? "true" : "false"},
            {"threads", std::to_string(a.threads)},
            {"granularity", a.granularity.empty() ? (daily ? "day" : "hour") : a.granularity},
        });
        return 0;
      }
      return run_ingest_like(a, daily, out, err);
    }

    if (app.got_subcommand(vroot_cmd)) {
      DayIndex from = vroot_args.from.empty() ? 0 : parse_date_arg(vroot_args.from, "--from");
      if (want_config) {
        print_config(out, {
            {"store", vroot_args.store_path},
            {"gram", vroot_args.gram},
            {"from", vroot_args.from},
            {"days", std::to_string(vroot_args.days)},
            {"flatness_threshold", fmt_num(vroot_args.flatness)},
            {"max_zero_fraction", fmt_num(vroot_args.max_zero_fraction)},
        });
        return 0;
      }
      Gram gram = parse_gram_arg(vroot_args.gram, "--gram", 3);
      GramStore store = load_sealed_store(vroot_args.store_path);
      FrequencySeries s = store.daily_series(gram, from, vroot_args.days);
      RootVerdict v = validate_root(s, {vroot_args.flatness, vroot_args.max_zero_fraction});
      out << gram.utf8() << '\t' << to_string(v.reason) << "\tflatness=" << fmt6(v.flatness)
          << "\tzero_fraction=" << fmt6(v.zero_fraction) << '\n';
      return 0;
    }

    if (app.got_subcommand(sim_cmd)) {
      DayIndex from = sim_args.from.empty() ? 0 : parse_date_arg(sim_args.from, "--from");
      if (want_config) {
        print_config(out, {
            {"store", sim_args.store_path},
            {"gram_a", sim_args.gram_a},
            {"gram_b", sim_args.gram_b},
            {"kind", sim_args.kind},
            {"from", sim_args.from},
            {"days", std::to_string(sim_args.days)},
            {"cft_epsilon", fmt_num(sim_args.epsilon)},
        });
        return 0;
      }
      KindChoice kc = parse_kind_choice(sim_args.kind, false);
      VectorKind kind = kc == KindChoice::Ft    ? VectorKind::Ft
                        : kc == KindChoice::Dft ? VectorKind::Dft
                                                : VectorKind::Cft;
      Gram a = parse_gram_arg(sim_args.gram_a, "--gram-a");
      Gram b = parse_gram_arg(sim_args.gram_b, "--gram-b");
      GramStore store = load_sealed_store(sim_args.store_path);
      TrendVector va = make_vector(kind, store.daily_series(a, from, sim_args.days), sim_args.epsilon);
      TrendVector vb = make_vector(kind, store.daily_series(b, from, sim_args.days), sim_args.epsilon);
      auto c = cosine(va, vb);
      if (!c) err << "undefined similarity (zero-norm vector); reporting 0\n";
      out << fmt6(c.value_or(0.0)) << '\n';
      return 0;
    }

    if (app.got_subcommand(train_cmd)) {
      if (want_config) {
        print_config(out, {
            {"labels", train_args.labels},
            {"store", train_args.store_path},
            {"out", train_args.out_path},
            {"epsilon", fmt_num(train_args.epsilon)},
            {"lambda", fmt_num(train_args.lambda)},
            {"iterations", std::to_string(train_args.iterations)},
        });
        return 0;
      }
      GramStore store = load_sealed_store(train_args.store_path);
      std::ifstream lf(train_args.labels, std::ios::binary);
      if (!lf) throw std::runtime_error("cannot open: " + train_args.labels);
      std::vector<LabeledFeatures> examples;
      std::string line;
      std::uint64_t line_no = 0;
      while (std::getline(lf, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string gs, fs, ds, ls;
        if (!std::getline(ss, gs, '\t') || !std::getline(ss, fs, '\t') ||
            !std::getline(ss, ds, '\t') || !std::getline(ss, ls))
          throw std::runtime_error("bad label line " + std::to_string(line_no) +
                                   ": expected gram<TAB>from<TAB>days<TAB>label");
        Gram gram = parse_gram_arg(gs, "labels file", 3);
        DayIndex from = parse_date_arg(fs, "labels file");
        int days = std::stoi(ds);
        auto label = vector_kind_from_string(ls);
        if (!label) throw std::runtime_error("bad label at line " + std::to_string(line_no));
        FrequencySeries s = store.daily_series(gram, from, days);
        examples.emplace_back(compute_features(s, train_args.epsilon), *label);
      }
      TrainOptions opts;
      opts.lambda = train_args.lambda;
      opts.iterations = train_args.iterations;
      SelectorModel model = train_selector(examples, opts);
      model.save(train_args.out_path);
      err << "trained on " << examples.size() << " examples -> " << train_args.out_path << '\n';
      return 0;
    }

    if (app.got_subcommand(connect_cmd)) {
      const ConnectArgs& a = connect_args;
      DayIndex from = a.from.empty() ? 0 : parse_date_arg(a.from, "--from");
      if (want_config) {
        print_config(out, {
            {"store", a.store_path},
            {"root", a.root},
            {"from", a.from},
            {"days", std::to_string(a.days)},
            {"vector_kind", a.kind},
            {"sim_threshold", fmt_num(a.threshold)},
            {"branch_width", std::to_string(a.width)},
            {"time_budget", format_budget(parse_budget(a.budget))},
            {"max_phrase_chars", std::to_string(a.max_chars)},
            {"cft_epsilon", fmt_num(a.epsilon)},
            {"flatness_threshold", fmt_num(a.flatness)},
            {"max_zero_fraction", fmt_num(a.max_zero_fraction)},
            {"alternates", a.alternates ? "true" : "false"},
            {"alternate_floor", a.alternate_floor},
            {"force_root", a.force ? "true" : "false"},
            {"bidirectional", a.bidirectional ? "true" : "false"},
            {"trace", a.trace ? "true" : "false"},
            {"model", a.model_path.empty() ? "(heuristic)" : a.model_path},
        });
        return 0;
      }
      Gram root = parse_gram_arg(a.root, "--root", 3);
      GramStore store = load_sealed_store(a.store_path);
      SelectorModel model;
      const SelectorModel* model_ptr = nullptr;
      if (!a.model_path.empty()) {
        model = SelectorModel::load(a.model_path);
        model_ptr = &model;
      }
      ConnectorConfig cfg = make_connector_config(a, model_ptr, &err);
      cfg.from_day = from;
      cfg.num_days = a.days;
      ConnectResult result = connect(root, cfg, store);
      err << "kind=" << to_string(result.kind_used) << " nodes=" << result.nodes_expanded
          << (result.budget_exhausted ? " budget-exhausted" : "") << '\n';
      auto phrases = apply_alternate_policy(std::move(result.phrases), cfg);
      std::size_t limit = a.alternates ? phrases.size() : std::min<std::size_t>(1, phrases.size());
      for (std::size_t i = 0; i < limit; ++i)
        out << fmt6(phrases[i].sim_path) << '\t' << phrases[i].utf8() << '\n';
      return 0;
    }

    if (app.got_subcommand(trends_cmd)) {
      DayIndex from = trends_args.from.empty() ? 0 : parse_date_arg(trends_args.from, "--from");
      DayIndex to = trends_args.to.empty() ? 0 : parse_date_arg(trends_args.to, "--to");
      if (want_config) {
        print_config(out, {
            {"store", trends_args.store_path},
            {"from", trends_args.from},
            {"to", trends_args.to},
            {"trend_threshold", fmt_num(trends_args.threshold)},
            {"trend_baseline", trends_args.baseline},
            {"trend_epsilon", fmt_num(trends_args.epsilon)},
            {"threads", std::to_string(trends_args.threads)},
            {"connect", trends_args.connect ? "true" : "false"},
            {"vector_kind", trends_args.connect_args.kind},
            {"sim_threshold", fmt_num(trends_args.connect_args.threshold)},
            {"branch_width", std::to_string(trends_args.connect_args.width)},
            {"time_budget", format_budget(parse_budget(trends_args.connect_args.budget))},
            {"max_phrase_chars", std::to_string(trends_args.connect_args.max_chars)},
        });
        return 0;
      }
      TrendScanConfig cfg;
      cfg.from_day = from;
      cfg.to_day = to;
      cfg.threshold = trends_args.threshold;
      cfg.epsilon = trends_args.epsilon;
      cfg.threads = trends_args.threads;
      if (trends_args.baseline == "prev") cfg.baseline = BaselineMode::PrevDay;
      else if (trends_args.baseline == "avg7") cfg.baseline = BaselineMode::TrailingAvg;
      else throw UsageError("--baseline must be prev or avg7");

      GramStore store = load_sealed_store(trends_args.store_path);
      std::vector<TrendHit> hits = scan(store, cfg);
      if (!trends_args.connect) {
        for (const TrendHit& h : hits)
          out << h.gram.utf8() << '\t' << format_date(h.spike_day) << '\t' << fmt6(h.change_rate)
              << '\n';
        return 0;
      }
      ConnectorConfig ccfg = make_connector_config(trends_args.connect_args, nullptr, nullptr);
      auto results = trends_to_phrases(hits, store, ccfg, trends_args.threads);
      for (const TrendPhraseResult& r : results) {
        out << r.hit.gram.utf8() << '\t' << format_date(r.hit.spike_day) << '\t'
            << fmt6(r.hit.change_rate) << '\n';
        if (!r.connected) {
          out << "  invalid-root\t" << to_string(r.verdict.reason) << '\n';
          continue;
        }
        for (const PhraseCandidate& p : r.phrases)
          out << "  " << fmt6(p.sim_path) << '\t' << p.utf8() << '\n';
      }
      return 0;
    }

    if (app.got_subcommand(eval_cmd)) {
      if (want_config) {
        print_config(out, {
            {"results", eval_args.results},
            {"lexicon", eval_args.lexicon},
            {"judgments", eval_args.judgments.empty() ? "(none)" : eval_args.judgments},
            {"strata", eval_args.strata.empty() ? "(none)" : eval_args.strata},
        });
        return 0;
      }
      std::ifstream rf(eval_args.results, std::ios::binary);
      if (!rf) throw std::runtime_error("cannot open: " + eval_args.results);
      std::vector<EvalRun> runs;
      std::string line;
      std::uint64_t line_no = 0;
      bool have_peaks = true;
      while (std::getline(rf, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string root, result, peak;
        if (!std::getline(ss, root, '\t') || !std::getline(ss, result, '\t'))
          throw std::runtime_error("bad results line " + std::to_string(line_no));
        EvalRun run;
        run.root = root;
        if (result == "INVALID_ROOT") run.invalid_root = true;
        else run.result = result;
        if (std::getline(ss, peak, '\t')) run.peak_frequency = std::stoll(peak);
        else have_peaks = false;
        runs.push_back(std::move(run));
      }
      Lexicon lexicon;
      std::ifstream lx(eval_args.lexicon, std::ios::binary);
      if (!lx) throw std::runtime_error("cannot open: " + eval_args.lexicon);
      while (std::getline(lx, line)) {
        std::string p = trim_phrase(line);
        if (!p.empty()) lexicon.insert(p);
      }
      Judgments judgments;
      if (!eval_args.judgments.empty()) {
        std::ifstream jf(eval_args.judgments, std::ios::binary);
        if (!jf) throw std::runtime_error("cannot open: " + eval_args.judgments);
        while (std::getline(jf, line)) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty()) continue;
          auto t = line.find('\t');
          if (t == std::string::npos) throw std::runtime_error("bad judgments line: " + line);
          judgments[trim_phrase(line.substr(0, t))] = line.substr(t + 1) == "1";
        }
      }
      std::vector<std::int64_t> thresholds;
      if (!eval_args.strata.empty()) {
        if (!have_peaks)
          throw UsageError("--strata needs a third peak-frequency column in the results file");
        std::stringstream ss(eval_args.strata);
        std::string tok;
        while (std::getline(ss, tok, ',')) thresholds.push_back(std::stoll(tok));
      }

      EvalReport total = evaluate(runs, lexicon, judgments);
      std::vector<Stratum> strata;
      if (!thresholds.empty()) strata = stratify(runs, lexicon, judgments, thresholds);

      // aligned table
      auto row = [&](const std::string& name, const EvalReport& r) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-8s %8llu %8llu %8llu %8llu %8llu %8.3f %8.3f\n",
                      name.c_str(), static_cast<unsigned long long>(r.valid_roots),
                      static_cast<unsigned long long>(r.lexicon_matches),
                      static_cast<unsigned long long>(r.human_correct_extra),
                      static_cast<unsigned long long>(r.wrong),
                      static_cast<unsigned long long>(r.invalid_roots), r.lcp, r.up);
        out << buf;
      };
      char hdr[160];
      std::snprintf(hdr, sizeof hdr, "%-8s %8s %8s %8s %8s %8s %8s %8s\n", "stratum", "valid",
                    "match", "correct", "wrong", "invalid", "LCP", "UP");
      out << hdr;
      for (const Stratum& s : strata) row(">" + std::to_string(s.threshold), s.report);
      row("total", total);

      // machine-readable records
      for (const EvalItem& item : total.ledger)
        out << "item\t" << item.run.root << '\t'
            << (item.run.invalid_root ? "INVALID_ROOT" : item.run.result) << '\t'
            << to_string(item.verdict) << '\n';
      auto record = [&](const std::string& name, const EvalReport& r) {
        out << "summary\t" << name << '\t' << r.valid_roots << '\t' << r.lexicon_matches << '\t'
            << r.human_correct_extra << '\t' << r.wrong << '\t' << r.invalid_roots << '\t'
            << fmt6(r.lcp) << '\t' << fmt6(r.up) << '\n';
      };
      for (const Stratum& s : strata) record(">" + std::to_string(s.threshold), s.report);
      record("total", total);
      return 0;
    }

    err << app.help();
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidRootError& e) {
    err << "error: " << e.what() << " (flatness=" << fmt6(e.verdict.flatness)
        << " zero_fraction=" << fmt6(e.verdict.zero_fraction) << "); --force overrides\n";
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pointillist
