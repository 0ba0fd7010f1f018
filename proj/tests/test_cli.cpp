#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "pointillist/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::vector<const char*> argv{"pointillist"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int status = pointillist::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pointillist-test-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
  std::string file(const char* name) const { return (path / name).string(); }
  static inline int counter = 0;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit 2 with diagnostics on the error stream") {
  auto missing = run({"connect", "--from", "2011-07-23", "--days", "5"});
  CHECK(missing.status == 2);
  CHECK(missing.out.empty());
  CHECK(!missing.err.empty());

  auto unknown = run({"connect", "--root", "abc", "--bogus-flag"});
  CHECK(unknown.status == 2);
  CHECK(unknown.err.find("--bogus-flag") != std::string::npos);

  auto no_sub = run({});
  CHECK(no_sub.status == 2);
}

TEST_CASE("--print-config echoes the published defaults") {
  auto r = run({"--print-config"});
  CHECK(r.status == 0);
  CHECK(r.out.find("sim_threshold 0.97") != std::string::npos);
  CHECK(r.out.find("flatness_threshold 0.98") != std::string::npos);
  CHECK(r.out.find("branch_width 5") != std::string::npos);
  CHECK(r.out.find("time_budget 60s") != std::string::npos);
  CHECK(r.out.find("trend_threshold 100") != std::string::npos);
  CHECK(r.out.find("max_phrase_chars 32") != std::string::npos);
}

TEST_CASE("subcommand --print-config reflects flag overrides") {
  auto r = run({"connect", "--root", "共和国", "--from", "2011-07-23", "--days", "47",
                "--threshold", "0.9", "--print-config"});
  CHECK(r.status == 0);
  CHECK(r.out.find("sim_threshold 0.9") != std::string::npos);
  CHECK(r.out.find("branch_width 5") != std::string::npos);
  CHECK(r.out.find("root 共和国") != std::string::npos);
  CHECK(r.out.find("time_budget 60s") != std::string::npos);
}

TEST_CASE("full pipeline: synth, ingest, count, sim, validate-root, connect, trends, eval") {
  TempDir tmp;

  // one strong phrase with a noisy baseline, spiking mid-corpus
  write_file(tmp.file("spec.jsonl"),
             R"({"phrase":"千山万水流","profile":[3,1,4,2,5,1,2,400,3,1,4,2,3,1,2]})" "\n");
  auto synth = run({"synth", "--spec", tmp.file("spec.jsonl"), "--seed", "7", "--days", "15",
                    "--start-date", "2011-07-23", "--out", tmp.file("posts.jsonl"),
                    "--bg-grams", "300", "--bg-rate", "8"});
  REQUIRE(synth.status == 0);
  CHECK(fs::exists(tmp.file("posts.jsonl")));
  CHECK(fs::exists(tmp.file("posts.jsonl") + ".manifest.json"));

  auto ingest = run({"ingest", "--in", tmp.file("posts.jsonl"), "--store", tmp.file("store.tsv")});
  REQUIRE(ingest.status == 0);
  CHECK(ingest.out.empty());  // results stream stays clean

  auto count = run({"count", "--in", tmp.file("posts.jsonl"), "--out", tmp.file("counts.tsv")});
  REQUIRE(count.status == 0);
  auto counts = read_file(tmp.file("counts.tsv"));
  CHECK(counts.find("千山万\t2011-07-30\t400") != std::string::npos);

  auto vroot = run({"validate-root", "--store", tmp.file("store.tsv"), "--gram", "千山万",
                    "--from", "2011-07-23", "--days", "15"});
  REQUIRE(vroot.status == 0);
  CHECK(vroot.out.find("OK") != std::string::npos);
  CHECK(vroot.out.find("flatness=") != std::string::npos);
  CHECK(vroot.out.find("zero_fraction=") != std::string::npos);

  auto sim = run({"sim", "--store", tmp.file("store.tsv"), "--gram-a", "千山万", "--gram-b",
                  "山万水", "--kind", "ft", "--from", "2011-07-23", "--days", "15"});
  REQUIRE(sim.status == 0);
  CHECK(sim.out == "1.000000\n");  // identical series

  auto connect = run({"connect", "--store", tmp.file("store.tsv"), "--root", "千山万", "--from",
                      "2011-07-23", "--days", "15", "--budget", "off"});
  REQUIRE(connect.status == 0);
  CHECK(connect.out.find("\t千山万水流\n") != std::string::npos);

  auto trends = run({"trends", "--store", tmp.file("store.tsv"), "--from", "2011-07-23", "--to",
                     "2011-08-06", "--threshold", "50", "--baseline", "prev"});
  REQUIRE(trends.status == 0);
  CHECK(trends.out.find("千山万\t2011-07-30\t") != std::string::npos);

  auto trends_connect =
      run({"trends", "--store", tmp.file("store.tsv"), "--from", "2011-07-23", "--to",
           "2011-08-06", "--threshold", "50", "--connect", "--budget", "off"});
  REQUIRE(trends_connect.status == 0);
  CHECK(trends_connect.out.find("千山万水流") != std::string::npos);

  write_file(tmp.file("results.tsv"), "千山万\t千山万水流\t400\n石头记\tINVALID_ROOT\t3\n");
  write_file(tmp.file("lexicon.txt"), "千山万水流\n");
  auto eval = run({"eval", "--results", tmp.file("results.tsv"), "--lexicon",
                   tmp.file("lexicon.txt"), "--strata", "99,4"});
  REQUIRE(eval.status == 0);
  CHECK(eval.out.find("summary\ttotal\t1\t1\t0\t0\t1\t1.000000\t1.000000") != std::string::npos);
  CHECK(eval.out.find("item\t石头记\tINVALID_ROOT\tINVALID_ROOT") != std::string::npos);
}

TEST_CASE("connect reports invalid roots as operational errors carrying the verdict") {
  TempDir tmp;
  write_file(tmp.file("store.tsv"), "全是七\t2011-07-23\t7\n全是七\t2011-07-24\t7\n");
  auto r = run({"connect", "--store", tmp.file("store.tsv"), "--root", "全是七", "--from",
                "2011-07-23", "--days", "2"});
  CHECK(r.status == 1);
  CHECK(r.err.find("TOO_FLAT") != std::string::npos);

  auto forced = run({"connect", "--store", tmp.file("store.tsv"), "--root", "全是七", "--from",
                     "2011-07-23", "--days", "2", "--force"});
  CHECK(forced.status == 0);
}

TEST_CASE("train-selector fits a model file the connect command can load") {
  TempDir tmp;
  // two windows with clearly different shapes, labeled by hand
  std::string store_lines;
  for (int d = 0; d < 10; ++d)
    store_lines += "平平平\t2011-07-" + std::to_string(14 + d) + "\t50\n";
  store_lines += "猛涨词\t2011-07-14\t1\n猛涨词\t2011-07-15\t200\n";
  write_file(tmp.file("store.tsv"), store_lines);
  write_file(tmp.file("labels.tsv"),
             "平平平\t2011-07-14\t10\tFT\n"
             "猛涨词\t2011-07-14\t10\tCFT\n");
  auto train = run({"train-selector", "--labels", tmp.file("labels.tsv"), "--store",
                    tmp.file("store.tsv"), "--out", tmp.file("model.txt")});
  REQUIRE(train.status == 0);
  auto model_text = read_file(tmp.file("model.txt"));
  CHECK(model_text.find("pointillist-selector-model v1") != std::string::npos);
  CHECK(model_text.find("class FT") != std::string::npos);
  CHECK(model_text.find("class CFT") != std::string::npos);
}

TEST_CASE("ingest, trends and connect are byte-identical across thread counts") {
  TempDir tmp;
  write_file(tmp.file("spec.jsonl"),
             R"({"phrase":"东南西北风","profile":[2,1,3,2,1,2,3,150,2,1,3,2,1,2,3]})" "\n");
  auto synth = run({"synth", "--spec", tmp.file("spec.jsonl"), "--seed", "21", "--days", "15",
                    "--start-date", "2011-07-23", "--out", tmp.file("posts.jsonl"),
                    "--bg-grams", "400", "--bg-rate", "6"});
  REQUIRE(synth.status == 0);

  auto i1 = run({"ingest", "--in", tmp.file("posts.jsonl"), "--store", tmp.file("s1.tsv"),
                 "--threads", "1"});
  auto i8 = run({"ingest", "--in", tmp.file("posts.jsonl"), "--store", tmp.file("s8.tsv"),
                 "--threads", "8"});
  REQUIRE(i1.status == 0);
  REQUIRE(i8.status == 0);
  CHECK(read_file(tmp.file("s1.tsv")) == read_file(tmp.file("s8.tsv")));

  auto t1 = run({"trends", "--store", tmp.file("s1.tsv"), "--from", "2011-07-23", "--to",
                 "2011-08-06", "--threshold", "30", "--threads", "1"});
  auto t8 = run({"trends", "--store", tmp.file("s1.tsv"), "--from", "2011-07-23", "--to",
                 "2011-08-06", "--threshold", "30", "--threads", "8"});
  CHECK(t1.out == t8.out);

  auto c1 = run({"connect", "--store", tmp.file("s1.tsv"), "--root", "东南西", "--from",
                 "2011-07-23", "--days", "15", "--threads", "1", "--budget", "off"});
  auto c8 = run({"connect", "--store", tmp.file("s1.tsv"), "--root", "东南西", "--from",
                 "2011-07-23", "--days", "15", "--threads", "8", "--budget", "off"});
  CHECK(c1.out == c8.out);
  CHECK(!c1.out.empty());
}
