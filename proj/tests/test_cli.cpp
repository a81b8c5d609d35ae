// End-to-end checks of the command-line tool: pipeline composability,
// determinism, exit codes, and manifest presence. Drives the built binary.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#ifndef CREDITNET_CLI_PATH
#error "CREDITNET_CLI_PATH must point at the built binary"
#endif

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("creditnet-cli-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  std::string cmd = std::string(CREDITNET_CLI_PATH) + " " + args +
                    " > /dev/null 2> /dev/null";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("synth -> stats -> project -> mst -> fit -> corr pipeline") {
  TempDir tmp;
  std::string syn = tmp.sub("syn");
  REQUIRE(run("synth --out " + syn + " --banks 30 --firms 250 --seed 11") == 0);
  REQUIRE(fs::exists(syn + "/edges.csv"));
  REQUIRE(fs::exists(syn + "/banks.csv"));
  REQUIRE(fs::exists(syn + "/firms.csv"));
  REQUIRE(fs::exists(syn + "/manifest.jsonl"));

  std::string st = tmp.sub("stats");
  REQUIRE(run("stats --edges " + syn + "/edges.csv --attrs " + syn +
              "/banks.csv --attrs " + syn + "/firms.csv --out " + st) == 0);
  for (const char* f :
       {"summary.csv", "nodes.csv", "dist_degree_banks.csv",
        "dist_degree_firms.csv", "dist_weight.csv", "participation.csv",
        "term_share.csv", "correlations.csv", "manifest.jsonl"})
    REQUIRE(fs::exists(st + "/" + std::string(f)));

  std::string pr = tmp.sub("proj");
  REQUIRE(run("project --edges " + syn + "/edges.csv --mode bank --out " + pr) ==
          0);
  REQUIRE(fs::exists(pr + "/projection.csv"));

  // pipeline composability: the projection file feeds mst unchanged
  std::string mst = tmp.sub("mst");
  REQUIRE(run("mst --projection " + pr + "/projection.csv --out " + mst) == 0);
  REQUIRE(fs::exists(mst + "/forest.csv"));
  REQUIRE(fs::exists(mst + "/forest.dot"));
  REQUIRE(fs::exists(mst + "/forest.graphml"));
  REQUIRE(fs::exists(mst + "/hubs.csv"));

  std::string fit = tmp.sub("fit");
  REQUIRE(run("fit --table " + st + "/nodes.csv --column degree --where "
              "mode=firm --out " + fit) == 0);
  auto tail = read_file(fit + "/tailfit.csv");
  CHECK(tail.find("mu_hat") != std::string::npos);

  std::string corr = tmp.sub("corr");
  REQUIRE(run("corr --table " + st + "/nodes.csv --x degree --y strength_total"
              " --where mode=bank --method kendall --out " + corr) == 0);
  auto line = read_file(corr + "/correlation.csv");
  CHECK(line.find("kendall") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical outputs") {
  TempDir tmp;
  std::string a = tmp.sub("a");
  std::string b = tmp.sub("b");
  REQUIRE(run("synth --out " + a + " --banks 20 --firms 100 --seed 5") == 0);
  REQUIRE(run("synth --out " + b + " --banks 20 --firms 100 --seed 5") == 0);
  for (const char* f : {"edges.csv", "banks.csv", "firms.csv"})
    CHECK(read_file(a + "/" + std::string(f)) ==
          read_file(b + "/" + std::string(f)));

  std::string pa = tmp.sub("pa");
  std::string pb = tmp.sub("pb");
  REQUIRE(run("project --edges " + a + "/edges.csv --mode firm --out " + pa) == 0);
  REQUIRE(run("project --edges " + a + "/edges.csv --mode firm --out " + pb) == 0);
  CHECK(read_file(pa + "/projection.csv") == read_file(pb + "/projection.csv"));

  std::string ma = tmp.sub("ma");
  std::string mb = tmp.sub("mb");
  REQUIRE(run("mst --edges " + a + "/edges.csv --mode bank --out " + ma) == 0);
  REQUIRE(run("mst --edges " + a + "/edges.csv --mode bank --out " + mb) == 0);
  CHECK(read_file(ma + "/forest.dot") == read_file(mb + "/forest.dot"));
  CHECK(read_file(ma + "/forest.graphml") == read_file(mb + "/forest.graphml"));
}

TEST_CASE("exit codes: 1 for validation failures, 0 with --help") {
  TempDir tmp;
  SECTION("missing file") {
    CHECK(run("stats --edges /nonexistent.csv --out " + tmp.sub("x")) == 2);
  }
  SECTION("malformed rows") {
    auto bad = tmp.sub("bad.csv");
    write_file(bad,
               "bank_id,firm_id,short_term,long_term\n"
               "B1,F1,-4,1\n");
    CHECK(run("stats --edges " + bad + " --out " + tmp.sub("y")) == 1);
    CHECK_FALSE(fs::exists(tmp.sub("y") + "/summary.csv"));
  }
  SECTION("empty graph input errors without partial outputs") {
    auto empty = tmp.sub("empty.csv");
    write_file(empty, "bank_id,firm_id,short_term,long_term\n");
    CHECK(run("stats --edges " + empty + " --out " + tmp.sub("z")) == 1);
    CHECK_FALSE(fs::exists(tmp.sub("z") + "/summary.csv"));
  }
  SECTION("unknown flags and missing subcommand") {
    CHECK(run("stats --no-such-flag") == 1);
    CHECK(run("") == 1);
    CHECK(run("--help") == 0);
    CHECK(run("synth --help") == 0);
  }
  SECTION("bad mode value") {
    auto ok = tmp.sub("ok.csv");
    write_file(ok,
               "bank_id,firm_id,short_term,long_term\n"
               "B1,F1,1,1\n");
    CHECK(run("project --edges " + ok + " --mode sideways --out " +
              tmp.sub("w")) == 1);
  }
}

TEST_CASE("mst accepts edges directly and reports hubs") {
  TempDir tmp;
  auto edges = tmp.sub("edges.csv");
  write_file(edges,
             "bank_id,firm_id,short_term,long_term\n"
             "HUB,F1,1,0\nHUB,F2,1,0\nHUB,F3,1,0\n"
             "B2,F1,1,0\nB3,F2,1,0\n");
  std::string out = tmp.sub("out");
  REQUIRE(run("mst --edges " + edges + " --mode bank --out " + out) == 0);
  auto hubs = read_file(out + "/hubs.csv");
  CHECK(hubs.find("1,HUB,2") != std::string::npos);
}

TEST_CASE("project filters need attributes") {
  TempDir tmp;
  auto edges = tmp.sub("edges.csv");
  write_file(edges,
             "bank_id,firm_id,short_term,long_term\n"
             "B1,F1,1,1\n");
  CHECK(run("project --edges " + edges + " --mode bank --filter-type 2 --out " +
            tmp.sub("o")) == 1);
}
