#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ltsx/ltree_io.hpp"

#ifndef LTSX_CLI_PATH
#error "LTSX_CLI_PATH must point at the ltsx binary"
#endif
#ifndef LTSX_FIXTURE_DIR
#error "LTSX_FIXTURE_DIR must point at the fixture directory"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string scratch_path(const std::string& name) {
  static const std::string dir = [] {
    std::string d = "/tmp/ltsx_cli_test_" + std::to_string(::getpid());
    std::string cmd = "mkdir -p " + d;
    REQUIRE(std::system(cmd.c_str()) == 0);
    return d;
  }();
  return dir + "/" + name;
}

RunResult run(const std::string& args) {
  static int counter = 0;
  std::string outfile = scratch_path("out" + std::to_string(counter++));
  std::string cmd =
      std::string(LTSX_CLI_PATH) + " " + args + " > " + outfile + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(outfile, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = std::move(ss).str();
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(LTSX_FIXTURE_DIR) + "/" + name;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("--help").exit_code == 0);
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("build").exit_code == 2);                       // missing -i
  CHECK(run("build -i x -f yaml").exit_code == 2);          // bad format
  CHECK(run("build -i x -c magic").exit_code == 2);         // bad codec
  CHECK(run("query").exit_code == 2);  // missing -s and op
}

TEST_CASE("missing or malformed inputs exit with code 1") {
  RunResult r = run("build -i /nonexistent.ltree");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.out, "error:"));

  std::string bad = scratch_path("bad.ltree");
  std::ofstream(bad) << "(a (b";
  CHECK(run("build -i " + bad).exit_code == 1);
}

TEST_CASE("build reports sizes and writes a loadable container") {
  std::string container = scratch_path("catalog.ltsx");
  RunResult r = run("build -i " + fixture("catalog.ltree") + " -k 1 -m 2 -o " +
                    container);
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.out, "\"nodes\": 15"));
  CHECK(contains(r.out, "\"file_bytes\""));
  CHECK(contains(r.out, "\"entropy_bits\""));

  RunResult csv = run("build -i " + fixture("catalog.ltree") + " --csv");
  REQUIRE(csv.exit_code == 0);
  CHECK(contains(csv.out, "section,bytes"));
  CHECK(contains(csv.out, "total,"));

  RunResult dump = run("build -i " + fixture("catalog.ltree") +
                       " --dump-clusters");
  REQUIRE(dump.exit_code == 0);
  CHECK(contains(dump.out, "cluster,symbol,first,size,fnv1a"));

  SUBCASE("queries answer on the container") {
    CHECK(run("query -s " + container + " size").out == "15\n");
    CHECK(run("query -s " + container + " label-token 0").out == "catalog\n");
    CHECK(run("query -s " + container + " parent 0").out == "none\n");
    CHECK(run("query -s " + container + " parent 2").out == "1\n");
    CHECK(run("query -s " + container + " degree 0").out == "4\n");
    CHECK(run("query -s " + container + " child 0 1").out == "5\n");
    CHECK(run("query -s " + container + " next-sibling 1").out == "5\n");
    CHECK(run("query -s " + container + " depth 2").out == "2\n");
    CHECK(run("query -s " + container + " lca 2 6").out == "0\n");
    CHECK(run("query -s " + container + " level-ancestor 2 1").out == "1\n");
    CHECK(run("query -s " + container + " level-ancestor 2 3").out == "none\n");
    // Two book elements before the magazines: childselect by label.
    CHECK(run("query -s " + container + " childselect-label 0 2 1").out == "5\n");
    CHECK(run("query -s " + container + " childselect-label 0 3 1").out == "none\n");

    CHECK(run("query -s " + container + " size 7").exit_code == 2);
    CHECK(run("query -s " + container + " label").exit_code == 2);
    CHECK(run("query -s " + container + " made-up-op 0").exit_code == 2);
    CHECK(run("query -s " + container + " label 99").exit_code == 1);
  }

  SUBCASE("decode round-trips the document") {
    std::string back = scratch_path("back.ltree");
    REQUIRE(run("decode -s " + container + " -o " + back).exit_code == 0);
    ltsx::LabeledTree a = ltsx::parse_ltree(read_all(fixture("catalog.ltree")));
    ltsx::LabeledTree b = ltsx::parse_ltree(read_all(back));
    CHECK(a.equal(b));

    RunResult to_stdout = run("decode -s " + container);
    CHECK(to_stdout.exit_code == 0);
    CHECK(ltsx::parse_ltree(to_stdout.out).equal(a));
  }

  SUBCASE("corrupted containers are refused") {
    std::string broken = scratch_path("broken.ltsx");
    std::string bytes = read_all(container);
    bytes[bytes.size() / 2] ^= 0x20;
    std::ofstream(broken, std::ios::binary) << bytes;
    RunResult r2 = run("query -s " + broken + " size");
    CHECK(r2.exit_code == 1);
    CHECK(contains(r2.out, "error:"));
  }
}

TEST_CASE("xml input produces the same skeleton as the ltree fixture") {
  std::string c1 = scratch_path("fromxml.ltsx");
  std::string c2 = scratch_path("fromltree.ltsx");
  REQUIRE(run("build -i " + fixture("catalog.xml") + " -f xml -o " + c1)
              .exit_code == 0);
  REQUIRE(run("build -i " + fixture("catalog.ltree") + " -o " + c2)
              .exit_code == 0);
  RunResult a = run("decode -s " + c1);
  RunResult b = run("decode -s " + c2);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(ltsx::parse_ltree(a.out).equal(ltsx::parse_ltree(b.out)));
}

TEST_CASE("verify passes on the fixtures for both codecs") {
  for (std::string extra :
       {std::string(" -c plain -k 1 -m 2"), std::string(" -c boosted -k 1 -m 3 -d 2"),
        std::string(" -m 1")}) {
    RunResult r = run("verify -i " + fixture("catalog.ltree") + extra);
    CAPTURE(extra);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "verify passed"));
    CHECK_FALSE(contains(r.out, "FAIL"));
  }
  RunResult x = run("verify -i " + fixture("catalog.xml") + " -f xml -c boosted");
  CHECK(x.exit_code == 0);
  CHECK(contains(x.out, "verify passed"));
}

TEST_CASE("entropy emits one CSV row per context length") {
  RunResult r = run("entropy -i " + fixture("catalog.ltree") + " --kmax 2");
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "k,h0,hk_labels,h_tree,hk_tree_given_labels,hk_labels_given_tree");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("bench prints a timing table quickly") {
  RunResult r = run("bench -i " + fixture("catalog.ltree") + " --iters 500");
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.out, "op,iters,ns_per_op"));
  CHECK(contains(r.out, "label,"));
  CHECK(contains(r.out, "decode_full,"));
}
