#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "test_util.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(SSGR_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 512> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

std::string q(const std::string& s) { return "'" + s + "'"; }

}  // namespace

TEST_CASE("check proves the gcd pair infeasible", "[cli]") {
  auto r = run("check --ssg " + q(testutil::data_path("gcd.ssg")) + " --pair G_lt,G_gt --vars x,y");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("verdict: infeasible-proved") != std::string::npos);
}

TEST_CASE("check against itself is inconclusive", "[cli]") {
  auto r = run("check --ssg " + q(testutil::data_path("gcd.ssg")) + " --pair G_lt,G_lt --vars x,y");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("verdict: unknown") != std::string::npos);
}

TEST_CASE("transform writes the grammar and a summary", "[cli]") {
  std::string out = "/tmp/ssgr_cli_test_out.rtg";
  auto r = run("transform --ssg " + q(testutil::data_path("gcd.ssg")) +
               " --nt G_lt --vars x,y -o " + out);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("2 nonterminals, 6 rules") != std::string::npos);
  CHECK(r.output.find("<0,s>/1") != std::string::npos);
  ssgr::Rtg g = ssgr::parse_rtg(testutil::slurp(out));
  CHECK(g.initial == "G_lt^(x,y)");
  CHECK(g.rules.size() == 6);
  std::remove(out.c_str());
}

TEST_CASE("transform rejects the doubling grammar", "[cli]") {
  auto r = run("transform --ssg " + q(testutil::data_path("g5.ssg")) + " --nt G_xy --vars x,y");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("assumption violated") != std::string::npos);
  CHECK(r.output.find("position 1") != std::string::npos);
  CHECK(r.output.find("(s(x'), s(s(y')))") != std::string::npos);
}

TEST_CASE("usage errors exit with 1", "[cli]") {
  CHECK(run("transform --ssg " + q(testutil::data_path("gcd.ssg")) +
            " --nt missing --vars x,y")
            .exit_code == 1);
  CHECK(run("transform --ssg /nonexistent.ssg --nt G --vars x,y").exit_code == 1);
  CHECK(run("bogus-subcommand").exit_code == 1);
  CHECK(run("transform").exit_code == 1);
  // ill-formed goal clause: a defined symbol on the right-hand side
  CHECK(run("narrow --trs " + q(testutil::data_path("gcd.trs")) +
            " --goal 'x < y -> gcd(x,y)' --depth 2")
            .exit_code == 1);
}

TEST_CASE("oracle runs both modes", "[cli]") {
  auto r = run("oracle --ssg " + q(testutil::data_path("gcd.ssg")) +
               " --nt G_lt --vars x,y --expr-bound 3 --ground-depth 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("counterexamples: 0") != std::string::npos);

  auto n = run("oracle --trs " + q(testutil::data_path("gcd.trs")) +
               " --goal 'x < x -> true' --depth 10");
  CHECK(n.exit_code == 0);
  CHECK(n.output.find("no solutions found up to depth 10") != std::string::npos);
}

TEST_CASE("eval prints the bounded substitution set", "[cli]") {
  auto r = run("eval --ssg " + q(testutil::data_path("gcd.ssg")) + " --nt G_lt --bound 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("2 substitutions") != std::string::npos);
  CHECK(r.output.find("{x -> 0, y -> s(y2)}") != std::string::npos);
}

TEST_CASE("narrow prints solutions with derivations", "[cli]") {
  auto r = run("narrow --trs " + q(testutil::data_path("gcd.trs")) +
               " --goal 'x < y -> true' --depth 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("solution") != std::string::npos);
  CHECK(r.output.find("~>") != std::string::npos);
}

TEST_CASE("the empty-language grammar is proved infeasible", "[cli]") {
  auto r = run("check --ssg " + q(testutil::data_path("xx.ssg")) + " --pair G_xx,G_xx --vars x,x");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("verdict: infeasible-proved") != std::string::npos);
}

TEST_CASE("several pairs are checked together", "[cli]") {
  auto r = run("check --ssg " + q(testutil::data_path("gcd.ssg")) +
               " --pair G_lt,G_gt --pair G_gt,G_lt --vars x,y");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("overall: infeasible-proved") != std::string::npos);
  // one inconclusive pair downgrades the overall verdict
  auto m = run("check --ssg " + q(testutil::data_path("gcd.ssg")) +
               " --pair G_lt,G_gt --pair G_lt,G_lt --vars x,y");
  CHECK(m.exit_code == 3);
  CHECK(m.output.find("overall: unknown") != std::string::npos);
}

TEST_CASE("oracle at bound zero passes vacuously", "[cli]") {
  auto r = run("oracle --ssg " + q(testutil::data_path("gcd.ssg")) +
               " --nt G_lt --vars x,y --expr-bound 0 --ground-depth 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("substitutions: 0") != std::string::npos);
  CHECK(r.output.find("counterexamples: 0") != std::string::npos);
}

TEST_CASE("output bytes are deterministic across runs", "[cli]") {
  std::string args = "transform --ssg " + q(testutil::data_path("gcd.ssg")) + " --nt G_gt --vars x,y";
  auto a = run(args);
  auto b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  auto c = run("check --ssg " + q(testutil::data_path("gcd.ssg")) + " --pair G_lt,G_gt --vars x,y");
  auto d = run("check --ssg " + q(testutil::data_path("gcd.ssg")) + " --pair G_lt,G_gt --vars x,y");
  // timing line differs; compare everything before it
  auto cut = [](const std::string& s) { return s.substr(0, s.find("elapsed:")); };
  CHECK(cut(c.output) == cut(d.output));
}
