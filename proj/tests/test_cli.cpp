#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include "liederiv/cli.hpp"

using liederiv::run_cli;

static std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

TEST_CASE("documented examples") {
  auto b = run_cli({"bracket", "--symbols", "p1", "x1"});
  CHECK(b.code == 0);
  CHECK(trim(b.out) == "1");
  auto d = run_cli({"derive", "--family", "s", "--P", "0", "--kappa", "1", "--omega", "0", "--on", "p1^2"});
  CHECK(d.code == 0);
  CHECK(trim(d.out) == "p1^2");
  auto g = run_cli({"group", "--family", "s", "--P", "p1^2", "--t", "1"});
  CHECK(g.code == 2);
  CHECK((g.out + g.err).find("NotIntegrable: P not in S_1") != std::string::npos);
}

TEST_CASE("operator commands") {
  CHECK(trim(run_cli({"compose", "d1", "x1"}).out) == "1 + x1 * d1");
  CHECK(trim(run_cli({"bracket", "--ops", "x1*d1", "d1"}).out) == "-d1");
  CHECK(trim(run_cli({"symbol", "--order", "3", "x1*d1^2 + d1"}).out) == "0");
  CHECK(trim(run_cli({"symbol", "x1*d1^2 + d1"}).out) == "x1 * p1^2");
  CHECK(run_cli({"symbol", "--order", "1", "x1*d1^2"}).code == 2);
  CHECK(trim(run_cli({"quantize", "x1*p1"}).out) == "x1 * d1");
  CHECK(trim(run_cli({"conjugate", "d1"}).out) == "d1");
  CHECK(trim(run_cli({"--dim", "2", "normalize", "--family", "d", "--P", "d1 + x1", "--omega", "0"}).out) ==
        "d{P = d1; omega = (-1) * dx1}");
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"bracket", "--symbols", "p1 +", "x1"}).code == 1);
  CHECK(run_cli({"bracket", "--symbols", "p2", "x1"}).code == 1);
  CHECK(run_cli({"--dim", "4", "bracket", "--symbols", "p1", "x1"}).code == 1);
  CHECK(run_cli({"no-such-command"}).code == 1);
  CHECK(run_cli({"--dim", "2", "derive", "--family", "d", "--P", "0", "--omega", "x2*dx1 - x1*dx2", "--on", "d1"})
            .code == 2);
  CHECK(run_cli({"div-flow", "--field", "x1*d1", "--t", "1"}).code == 2);
  auto sq = run_cli({"check-derivation", "--family", "square", "--trials", "10"});
  CHECK(sq.code == 3);
  CHECK(sq.out.find("witness") != std::string::npos);
  CHECK(run_cli({"check-derivation", "--family", "d", "--P", "x1*d1^2", "--omega", "x1*dx1", "--trials", "10"}).code ==
        0);
}

TEST_CASE("flows and groups") {
  CHECK(trim(run_cli({"flow", "--field", "d1", "--t", "2"}).out) == "affine{A = [[1]]; b = [2]}");
  CHECK(trim(run_cli({"jacobian", "--map", "affine{A = [[2]]; b = [0]}"}).out) == "2");
  auto df = run_cli({"--approx", "div-flow", "--field", "x1*d1", "--t", "2"});
  CHECK(df.code == 0);
  CHECK(df.out.find("2.0") != std::string::npos);
  CHECK(run_cli({"group", "--family", "d", "--P", "d1^2", "--t", "1"}).code == 2);
  CHECK(run_cli({"generator-check", "--family", "d", "--P", "d1", "--omega", "x1*dx1"}).code == 0);
  CHECK(run_cli({"--approx", "generator-check", "--family", "d1", "--Y", "x1*d1", "--kappa", "1/2"}).code == 0);
  CHECK(run_cli({"lemma1", "--i", "0", "--k", "1", "--algebra", "s"}).code == 0);
  CHECK(run_cli({"verify-tables", "--trials", "3"}).code == 0);
}

TEST_CASE("json output") {
  auto r = run_cli({"--json", "bracket", "--ops", "d1", "x1"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"input", "result", "mode", "seed", "witnesses"}) CHECK(j.contains(key));
  CHECK(j["result"] == "1");
  CHECK(j["mode"] == "exact");
  auto f = run_cli({"--json", "check-derivation", "--family", "square", "--trials", "10"});
  CHECK(f.code == 3);
  auto jf = nlohmann::json::parse(f.out);
  CHECK_FALSE(jf["witnesses"].empty());
}

TEST_CASE("seeded runs are deterministic") {
  auto a = run_cli({"--seed", "7", "check-derivation", "--family", "square", "--trials", "12"});
  auto b = run_cli({"--seed", "7", "check-derivation", "--family", "square", "--trials", "12", "--workers", "3"});
  CHECK(a.out == b.out);
  auto c = run_cli({"--seed", "8", "check-derivation", "--family", "square", "--trials", "12"});
  CHECK(a.out != c.out);
}
