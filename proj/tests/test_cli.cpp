#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "presburger/cli.hpp"

using namespace presburger;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = runCli(args, out, err);
  return {code, out.str(), err.str()};
}

json cliJson(std::vector<std::string> args) {
  args.push_back("--json");
  Run r = cli(args);
  json j = json::parse(r.out); // must be a single well-formed object
  REQUIRE(j.contains("status"));
  REQUIRE(j.contains("payload"));
  REQUIRE(j.contains("diagnostics"));
  return j;
}

} // namespace

TEST_CASE("exit codes") {
  CHECK(cli({"decide", "forall x. x >= 0"}).code == 0);
  CHECK(cli({"decide", "exists x. x + 1 = 0"}).code == 1); // ran, answered no
  CHECK(cli({"decide", "exists x. x +"}).code == 2);       // malformed formula
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"decide", "--wat", "x = x"}).code == 2);
  CHECK(cli({"qe"}).code == 2); // missing argument
}

TEST_CASE("qe and decide") {
  Run r = cli({"qe", "exists y. (x = 2*y & x >= 4)"});
  CHECK(r.code == 0);
  CHECK(r.out.find("status: ok") != std::string::npos);

  json j = cliJson({"qe", "exists y. x = 2*y"});
  CHECK(j["status"] == "ok");
  std::string qf = j["payload"]["formula"].get<std::string>();
  // result must be quantifier-free and equivalent: spot check a few points
  for (long x : {0, 1, 2, 7, 8}) {
    std::ostringstream probe;
    probe << "exists x. (x = " << x << " & (" << qf << "))";
    CHECK(cli({"decide", probe.str()}).code == (x % 2 == 0 ? 0 : 1));
  }

  j = cliJson({"decide", "forall x. exists y. y = x + 1"});
  CHECK(j["payload"]["value"] == true);
}

TEST_CASE("decompose and dim") {
  json j = cliJson({"dim", "-m", "2", "x1 >= 0 & x2 >= 0"});
  CHECK(j["payload"]["dimension"] == 2);

  j = cliJson({"decompose", "-m", "1", "x1 = 3"});
  CHECK(j["payload"]["dimension"] == 0);
  REQUIRE(j["payload"]["pieces"].size() == 1);
  CHECK(j["payload"]["pieces"][0]["base"] == json::array({3}));

  // quantified input goes through elimination first
  j = cliJson({"dim", "-m", "1", "exists y. x1 = 2*y"});
  CHECK(j["payload"]["dimension"] == 1);

  CHECK(cli({"dim", "x1 = 3"}).code == 2); // -m missing
}

TEST_CASE("order analysis subcommands") {
  json j = cliJson({"validate", "catalog:omega"});
  CHECK(j["status"] == "ok");
  CHECK(j["payload"]["ok"] == true);
  CHECK(j["payload"]["axioms"].size() >= 4);

  j = cliJson({"galaxy", "--point", "4,1", "catalog:growing_boxes"});
  CHECK(j["payload"]["type"] == "F(2)");
  CHECK(j["payload"]["size"] == 2);

  j = cliJson({"galaxy", "--point", "0", "catalog:zeta"});
  CHECK(j["payload"]["type"] == "Z");

  j = cliJson({"condense", "catalog:lex_omega2"});
  CHECK(j["payload"]["dimension"] == 1);

  j = cliJson({"rank", "catalog:omega_plus_omega_star"});
  CHECK(j["payload"]["rank"] == 1);

  j = cliJson({"catalog", "list"});
  bool sawZeta = false;
  for (const auto& n : j["payload"]["entries"]) sawZeta = sawZeta || n == "zeta";
  CHECK(sawZeta);

  j = cliJson({"catalog", "get", "omega"});
  CHECK(j["payload"]["name"] == "omega");
  CHECK(cli({"catalog", "get", "nope"}).code == 2);
}

TEST_CASE("catalog reference and file path are interchangeable") {
  json entry = cliJson({"catalog", "get", "finite5"})["payload"];
  std::string path = "cli_finite5_tmp.json";
  {
    std::ofstream f(path);
    f << entry.dump();
  }
  json a = cliJson({"rank", "catalog:finite5"});
  json b = cliJson({"rank", path});
  CHECK(a["payload"] == b["payload"]);
  std::remove(path.c_str());

  CHECK(cli({"rank", "no_such_file.json"}).code == 2);
  CHECK(cli({"validate", "catalog:no_such_entry"}).code == 2);
}

TEST_CASE("counting subcommands") {
  json j = cliJson({"count", "-A", "1,1", "-u", "5"});
  CHECK(j["payload"]["finite"] == true);
  CHECK(j["payload"]["count"] == 6);

  j = cliJson({"count", "-A", "1,-1", "-u", "0"});
  CHECK(j["payload"]["finite"] == false);

  j = cliJson({"count", "fit", "-A", "1,1", "--range", "0:12"});
  CHECK(j["payload"]["degree"] <= 1);
  CHECK(j["payload"]["degreeBoundHolds"] == true);
  REQUIRE(j["payload"]["pieces"].size() >= 1);
  CHECK(j["payload"]["pieces"][0].contains("poly"));

  CHECK(cli({"count", "-A", "1,x", "-u", "5"}).code == 2);
  CHECK(cli({"count", "-A", "1,1;1", "-u", "5,5"}).code == 2); // ragged matrix
  CHECK(cli({"count", "fit", "-A", "1,1", "--range", "9:1"}).code == 2);
}

TEST_CASE("lexrep subcommands") {
  json j = cliJson({"lexrep", "build", "catalog:lex_omega2", "--prefix", "60"});
  CHECK(j["status"] == "ok");
  CHECK(j["payload"]["verification"]["ok"] == true);
  CHECK(j["payload"]["representation"]["r"] == 2);

  std::string path = "cli_lexrep_tmp.json";
  {
    std::ofstream f(path);
    f << j["payload"]["representation"].dump();
  }
  json v = cliJson({"lexrep", "verify", "catalog:lex_omega2", path, "--prefix", "60"});
  CHECK(v["payload"]["ok"] == true);
  CHECK(v["payload"]["checked"] == 60);

  // same file against the wrong order: fail, exit 1
  Run wrong = cli({"lexrep", "verify", "catalog:finite5", path, "--prefix", "60"});
  CHECK(wrong.code == 1);
  std::remove(path.c_str());

  CHECK(cli({"lexrep", "build"}).code == 2);
}

TEST_CASE("human output and diagnostics channels") {
  Run r = cli({"galaxy", "--point", "0", "catalog:omega"});
  CHECK(r.code == 0);
  CHECK(r.out.find("type: N") != std::string::npos);
  CHECK(r.err.empty());

  Run bad = cli({"decide", "exists x. x +"});
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty()); // diagnostic on stderr
  CHECK(bad.out.find("status: error") != std::string::npos);

  json j = cliJson({"decide", "exists x. x +"});
  CHECK(j["status"] == "error");
  CHECK(j["diagnostics"].size() == 1);
}
