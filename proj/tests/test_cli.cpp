#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "imitation/cli.hpp"
#include "imitation/game_json.hpp"

using namespace imitation;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("analyze") {
  const auto rps = run({"analyze", "--preset", "rps"});
  CHECK(rps.code == 0);
  CHECK(has(rps.out, "kind=MONEY_PUMP"));
  CHECK(has(rps.out, "cycle=R->P->S->R"));

  const auto chicken = run({"analyze", "--preset", "chicken"});
  CHECK(has(chicken.out, "kind=ESSENTIALLY_UNBEATABLE"));
  CHECK(has(chicken.out, "M=3\n"));
  CHECK(has(chicken.out, "delta_hat=3\n"));

  const auto gop = run({"--json", "analyze", "--preset", "ngrps_gop"});
  const Json j = Json::parse(gop.out);
  CHECK(j["schema"] == "imitation.analyze/1");
  CHECK(j["kind"] == "NO_PUMP");
  CHECK(j["bound"] == "2");
  CHECK(j["delta_hat"] == "1");

  CHECK(run({"analyze", "/nonexistent/game.json"}).code == 2);
  CHECK(run({"analyze"}).code == 2);
  CHECK(run({"analyze", "--preset", "unknown"}).code == 2);
}

TEST_CASE("analyze with witnesses and precision") {
  const auto r = run({"analyze", "--preset", "ngrps_gop", "--witness"});
  CHECK(has(r.out, "c +1, b +1"));
  const auto cournot = run({"--precision", "2", "exploit", "--preset", "bertrand_diff",
                            "--start", "0"});
  CHECK(cournot.code == 0);
}

TEST_CASE("JSON output is deterministic") {
  const auto a = run({"--json", "classify", "--preset", "coordination_outside"});
  const auto b = run({"--json", "classify", "--preset", "coordination_outside"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto v1 = run({"--json", "verify", "--trials", "50"});
  const auto v2 = run({"--json", "verify", "--trials", "50", "--serial"});
  CHECK(v1.out == v2.out);
}

TEST_CASE("classify") {
  const auto cournot = run({"classify", "--preset", "cournot_linear"});
  CHECK(cournot.code == 0);
  CHECK(has(cournot.out, "separable"));
  CHECK(has(cournot.out, "essentially unbeatable"));

  const auto nash = Json::parse(run({"--json", "classify", "--preset", "nash_demand"}).out);
  CHECK(nash["quasiconcave"]["holds"] == true);

  const auto gop = Json::parse(run({"--json", "classify", "--preset", "ngrps_gop"}).out);
  CHECK(gop["quasiconcave"]["holds"] == true);
  CHECK(gop["generalized_ordinal_potential"]["holds"] == false);
  CHECK(gop["generalized_ordinal_potential"]["cycle"][0] == Json::array({"b", "a"}));

  const auto rent = Json::parse(
      run({"--json", "classify", "--preset", "rent_seeking", "--aggregative"}).out);
  CHECK(rent["aggregative"]["quasisubmodular"]["holds"] == true);
  CHECK(rent["aggregative"]["fess_exists"] == true);

  CHECK(run({"classify", "--preset", "rps", "--aggregative"}).code == 2);
  CHECK(run({"classify", "--preset", "cournot_linear", "--search-orders"}).code == 2);
  const auto ordered = Json::parse(
      run({"--json", "classify", "--preset", "rps", "--search-orders"}).out);
  CHECK(ordered["quasiconcave"]["holds"] == false);
  CHECK(run({"classify", "--preset", "rps", "--order", "R,P"}).code == 2);
}

TEST_CASE("simulate") {
  const auto rps = run({"simulate", "--preset", "rps", "--policy", "optimal", "--y0", "R",
                        "--horizon", "9"});
  CHECK(rps.code == 0);
  CHECK(has(rps.out, "D(9)=20"));

  const auto chicken = run({"simulate", "--preset", "chicken", "--policy", "constant:swerve",
                            "--y0", "swerve"});
  CHECK(has(chicken.out, "D(10)=0"));

  const auto jsonl = run({"simulate", "--preset", "rps", "--y0", "R", "--horizon", "2",
                          "--jsonl"});
  CHECK(std::count(jsonl.out.begin(), jsonl.out.end(), '\n') == 3);
  CHECK(Json::parse(jsonl.out.substr(0, jsonl.out.find('\n')))["D"] == "2");

  CHECK(run({"simulate", "--preset", "rps", "--y0", "R", "--policy", "bogus"}).code == 2);
  CHECK(run({"simulate", "--preset", "rps"}).code == 2);
  CHECK(run({"simulate", "--preset", "rps", "--y0", "R", "--policy", "random"}).code == 0);
}

TEST_CASE("cournot3 demo") {
  const auto r = run({"simulate", "--demo", "cournot3", "--laps", "2"});
  CHECK(r.code == 0);
  CHECK_FALSE(has(r.out, "FAIL"));
  const auto j = Json::parse(run({"--json", "simulate", "--demo", "cournot3"}).out);
  CHECK(j["passed"] == true);
  CHECK(run({"simulate", "--demo", "nope"}).code == 2);
}

TEST_CASE("verify exit codes") {
  const auto ok = run({"verify", "--seed", "42", "--trials", "200", "--max-actions", "5"});
  CHECK(ok.code == 0);
  CHECK(has(ok.out, "mismatches=0"));
  const auto two = run({"verify", "--seed", "1", "--trials", "200", "--max-actions", "2"});
  CHECK(two.code == 0);
  CHECK(has(two.out, "0 pumps found"));
  CHECK(run({"verify", "--trials", "0"}).code == 2);
  CHECK(run({"verify", "--max-actions", "12"}).code == 2);
}

TEST_CASE("generate round-trips through analyze") {
  const auto list = run({"--list-presets"});
  CHECK(list.code == 0);
  for (const char* preset : {"rps", "chicken", "coordination_outside", "ngrps_gop",
                             "nash_demand", "ratio_game", "min_effort"}) {
    CAPTURE(preset);
    CHECK(has(list.out, preset));
    const auto generated = run({"generate", "--preset", preset});
    REQUIRE(generated.code == 0);
    const auto path = temp_file(std::string("imitation_cli_") + preset + ".json",
                                generated.out);
    const auto from_file = run({"--json", "analyze", path.string()});
    const auto from_preset = run({"--json", "analyze", "--preset", preset});
    CHECK(from_file.out == from_preset.out);
    std::filesystem::remove(path);
  }
}

TEST_CASE("config file grids and usage errors") {
  const auto config = temp_file("imitation_cli.conf",
                                "precision = 2\n\"grid.cournot_linear\" = \"0,90,10\"\n");
  const auto r = run({"--config", config.string(), "--json", "analyze", "--preset",
                      "cournot_linear"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["actions"].size() == 10);
  std::filesystem::remove(config);

  CHECK(run({"--config", "/nonexistent.conf", "analyze", "--preset", "rps"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"analyze", "--preset", "cournot_linear", "--param", "b"}).code == 2);
  CHECK(run({"analyze", "--preset", "cournot_linear", "--param", "b=80"}).code == 0);
}
