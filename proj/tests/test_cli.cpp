#include <doctest.h>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"

using namespace corrgame;
using namespace corrgame::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string golden(const std::string& name) {
  return slurp(fs::path(CORRGAME_GOLDEN_DIR) / name);
}

std::string config_field(const std::string& text) {
  try {
    parse_config(Json::parse(text));
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

// Scratch directory removed on scope exit.
struct TempDir {
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("corrgame_cli_test_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
};

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "corrgame");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_config(const TempDir& dir, const std::string& text) {
  const auto path = dir.path / "config.json";
  std::ofstream(path) << text;
  return path.string();
}

const std::string kG3Config =
    R"({"game":{"preset":"PD","params":{"r":3,"s":0,"t":5,"u":1}},)"
    R"("gfunction":{"name":"g3","params":{"delta":0.5,"epsilon":"pi:0.25"}},)"
    R"("model":"singlet"})";

}  // namespace

TEST_CASE("config numbers accept pi fractions") {
  CHECK(parse_number(Json(1.5), "x") == 1.5);
  CHECK(parse_number(Json("pi:0.25"), "x") == kPi * 0.25);
  CHECK_THROWS_AS(parse_number(Json("pi:"), "x"), ConfigError);
  CHECK_THROWS_AS(parse_number(Json("0.25"), "x"), ConfigError);
  CHECK_THROWS_AS(parse_number(Json(true), "x"), ConfigError);
}

TEST_CASE("config errors name the offending field") {
  CHECK(config_field(R"({"gam":{}})") == "gam");
  CHECK(config_field(R"({"game":{"preset":"PD","params":{"r":1,"s":0,"t":5,"u":3}}})") ==
        "game.params");
  CHECK(config_field(R"({"analysis":{"grid_step":0.1}})") == "analysis.grid_step");
  CHECK(config_field(R"({"gfunction":{"name":"g3","params":{"delta":"pi:x"}}})") ==
        "gfunction.params.delta");
  CHECK(config_field(R"({"gfunction":{"name":"g9"}})") == "gfunction.name");
  CHECK(config_field(R"({"simulation":{"n":0}})") == "simulation.n");
  CHECK(config_field(R"({"simulation":{"theta_a":4}})") == "simulation.theta_a");
  CHECK(config_field(R"({"sweep":{"parameter":"zeta","from":0,"to":1}})") ==
        "sweep.parameter");
  CHECK(config_field(R"({"sweep":{"parameter":"delta","from":0.6,"to":0.2,"steps":3}})") ==
        "sweep.to");
  CHECK(config_field(R"({"model":"foo"})") == "model");
  CHECK(config_field(kG3Config) == "<accepted>");
  CHECK(config_field("{}") == "<accepted>");
}

TEST_CASE("analyze report round trip") {
  const auto c = parse_config(Json::parse(kG3Config));
  const auto reports = analyze_reports(c);
  REQUIRE(reports.size() == 2);
  const Json j = reports;
  const auto back = Json::parse(j.dump()).get<std::vector<EquilibriumReport>>();
  CHECK(back == reports);

  TempDir dir;
  const auto r = invoke({"--config", write_config(dir, kG3Config), "--out", dir.path.string(),
                      "analyze"});
  CHECK(r.code == kExitOk);
  const auto doc = Json::parse(slurp(dir.path / "report.json"));
  CHECK(doc.at("reports").get<std::vector<EquilibriumReport>>() == reports);
  CHECK(r.out.find("0.5555555") != std::string::npos);
}

TEST_CASE("analyze examples") {
  auto c = parse_config(Json::parse(kG3Config));
  auto reports = analyze_reports(c);
  const auto& q = reports[1];
  CHECK(q.regime == Regime::kQuantumGame);
  REQUIRE(q.equilibria.size() == 1);
  CHECK(std::abs(q.equilibria[0].profile.p_a - 5.0 / 9) <= 1e-12);
  REQUIRE(q.equilibria[0].source_classical);
  CHECK(q.equilibria[0].shift > 0.0);

  c = parse_config(Json::parse(R"({"gfunction":{"name":"g1"}})"));
  reports = analyze_reports(c);
  REQUIRE(reports.size() == 2);
  REQUIRE(reports[0].equilibria.size() == reports[1].equilibria.size());
  for (std::size_t i = 0; i < reports[0].equilibria.size(); ++i) {
    CHECK(reports[0].equilibria[i].profile == reports[1].equilibria[i].profile);
  }

  c = parse_config(Json::parse(R"({"model":"mixture"})"));
  CHECK(default_regimes(c) == std::vector<std::string>{"classical", "quantum", "mixture"});
}

TEST_CASE("gfn csv golden files") {
  CHECK(gfn_csv(make_catalog("g1"), 3) == golden("gfn_g1_res3.csv"));
  CHECK(gfn_csv(make_catalog("g3", {{"delta", 0.5}, {"epsilon", kPi / 4}}), 5) ==
        golden("gfn_g3_res5.csv"));
  CHECK(gfn_csv(make_catalog("g8"), 5) == golden("gfn_g8_res5.csv"));
  CHECK_THROWS(gfn_csv(make_catalog("g1"), 1));
}

TEST_CASE("gfn duplicates rows at the g3 jump") {
  const auto csv = gfn_csv(make_catalog("g3", {{"delta", 0.5}, {"epsilon", kPi / 4}}), 9);
  CHECK(csv.find("\n0.7853981633974483,0,") != std::string::npos);
  CHECK(csv.find("\n0.7853981633974483,0.5,") != std::string::npos);
}

TEST_CASE("sweep csv") {
  auto c = parse_config(Json::parse(
      R"({"gfunction":{"name":"g3","params":{"delta":0.5,"epsilon":"pi:0.25"}},)"
      R"("sweep":{"parameter":"epsilon","from":"pi:0.25","to":"pi:0.75","steps":2}})"));
  CHECK(sweep_csv(c) == golden("sweep_g3_epsilon.csv"));
  CHECK(golden("sweep_g3_epsilon.csv").rfind(std::string(kSweepHeader) + "\n", 0) == 0);

  c = parse_config(Json::parse(
      R"({"gfunction":{"name":"g3","params":{"delta":0.5,"epsilon":0.1}},)"
      R"("analysis":{"grid_step":0.004},)"
      R"("sweep":{"parameter":"epsilon","from":0.1,"to":3.0415926535897931,"steps":30}})"));
  bool discrepancy = true;
  const auto csv = sweep_csv(c, &discrepancy);
  CHECK_FALSE(discrepancy);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == kSweepHeader);
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows >= 30);
}

TEST_CASE("one-step sweep matches analyze") {
  const auto c = parse_config(Json::parse(
      R"({"gfunction":{"name":"g3","params":{"delta":0.5,"epsilon":"pi:0.25"}},)"
      R"("sweep":{"parameter":"delta","from":0.5,"to":0.5,"steps":1}})"));
  const auto csv = sweep_csv(c);
  const auto reports = analyze_reports(c);
  const auto& eq = reports[1].equilibria.at(0);
  CHECK(csv.find(fmt::format("delta,0.5,quantum,0,mixed,{},{},", eq.profile.p_a,
                             eq.profile.p_b)) != std::string::npos);
  std::istringstream lines(csv);
  std::string line;
  int rows = -1;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == static_cast<int>(reports[1].equilibria.size()));
}

TEST_CASE("simulate is deterministic") {
  TempDir a, b;
  const std::string cfg =
      R"({"simulation":{"n":10,"seed":42,"theta_a":"pi:0.5","theta_b":"pi:0.25"}})";
  const auto ra = invoke({"--config", write_config(a, cfg), "--out", a.path.string(), "simulate"});
  const auto rb = invoke({"--config", write_config(b, cfg), "--out", b.path.string(), "simulate"});
  const bool defined = ra.code == kExitOk;
  CHECK((ra.code == kExitOk || ra.code == kExitUndefinedCorrelation));
  CHECK(ra.code == rb.code);
  CHECK(slurp(a.path / "runs.jsonl") == slurp(b.path / "runs.jsonl"));
  if (defined) CHECK(slurp(a.path / "result.json") == slurp(b.path / "result.json"));

  const auto rc = invoke({"--config", write_config(a, cfg), "--out", a.path.string(),
                          "--seed", "43", "simulate"});
  CHECK(rc.code == ra.code);
  const auto log = slurp(a.path / "runs.jsonl");
  CHECK(Json::parse(log.substr(0, log.find('\n'))).at("meta").at("seed") == 43);
}

TEST_CASE("error paths exit nonzero with a code field") {
  TempDir dir;
  auto r = invoke({});
  CHECK(r.code == kExitConfig);
  CHECK(Json::parse(r.err).at("error").contains("code"));

  r = invoke({"--config", (dir.path / "missing.json").string(), "analyze"});
  CHECK(r.code == kExitConfig);
  CHECK(Json::parse(r.err).at("error").at("code") == "usage_error");

  r = invoke({"--config", write_config(dir, R"({"model":"foo"})"), "analyze"});
  CHECK(r.code == kExitConfig);
  const auto e = Json::parse(r.err).at("error");
  CHECK(e.at("code") == "config_error");
  CHECK(e.at("field") == "model");

  r = invoke({"--config", write_config(dir, "{not json"), "analyze"});
  CHECK(r.code == kExitConfig);
  CHECK(Json::parse(r.err).at("error").at("code") == "config_error");

  r = invoke({"--config", write_config(dir, R"({"simulation":{"n":100,"theta_a":"pi:1"}})"),
           "--out", dir.path.string(), "simulate"});
  CHECK(r.code == kExitUndefinedCorrelation);
  CHECK(Json::parse(r.err).at("error").at("code") == "undefined_correlation");

  r = invoke({"--grid", "0.5", "analyze"});
  CHECK(r.code == kExitConfig);
}

TEST_CASE("catalog lists presets and g-functions") {
  const auto r = invoke({"catalog"});
  CHECK(r.code == kExitOk);
  for (const char* name : {"PD", "BoS", "g1", "g4", "g8", "singlet", "mixture"}) {
    CHECK(r.out.find(name) != std::string::npos);
  }
}
