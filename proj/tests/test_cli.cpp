#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "semifit/commands.hpp"
#include "semifit/config.hpp"
#include "semifit/output.hpp"
#include "semifit/transform.hpp"

using namespace semifit;
namespace fs = std::filesystem;

namespace {

nlohmann::json preset_json() { return nlohmann::json::parse(preset_text("paper-s4")); }

std::string small_config_text() {
  auto j = preset_json();
  j["grid"]["N"] = 20;
  j["time"]["T"] = 0.02;
  j["time"]["dt"] = 0.005;
  j["reference"]["Nz"] = 400;
  j["reference"]["z_max"] = 400.0;
  j["conditions"]["samples_per_axis"] = 3;
  return j.dump();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("semifit_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

std::string config_error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("bundled preset matches the built-in column problem") {
  const RunConfig cfg = parse_config(preset_text("paper-s4"));
  CHECK(cfg.grid_N == std::vector<int>{100});
  CHECK(cfg.dt == 0.001);
  CHECK(cfg.problem.T == 1.0);
  CHECK(cfg.a == 0.005);
  CHECK(cfg.source.h == 0.01);
  CHECK_FALSE(cfg.include_jacobian_factor);
  const PhysicalProblem ref = three_species_column();
  CHECK(cfg.problem.reactions.gamma == ref.reactions.gamma);
  REQUIRE(cfg.problem.reactions.beta.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(cfg.problem.reactions.beta[k].s == ref.reactions.beta[k].s);
    CHECK(cfg.problem.reactions.beta[k].i == ref.reactions.beta[k].i);
    CHECK(cfg.problem.reactions.beta[k].j == ref.reactions.beta[k].j);
    CHECK(cfg.problem.reactions.beta[k].value == ref.reactions.beta[k].value);
  }
  for (int s = 0; s < 3; ++s) {
    const auto& a = cfg.problem.species[static_cast<std::size_t>(s)];
    const auto& b = ref.species[static_cast<std::size_t>(s)];
    CHECK(a.K.value(0.0) == b.K.value(0.0));
    CHECK(a.Q(0.3) == b.Q(0.3));
    CHECK(a.c0.value(10.0) == b.c0.value(10.0));
    if (!b.Q.is_zero()) CHECK(a.z_star == b.z_star);
  }
  CHECK_THROWS_AS(preset_text("nope"), ConfigError);
}

TEST_CASE("config errors name the offending key") {
  auto j = preset_json();
  j["solver"]["newton_tolerance"] = 1e-9;
  CHECK(config_error_key(j.dump()) == "solver.newton_tolerance");

  j = preset_json();
  j.erase("time");
  CHECK(config_error_key(j.dump()) == "time");

  j = preset_json();
  j["problem"]["species"][1]["K"] = "five";
  CHECK(config_error_key(j.dump()) == "problem.species[1].K");

  j = preset_json();
  j["transform"]["a"] = -1.0;
  CHECK(config_error_key(j.dump()) == "transform.a");

  j = preset_json();
  j["problem"]["reactions"]["beta"][0] = {0, 1, 3, -1000};
  CHECK(config_error_key(j.dump()) == "problem");

  CHECK(config_error_key("{ not json") == "");
}

TEST_CASE("tabulated profiles and N lists parse") {
  auto j = preset_json();
  j["problem"]["species"][0]["K"] = {{"z", {0.0, 100.0}}, {"value", {1.0, 2.0}}};
  j["grid"]["N"] = {50, 100, 200};
  const RunConfig cfg = parse_config(j.dump());
  CHECK(cfg.problem.species[0].K.value(50.0) == doctest::Approx(1.5));
  CHECK(cfg.grid_N == std::vector<int>{50, 100, 200});
  CHECK(runge_grid_sizes(cfg) == std::vector<int>{50, 100, 200});
}

TEST_CASE("Runge grid sizes") {
  RunConfig cfg = parse_config(preset_text("paper-s4"));
  CHECK(runge_grid_sizes(cfg) == std::vector<int>{100, 200, 400});
  cfg.grid_N = {100, 150, 400};
  CHECK_THROWS_AS(runge_grid_sizes(cfg), ConfigError);
  cfg.grid_N = {100, 200};
  CHECK_THROWS_AS(runge_grid_sizes(cfg), ConfigError);
}

TEST_CASE("number formatting keeps every bit") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-300, -7.25, 12345.678901234567}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(NAN) == "nan");
}

TEST_CASE("solve writes a deterministic, self-consistent CSV") {
  const RunConfig cfg = parse_config(small_config_text());
  const fs::path a = scratch("solve_a"), b = scratch("solve_b");
  std::ostringstream log;
  REQUIRE(cmd_solve(cfg, a, log) == kExitOk);
  REQUIRE(cmd_solve(cfg, b, log) == kExitOk);
  const std::string csv = read_file(a / "solution.csv");
  CHECK(csv == read_file(b / "solution.csv"));

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,i,xi,z,species,value");
  int rows = 0, inf_rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> col;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) col.push_back(f);
    REQUIRE(col.size() == 6);
    const double xi = std::stod(col[2]);
    if (col[3] == "inf") {
      CHECK(xi == 1.0);
      ++inf_rows;
    } else {
      CHECK(std::stod(col[3]) == xi_to_z(cfg.a, xi));
    }
    const int s = std::stoi(col[4]);
    CHECK(s >= 1);
    CHECK(s <= 3);
  }
  // snapshots at t = 0 and the final step (snapshot_every = 10 > 4 steps)
  CHECK(rows == 2 * 21 * 3);
  CHECK(inf_rows == 2 * 3);

  const auto meta = nlohmann::json::parse(read_file(a / "solution.meta.json"));
  CHECK(meta["version"] == kToolVersion);
  CHECK(meta["parameters"]["grid"]["N"][0] == 20);
  CHECK(meta["monitors"].size() == 4);
  CHECK(meta.contains("min_value"));
  CHECK(meta.contains("timestamp"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("zero sources and zero initial data give an all-zero CSV") {
  auto j = nlohmann::json::parse(small_config_text());
  for (auto& sp : j["problem"]["species"]) {
    sp["Q"] = {0.0};
    sp["c0"] = 0.0;
  }
  const RunConfig cfg = parse_config(j.dump());
  const fs::path out = scratch("zero");
  std::ostringstream log;
  REQUIRE(cmd_solve(cfg, out, log) == kExitOk);
  std::istringstream in(read_file(out / "solution.csv"));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) CHECK(line.substr(line.rfind(',') + 1) == "0");
  fs::remove_all(out);
}

TEST_CASE("runge command writes the rate table") {
  auto j = nlohmann::json::parse(small_config_text());
  j["grid"]["N"] = 10;
  const RunConfig cfg = parse_config(j.dump());
  const fs::path out = scratch("runge");
  std::ostringstream log;
  REQUIRE(cmd_runge(cfg, out, log) == kExitOk);
  std::istringstream in(read_file(out / "runge_rates.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "xi,n1,n2,n3");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 11);

  j["grid"]["N"] = {10, 15, 40};
  CHECK(cmd_runge(parse_config(j.dump()), out, log) == kExitConfig);
  fs::remove_all(out);
}

TEST_CASE("compare command") {
  auto j = nlohmann::json::parse(small_config_text());
  const fs::path out = scratch("compare");
  std::ostringstream log;
  REQUIRE(cmd_compare(parse_config(j.dump()), out, log) == kExitOk);
  auto rep = nlohmann::json::parse(read_file(out / "compare_report.json"));
  CHECK(rep["fitted"]["N"] == 20);
  CHECK(rep["reference"]["Nz"] == 400);
  CHECK(rep["errors"].size() == 3);

  j["reference"]["mode"] = "self";
  REQUIRE(cmd_compare(parse_config(j.dump()), out, log) == kExitOk);
  rep = nlohmann::json::parse(read_file(out / "compare_report.json"));
  for (const auto& e : rep["errors"]) CHECK(e["rel_l2"] == 0.0);

  j.erase("reference");
  CHECK(cmd_compare(parse_config(j.dump()), out, log) == kExitConfig);
  fs::remove_all(out);
}

TEST_CASE("check-conditions command") {
  auto j = nlohmann::json::parse(small_config_text());
  const fs::path out = scratch("cond");
  std::ostringstream log;
  CHECK(cmd_check_conditions(parse_config(j.dump()), out, log) == kExitOk);

  j["problem"]["reactions"]["gamma"][0][1] = -2000.0;
  CHECK(cmd_check_conditions(parse_config(j.dump()), out, log) == kExitFindings);
  const auto rep = nlohmann::json::parse(read_file(out / "conditions_report.json"));
  CHECK(rep["violations"]["b"].get<long>() > 0);
  CHECK_FALSE(rep["witnesses"].empty());

  j = nlohmann::json::parse(small_config_text());
  j["conditions"]["box"] = {0.0, 0.0, 0.0};
  CHECK(cmd_check_conditions(parse_config(j.dump()), out, log) == kExitOk);
  fs::remove_all(out);
}

TEST_CASE("unwritable output directory maps to the I/O exit code") {
  const fs::path blocker = scratch("blocker");
  std::ofstream(blocker) << "x";
  std::ostringstream log;
  CHECK(cmd_solve(parse_config(small_config_text()), blocker / "sub", log) == kExitIo);
  fs::remove(blocker);
}

TEST_CASE("output directory precedence") {
  RunConfig cfg = parse_config(preset_text("paper-s4"));
  cfg.output_directory = "from_config";
  ::unsetenv(kOutDirEnv);
  CHECK(resolve_output_directory(std::nullopt, cfg) == fs::path("from_config"));
  ::setenv(kOutDirEnv, "from_env", 1);
  CHECK(resolve_output_directory(std::nullopt, cfg) == fs::path("from_env"));
  CHECK(resolve_output_directory(std::string("from_flag"), cfg) == fs::path("from_flag"));
  ::unsetenv(kOutDirEnv);
}

TEST_CASE("command-line tool exit codes") {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  const fs::path good = dir / "good.json", bad = dir / "bad.json";
  std::ofstream(good) << small_config_text();
  auto j = nlohmann::json::parse(small_config_text());
  j["grid"]["resolution"] = 3;
  std::ofstream(bad) << j.dump();

  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(SEMIFIT_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  CHECK(run("solve --config " + good.string() + " --out " + (dir / "o").string()) == 0);
  CHECK(fs::exists(dir / "o" / "solution.csv"));
  CHECK(run("solve --config " + bad.string() + " --out " + (dir / "o").string()) == 2);
  CHECK(run("solve --config " + (dir / "missing.json").string()) == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("solve --config " + good.string() + " --out " + (good / "x").string()) == 4);
  const std::string env_run = "SEMIFIT_OUT_DIR=" + (dir / "e").string() + " ";
  CHECK(std::system((env_run + SEMIFIT_CLI_PATH + " solve --config " + good.string() + " 2>/dev/null").c_str()) == 0);
  CHECK(fs::exists(dir / "e" / "solution.csv"));
  fs::remove_all(dir);
}
