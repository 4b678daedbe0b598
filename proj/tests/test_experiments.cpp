#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/experiments.hpp"

using namespace lorentzlab;
using nlohmann::json;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.seed = 11;
  cfg.dims = 6;
  cfg.trials = 4;
  cfg.epsilon = 0.05;
  cfg.t = 1.0;
  return cfg;
}

#ifdef LORENTZ_LAB_BIN
struct CliResult {
  int exit_code;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
  std::string out_path = "/tmp/lorentz_lab_test_out.txt";
  std::string cmd = std::string(LORENTZ_LAB_BIN) + " " + args + " > " +
                    out_path + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream buf;
  buf << in.rdbuf();
  return {WEXITSTATUS(status), buf.str()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}
#endif

}  // namespace

TEST_CASE("config parsing: round trip and strictness") {
  ExperimentConfig cfg = parse_config(
      R"({"seed": 5, "dims": 9, "trials": 3, "epsilon": 0.02, "t": 0.5,
          "tolerances": {"abs": 1e-10, "rel": 1e-10}})");
  CHECK(cfg.seed == 5);
  CHECK(cfg.dims == 9);
  CHECK(cfg.trials == 3);
  CHECK(cfg.epsilon == doctest::Approx(0.02));
  CHECK(cfg.tol_abs.has_value());

  CHECK_THROWS_AS(parse_config(R"({"unknown": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"tolerances": {"oops": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"trials": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"(["array"])"), ConfigError);
}

TEST_CASE("all experiments pass on a small config") {
  ExperimentConfig cfg = small_config();
  cfg.dims = 12;
  for (const std::string& name : experiment_names()) {
    ExperimentConfig run = cfg;
    // epsilon is the oracle resolution for the gap certificate; the
    // Lipschitz slack makes coarse-grid certificates inconclusive
    if (name == "no-dense-conjugacy") run.epsilon = 2e-3;
    ExperimentReport rep = run_experiment(name, run);
    INFO(name);
    CHECK(rep.pass);
    CHECK(rep.experiment == name);
    CHECK(!rep.trials.empty());
  }
}

TEST_CASE("reports are deterministic: identical configs, identical digests") {
  ExperimentConfig cfg = small_config();
  for (const std::string& name :
       {std::string("steinhaus"), std::string("compactification"),
        std::string("weak-continuity")}) {
    ExperimentReport a = run_experiment(name, cfg);
    ExperimentReport b = run_experiment(name, cfg);
    CHECK(a.report_digest == b.report_digest);
    // the JSON differs at most in wall_ms
    json ja = json::parse(a.to_json());
    json jb = json::parse(b.to_json());
    ja["aggregate"].erase("wall_ms");
    jb["aggregate"].erase("wall_ms");
    CHECK(ja.dump() == jb.dump());
  }
  ExperimentConfig other = cfg;
  other.seed = cfg.seed + 1;
  CHECK(run_experiment("steinhaus", cfg).report_digest !=
        run_experiment("steinhaus", other).report_digest);
}

TEST_CASE("csv rows match the trial records") {
  ExperimentReport rep = run_experiment("steinhaus", small_config());
  std::istringstream csv(rep.to_csv());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "trial,defect,bound,pass");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == rep.trials.size());
}

TEST_CASE("no-dense-conjugacy rejects non-positive t") {
  ExperimentConfig cfg = small_config();
  cfg.t = 0.0;
  CHECK_THROWS_AS(run_no_dense_conjugacy(cfg), NonPositiveLength);
}

#ifdef LORENTZ_LAB_BIN
TEST_CASE("cli: pass run, report schema, csv side file") {
  write_file("/tmp/ll_cfg.json",
             R"({"seed": 3, "dims": 6, "trials": 3, "epsilon": 0.05, "t": 1.0})");
  CliResult res =
      run_cli("steinhaus --config /tmp/ll_cfg.json --csv /tmp/ll_out.csv");
  CHECK(res.exit_code == 0);
  json rep = json::parse(res.stdout_text);
  CHECK(rep["experiment"] == "steinhaus");
  CHECK(rep.contains("config_digest"));
  CHECK(rep["aggregate"].contains("max_defect"));
  CHECK(rep["aggregate"].contains("wall_ms"));
  CHECK(rep["aggregate"]["pass"] == true);
  CHECK(rep["trials"].is_array());

  std::ifstream csv("/tmp/ll_out.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "trial,defect,bound,pass");
}

TEST_CASE("cli: config errors exit with 2") {
  write_file("/tmp/ll_bad.json", R"({"seed": 1, "bogus": 2})");
  CHECK(run_cli("steinhaus --config /tmp/ll_bad.json").exit_code == 2);
  CHECK(run_cli("steinhaus --config /tmp/does_not_exist.json").exit_code == 2);
  write_file("/tmp/ll_bad2.json", R"({"t": -2.0})");
  CHECK(run_cli("no-dense-conjugacy --config /tmp/ll_bad2.json").exit_code == 2);
  CHECK(run_cli("not-an-experiment --config /tmp/ll_bad.json").exit_code == 2);
}

TEST_CASE("cli: identical runs produce identical digests") {
  write_file("/tmp/ll_cfg2.json",
             R"({"seed": 9, "dims": 5, "trials": 2, "epsilon": 0.05, "t": 1.0})");
  CliResult a = run_cli("compactification --config /tmp/ll_cfg2.json");
  CliResult b = run_cli("compactification --config /tmp/ll_cfg2.json");
  CHECK(a.exit_code == 0);
  json ja = json::parse(a.stdout_text);
  json jb = json::parse(b.stdout_text);
  CHECK(ja["report_digest"] == jb["report_digest"]);
}
#endif
