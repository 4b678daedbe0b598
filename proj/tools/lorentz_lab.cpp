// lorentz-lab: experiment harness for the hyperbolic/Hilbert isometry library.
// Each subcommand reads a JSON config, runs a seeded experiment suite and
// prints a machine-readable JSON report. Exit codes: 0 pass, 1 fail,
// 2 config error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/experiments.hpp"

namespace {

int run(const std::string& name, const std::string& config_path,
        const std::string& csv_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config file '" << config_path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  lorentzlab::ExperimentConfig cfg;
  try {
    cfg = lorentzlab::parse_config(buf.str());
  } catch (const lorentzlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  lorentzlab::ExperimentReport rep;
  try {
    rep = lorentzlab::run_experiment(name, cfg);
  } catch (const lorentzlab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lorentzlab::NonPositiveLength& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) {
      std::cerr << "error: cannot write csv file '" << csv_path << "'\n";
      return 2;
    }
    csv << rep.to_csv();
  }
  std::cout << rep.to_json() << "\n";
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lorentz-lab: computable geometry of the infinite dimensional "
               "hyperbolic space and its Hilbert sibling"};
  app.require_subcommand(1);

  std::string config_path;
  std::string csv_path;
  std::string picked;
  for (const std::string& name : lorentzlab::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--csv", csv_path, "write one CSV row per trial");
    sub->callback([&picked, name]() { picked = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return run(picked, config_path, csv_path);
}
