// sobolev-lab: config-driven runner for the simulations and audits.
//
//   sobolev-lab [--output-dir DIR] [--seed N] [--quiet] run CONFIG
//   sobolev-lab list-scenarios

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "sobolev/config.hpp"
#include "sobolev/lagrangian.hpp"
#include "sobolev/operator.hpp"
#include "sobolev/scenarios.hpp"

int main(int argc, char** argv) {
  using namespace sobolev;
  CLI::App app{"Right-invariant Sobolev metrics on the torus: simulations and certificates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sobolev-lab 0.1.0");

  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--output-dir", output_dir, "Directory for diagnostics.csv, certificates.txt, summary.txt");
  app.add_option("--seed", seed, "Overrides run.seed");
  app.add_flag("--quiet", quiet, "No progress output");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
  run->fallthrough();
  run->add_option("config", config_path, "INI config file")->required();
  auto* list = app.add_subcommand("list-scenarios", "List scenarios, their config keys and what they do");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (list->parsed()) {
    std::cout << list_scenarios_text();
    return kExitOk;
  }

  RunConfig config;
  try {
    config = load_config(config_path);
    if (output_dir) config.output_dir = *output_dir;
    if (seed) config.seed = *seed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const ScenarioResult result = run_scenario(config, std::cerr, quiet);
    if (!quiet) std::cout << result.summary.str();
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NotElliptic& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidChart& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InversionFailure& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
