#pragma once

// Scenario runner behind the command-line tool: builds the metric, runs a
// simulation or an audit, and writes diagnostics.csv, certificates.txt and
// summary.txt into the output directory.

#include <iosfwd>
#include <string>
#include <vector>

#include "sobolev/config.hpp"
#include "sobolev/epdiff.hpp"
#include "sobolev/report.hpp"

namespace sobolev {

enum ExitCode : int { kExitOk = 0, kExitBlowup = 2, kExitConfig = 3, kExitNumerical = 4 };

/// t,energy,mom_1..mom_d,sup_grad_u,h_norm_<q>...
std::string diagnostics_header(int dim, const std::vector<double>& norm_orders);
std::string diagnostics_row(const Diagnostics& row);

struct ScenarioResult {
  int exit_code = kExitOk;
  Report certificates;
  Report summary;
};

/// Runs the scenario and writes its files under config.output_dir. Progress
/// lines go to `log` unless quiet. Configuration problems found late (an
/// unusable metric table, say) throw ConfigError.
ScenarioResult run_scenario(const RunConfig& config, std::ostream& log, bool quiet = false);

/// Fixed text listing every scenario, its required keys and what it does.
std::string list_scenarios_text();

}  // namespace sobolev
