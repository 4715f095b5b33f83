#pragma once

// Run configuration: INI-style "key = value" sections read with
// Boost.PropertyTree and validated before any work starts.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sobolev/grid.hpp"
#include "sobolev/symbol.hpp"

namespace sobolev {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario { gaussian_blob, random_bandlimited, peakon_pair, symbol_audit, conjugation_audit, consistency };

const char* to_string(Scenario s);
std::optional<Scenario> parse_scenario(const std::string& name);
bool is_simulation(Scenario s);

struct MetricConfig {
  std::string kind = "sobolev";  // sobolev | custom-table
  double s = 1.0;
  std::string table_path;        // custom-table: "xi value" lines
  double order = 0.0;            // custom-table: declared order r
};

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int cadence = 1;
  double cfl = 0.5;
  int max_halvings = 20;
  std::optional<double> blowup_threshold;
  bool refine = true;
};

struct RunConfig {
  int dimension = 1;
  int points = 64;
  double length = 1.0;
  MetricConfig metric;
  IntegratorConfig integrator;
  Scenario scenario = Scenario::gaussian_blob;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::vector<double> norm_orders{0.0, 1.0};

  // Initial data.
  double amplitude = 1.0;
  double width = 0.1;
  std::optional<Point> center;
  int band = 4;
  double norm = 1.0;
  std::optional<double> norm_order;
  double separation = 0.15;
  double ell = 0.05;
  double delta = 0.01;

  // Audits.
  double xi_max = 1e3;
  int max_alpha = 2;
  int sphere_samples = 10000;
  std::vector<double> shear_t{1.9, 2.1};
  int trials = 50;            // conjugation audit random inputs
  int sylvester_trials = 1000;
  int audit_points = 16;
  int sn_tuples = 100;

  TorusGrid grid() const { return TorusGrid(dimension, points, length); }
};

/// Parses and validates a configuration file. Throws ConfigError with the
/// offending key on any problem.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

/// The metric symbol described by the configuration.
MatrixSymbol metric_symbol(const RunConfig& config);

/// Radial scalar symbol from a table of (|xi|, value) rows, interpolated
/// linearly in (log(1 + |xi|), log value) and extrapolated from the end
/// segments.
MatrixSymbol table_symbol(int dim, double order, const std::vector<std::pair<double, double>>& rows,
                          std::string name);
std::vector<std::pair<double, double>> read_symbol_table(const std::string& path);

}  // namespace sobolev
