#include "sobolev/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sobolev {
namespace {

namespace pt = boost::property_tree;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "grid.dimension",        "grid.points",        "grid.length",
      "metric.kind",           "metric.s",           "metric.table",        "metric.order",
      "integrator.dt",         "integrator.t_end",   "integrator.cadence",  "integrator.cfl",
      "integrator.max_halvings", "integrator.blowup_threshold", "integrator.refine",
      "scenario.name",         "scenario.amplitude", "scenario.width",      "scenario.center",
      "scenario.band",         "scenario.norm",      "scenario.norm_order", "scenario.separation",
      "scenario.ell",          "scenario.delta",
      "diagnostics.norms",
      "audit.xi_max",          "audit.max_alpha",    "audit.sphere_samples", "audit.shear_t",
      "audit.trials",          "audit.points",       "audit.sn_tuples",    "audit.sylvester_trials",
      "output.dir",            "run.seed"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (trim(text.substr(pos)).empty() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a finite number, got '" + text + "'");
}

long long to_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (trim(text.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an integer, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key + ": empty list entry");
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::gaussian_blob: return "gaussian_blob";
    case Scenario::random_bandlimited: return "random_bandlimited";
    case Scenario::peakon_pair: return "peakon_pair";
    case Scenario::symbol_audit: return "symbol_audit";
    case Scenario::conjugation_audit: return "conjugation_audit";
    case Scenario::consistency: return "consistency";
  }
  return "unknown";
}

std::optional<Scenario> parse_scenario(const std::string& name) {
  for (Scenario s : {Scenario::gaussian_blob, Scenario::random_bandlimited, Scenario::peakon_pair,
                     Scenario::symbol_audit, Scenario::conjugation_audit, Scenario::consistency})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

bool is_simulation(Scenario s) {
  return s == Scenario::gaussian_blob || s == Scenario::random_bandlimited || s == Scenario::peakon_pair ||
         s == Scenario::consistency;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  std::map<std::string, std::string> flat;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' must live inside a [section]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!known_keys().count(full)) throw ConfigError(full + ": unknown key");
      flat[full] = trim(value.data());
    }
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = flat.find(key);
    if (it == flat.end()) return std::nullopt;
    return it->second;
  };

  RunConfig c;
  auto name = get("scenario.name");
  require(name.has_value(), "scenario.name", "missing");
  auto scenario = parse_scenario(*name);
  require(scenario.has_value(), "scenario.name", "unknown scenario '" + *name + "'");
  c.scenario = *scenario;

  auto dim = get("grid.dimension");
  require(dim.has_value(), "grid.dimension", "missing");
  c.dimension = static_cast<int>(to_integer("grid.dimension", *dim));
  require(c.dimension >= 1 && c.dimension <= 3, "grid.dimension", "must be 1, 2 or 3");
  auto points = get("grid.points");
  require(points.has_value(), "grid.points", "missing");
  const long long n = to_integer("grid.points", *points);
  require(n >= 8 && is_power_of_two(n), "grid.points", "must be a power of two >= 8");
  require(n <= (c.dimension == 1 ? (1 << 20) : c.dimension == 2 ? 2048 : 256), "grid.points", "too large for the dimension");
  c.points = static_cast<int>(n);
  if (auto v = get("grid.length")) c.length = to_double("grid.length", *v);
  require(c.length > 0.0, "grid.length", "must be positive");

  if (auto v = get("metric.kind")) c.metric.kind = *v;
  require(c.metric.kind == "sobolev" || c.metric.kind == "custom-table", "metric.kind",
          "must be sobolev or custom-table");
  if (c.metric.kind == "sobolev") {
    auto s = get("metric.s");
    require(s.has_value(), "metric.s", "missing (required for the sobolev metric)");
    c.metric.s = to_double("metric.s", *s);
    require(c.metric.s >= 0.0 && c.metric.s <= 8.0, "metric.s", "must lie in [0, 8]");
  } else {
    auto t = get("metric.table");
    require(t.has_value(), "metric.table", "missing (required for custom-table)");
    c.metric.table_path = *t;
    auto r = get("metric.order");
    require(r.has_value(), "metric.order", "missing (required for custom-table)");
    c.metric.order = to_double("metric.order", *r);
  }

  if (auto v = get("integrator.dt")) c.integrator.dt = to_double("integrator.dt", *v);
  if (auto v = get("integrator.t_end")) c.integrator.t_end = to_double("integrator.t_end", *v);
  if (is_simulation(c.scenario)) {
    require(get("integrator.dt").has_value(), "integrator.dt", "missing");
    require(get("integrator.t_end").has_value(), "integrator.t_end", "missing");
  }
  require(c.integrator.dt > 0.0, "integrator.dt", "must be positive");
  require(c.integrator.t_end >= 0.0, "integrator.t_end", "must be non-negative");
  require(c.integrator.t_end / c.integrator.dt <= 1e8, "integrator.t_end", "more than 1e8 steps requested");
  if (auto v = get("integrator.cadence")) c.integrator.cadence = static_cast<int>(to_integer("integrator.cadence", *v));
  require(c.integrator.cadence >= 1, "integrator.cadence", "must be >= 1");
  if (auto v = get("integrator.cfl")) c.integrator.cfl = to_double("integrator.cfl", *v);
  require(c.integrator.cfl > 0.0 && c.integrator.cfl <= 0.5, "integrator.cfl", "must lie in (0, 0.5]");
  if (auto v = get("integrator.max_halvings"))
    c.integrator.max_halvings = static_cast<int>(to_integer("integrator.max_halvings", *v));
  require(c.integrator.max_halvings >= 0 && c.integrator.max_halvings <= 40, "integrator.max_halvings",
          "must lie in 0..40");
  if (auto v = get("integrator.blowup_threshold")) {
    c.integrator.blowup_threshold = to_double("integrator.blowup_threshold", *v);
    require(*c.integrator.blowup_threshold > 0.0, "integrator.blowup_threshold", "must be positive");
  }
  if (auto v = get("integrator.refine")) c.integrator.refine = to_bool("integrator.refine", *v);

  if (auto v = get("diagnostics.norms")) c.norm_orders = to_list("diagnostics.norms", *v);

  const double L = c.length;
  c.width = 0.1 * L;
  c.separation = 0.15 * L;
  c.ell = 0.05 * L;
  c.delta = 0.01 * L;
  if (auto v = get("scenario.amplitude")) c.amplitude = to_double("scenario.amplitude", *v);
  if (auto v = get("scenario.width")) c.width = to_double("scenario.width", *v);
  require(c.width > 0.0, "scenario.width", "must be positive");
  if (auto v = get("scenario.center")) {
    const auto list = to_list("scenario.center", *v);
    require(static_cast<int>(list.size()) == c.dimension, "scenario.center", "needs one entry per dimension");
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < c.dimension; ++a) p[a] = list[a];
    c.center = p;
  }
  if (auto v = get("scenario.band")) c.band = static_cast<int>(to_integer("scenario.band", *v));
  if (c.scenario == Scenario::random_bandlimited)
    require(c.band >= 0 && c.band <= c.points / 2 - 1, "scenario.band", "must lie in 0..points/2-1");
  if (auto v = get("scenario.norm")) c.norm = to_double("scenario.norm", *v);
  require(c.norm >= 0.0, "scenario.norm", "must be non-negative");
  if (auto v = get("scenario.norm_order")) c.norm_order = to_double("scenario.norm_order", *v);
  if (auto v = get("scenario.separation")) c.separation = to_double("scenario.separation", *v);
  if (auto v = get("scenario.ell")) c.ell = to_double("scenario.ell", *v);
  require(c.ell > 0.0, "scenario.ell", "must be positive");
  if (auto v = get("scenario.delta")) c.delta = to_double("scenario.delta", *v);
  require(c.delta >= 0.0, "scenario.delta", "must be non-negative");

  if (auto v = get("audit.xi_max")) c.xi_max = to_double("audit.xi_max", *v);
  require(c.xi_max > 1e-2, "audit.xi_max", "must exceed 1e-2");
  if (auto v = get("audit.max_alpha")) c.max_alpha = static_cast<int>(to_integer("audit.max_alpha", *v));
  require(c.max_alpha >= 0 && c.max_alpha <= 3, "audit.max_alpha", "must lie in 0..3");
  if (auto v = get("audit.sphere_samples"))
    c.sphere_samples = static_cast<int>(to_integer("audit.sphere_samples", *v));
  require(c.sphere_samples >= 4 && c.sphere_samples <= 10'000'000, "audit.sphere_samples", "must lie in 4..1e7");
  if (auto v = get("audit.shear_t")) c.shear_t = to_list("audit.shear_t", *v);
  if (auto v = get("audit.trials")) c.trials = static_cast<int>(to_integer("audit.trials", *v));
  require(c.trials >= 1 && c.trials <= 1000, "audit.trials", "must lie in 1..1000");
  if (auto v = get("audit.sylvester_trials"))
    c.sylvester_trials = static_cast<int>(to_integer("audit.sylvester_trials", *v));
  require(c.sylvester_trials >= 1 && c.sylvester_trials <= 1'000'000, "audit.sylvester_trials", "must lie in 1..1e6");
  if (c.dimension >= 2) c.audit_points = 8;
  if (auto v = get("audit.points")) c.audit_points = static_cast<int>(to_integer("audit.points", *v));
  if (c.scenario == Scenario::conjugation_audit)
    require(is_power_of_two(c.audit_points) && c.audit_points >= 8 &&
              c.audit_points <= (c.dimension == 1 ? 32 : 8),
          "audit.points", "must be a power of two in 8..32 (1-d) or 8 (2-d)");
  if (c.scenario == Scenario::conjugation_audit)
    require(c.dimension <= 2, "grid.dimension", "conjugation_audit supports d = 1 or 2");
  if (auto v = get("audit.sn_tuples")) c.sn_tuples = static_cast<int>(to_integer("audit.sn_tuples", *v));
  require(c.sn_tuples >= 1 && c.sn_tuples <= 100000, "audit.sn_tuples", "must lie in 1..1e5");

  if (auto v = get("output.dir")) c.output_dir = *v;
  if (auto v = get("run.seed")) {
    const long long s = to_integer("run.seed", *v);
    require(s >= 0, "run.seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  return c;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> read_symbol_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("metric.table: cannot read '" + path + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    std::istringstream ls(line);
    double xi = 0.0, value = 0.0;
    std::string extra;
    if (!(ls >> xi >> value) || (ls >> extra))
      throw ConfigError("metric.table: line " + std::to_string(lineno) + " must hold two numbers");
    if (!(xi >= 0.0) || !(value > 0.0) || !std::isfinite(xi) || !std::isfinite(value))
      throw ConfigError("metric.table: line " + std::to_string(lineno) + " needs xi >= 0 and value > 0");
    if (!rows.empty() && !(xi > rows.back().first))
      throw ConfigError("metric.table: xi must be strictly increasing (line " + std::to_string(lineno) + ")");
    rows.emplace_back(xi, value);
  }
  if (rows.size() < 2) throw ConfigError("metric.table: need at least two rows");
  return rows;
}

MatrixSymbol table_symbol(int dim, double order, const std::vector<std::pair<double, double>>& rows,
                          std::string name) {
  std::vector<double> x, y;
  for (const auto& [xi, v] : rows) {
    x.push_back(std::log1p(xi));
    y.push_back(std::log(v));
  }
  auto profile = [x, y](const Frequency& xi) {
    const double s = std::log1p(xi.norm());
    std::size_t hi = std::upper_bound(x.begin(), x.end(), s) - x.begin();
    hi = std::clamp<std::size_t>(hi, 1, x.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = (s - x[lo]) / (x[hi] - x[lo]);
    return std::exp(y[lo] + w * (y[hi] - y[lo]));
  };
  return scalar_symbol(dim, order, profile, SymbolFlags{true, true, false}, std::move(name));
}

MatrixSymbol metric_symbol(const RunConfig& config) {
  if (config.metric.kind == "sobolev") return sobolev_symbol(config.metric.s, config.dimension);
  return table_symbol(config.dimension, config.metric.order, read_symbol_table(config.metric.table_path),
                      "table(" + config.metric.table_path + ")");
}

}  // namespace sobolev
