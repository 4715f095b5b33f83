#include "sobolev/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sobolev/calculus.hpp"
#include "sobolev/conjugation.hpp"
#include "sobolev/initial_data.hpp"
#include "sobolev/lagrangian.hpp"
#include "sobolev/operator.hpp"
#include "sobolev/symbol.hpp"

namespace sobolev {
namespace {

namespace fs = std::filesystem;

std::string short_number(double q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", q);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

class Logger {
 public:
  Logger(std::ostream& out, bool quiet) : out_(out), quiet_(quiet) {}
  void operator()(const std::string& line) const {
    if (!quiet_) out_ << line << '\n';
  }

 private:
  std::ostream& out_;
  bool quiet_;
};

Report describe_run(const RunConfig& c, const MatrixSymbol& metric) {
  Report r;
  r.add("scenario", to_string(c.scenario));
  r.add("dimension", c.dimension);
  r.add("points", c.points);
  r.add("length", c.length);
  r.add("metric", metric.name());
  r.add("seed", static_cast<long long>(c.seed));
  return r;
}

// ---------------------------------------------------------------------------
// Simulations

SpectralField initial_velocity(const RunConfig& c, const TorusGrid& grid, const MatrixSymbol& metric) {
  switch (c.scenario) {
    case Scenario::gaussian_blob:
    case Scenario::consistency: {
      Point center{0.0, 0.0, 0.0};
      for (int a = 0; a < c.dimension; ++a) center[a] = 0.5 * c.length;
      return gaussian_blob(grid, c.amplitude, c.width, c.center.value_or(center));
    }
    case Scenario::random_bandlimited:
      return random_bandlimited(grid, c.dimension, c.band, c.norm_order.value_or(0.5 * metric.order()), c.norm,
                                c.seed);
    case Scenario::peakon_pair:
      return peakon_pair(grid, c.amplitude, c.separation, c.ell, c.delta);
    default:
      break;
  }
  throw std::logic_error("initial_velocity: not a simulation scenario");
}

IntegratorOptions integrator_options(const RunConfig& c) {
  IntegratorOptions o;
  o.dt = c.integrator.dt;
  o.t_end = c.integrator.t_end;
  o.cadence = c.integrator.cadence;
  o.cfl = c.integrator.cfl;
  o.max_halvings = c.integrator.max_halvings;
  o.blowup_threshold = c.integrator.blowup_threshold;
  o.norm_orders = c.norm_orders;
  return o;
}

Report conservation_report(const Trajectory& tr) {
  Report r;
  if (tr.rows.empty()) return r;
  const Diagnostics& first = tr.rows.front();
  double energy_drift = 0.0, momentum_drift = 0.0, grad_max = 0.0;
  for (const auto& row : tr.rows) {
    energy_drift = std::max(energy_drift, std::abs(row.energy - first.energy));
    for (std::size_t c = 0; c < row.momentum.size(); ++c)
      momentum_drift = std::max(momentum_drift, std::abs(row.momentum[c] - first.momentum[c]));
    grad_max = std::max(grad_max, row.sup_grad_u);
  }
  r.add("energy_initial", first.energy);
  r.add("energy_final", tr.rows.back().energy);
  r.add("energy_relative_drift", first.energy != 0.0 ? energy_drift / std::abs(first.energy) : energy_drift);
  r.add("momentum_max_drift", momentum_drift);
  r.add("sup_grad_u_initial", first.sup_grad_u);
  r.add("sup_grad_u_max", grad_max);
  return r;
}

struct SimulationOutcome {
  int exit_code = kExitOk;
  Trajectory trajectory;
};

SimulationOutcome simulate(const RunConfig& c, const FourierMultiplier& a, const EulerState& initial,
                           const fs::path& dir, Report& certificates, Report& summary, const Logger& log) {
  const IntegratorOptions options = integrator_options(c);
  std::ofstream csv(dir / "diagnostics.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write diagnostics.csv in '" + dir.string() + "'");
  csv << diagnostics_header(c.dimension, c.norm_orders) << '\n';
  auto observer = [&](const Diagnostics& row, const EulerState&) { csv << diagnostics_row(row) << '\n'; };

  log("integrating to t=" + format_double(options.t_end) + " with dt=" + format_double(options.dt));
  SimulationOutcome out;
  out.trajectory = integrate(a, initial, options, observer);
  csv.flush();
  const Trajectory& tr = out.trajectory;

  summary.add("run_status", to_string(tr.status));
  summary.add("steps", static_cast<long long>(tr.steps));
  summary.add("t_final", tr.rows.back().t);
  summary.add("blowup_threshold", tr.threshold);
  if (!tr.message.empty()) summary.add("message", tr.message);
  certificates.append(conservation_report(tr), "conservation.");

  if (tr.status == RunStatus::nan_abort) {
    summary.add("blowup", "none");
    out.exit_code = kExitNumerical;
    return out;
  }
  if (tr.status == RunStatus::blowup) {
    BlowupVerdict verdict = detect_blowup(tr);
    if (c.integrator.refine) {
      log("threshold crossed at t=" + format_double(verdict.t_star) + ", rerunning at dt/2");
      IntegratorOptions fine = options;
      fine.dt *= 0.5;
      fine.cadence *= 2;
      fine.blowup_threshold = tr.threshold;
      const Trajectory refined = integrate(a, initial, fine);
      verdict = detect_blowup(tr, refined);
      const BlowupVerdict refined_only = detect_blowup(refined);
      summary.add("blowup", verdict.confirmed ? "t=" + format_double(verdict.t_star)
                                              : "unconfirmed (t=" + format_double(*tr.crossing_time) + ")");
      summary.add("blowup_confirmed", verdict.confirmed ? "yes" : "no");
      if (refined_only.blowup) {
        summary.add("blowup_t_refined", refined_only.t_star);
        summary.add("blowup_relative_shift",
                    std::abs(refined_only.t_star - *tr.crossing_time) / std::abs(*tr.crossing_time));
      } else {
        summary.add("blowup_t_refined", "none");
      }
    } else {
      summary.add("blowup", "unconfirmed (t=" + format_double(verdict.t_star) + ")");
      summary.add("blowup_confirmed", "not checked");
    }
    summary.add("blowup_dt_underflow", tr.dt_underflow ? "yes" : "no");
    out.exit_code = kExitBlowup;
    return out;
  }
  summary.add("blowup", "none");
  const RegularityProbe probe = regularity_probe(tr, c.norm_orders);
  certificates.append(probe.report());
  return out;
}

void consistency_check(const RunConfig& c, const FourierMultiplier& a, const SpectralField& u0,
                       const SimulationOutcome& euler, Report& certificates, Report& summary, const Logger& log) {
  if (euler.trajectory.status != RunStatus::completed) {
    summary.add("consistency", "skipped (Eulerian run did not complete)");
    return;
  }
  log("integrating the Lagrangian spray to t=" + format_double(c.integrator.t_end));
  const LagrangianRun lag = integrate_lagrangian(a, u0, c.integrator.dt, c.integrator.t_end);
  const SpectralField u_lag = eulerian_velocity(lag.final_state);
  const EulerState& e = euler.trajectory.last_good;
  SpectralField diff = u_lag;
  diff -= e.u;
  const double discrepancy = inverse_transform(diff).max_abs();
  const double e_lag = lagrangian_energy(a, lag.final_state);
  const double e_eul = energy(e);
  const double energy_gap = std::abs(e_lag - e_eul) / std::max(std::abs(e_eul), 1e-300);
  certificates.add("consistency.t", lag.final_state.t);
  certificates.add("consistency.sup_velocity_discrepancy", discrepancy);
  certificates.add("consistency.tolerance", 1e-6);
  certificates.add("consistency.energy_eulerian", e_eul);
  certificates.add("consistency.energy_lagrangian", e_lag);
  certificates.add("consistency.energy_relative_gap", energy_gap);
  certificates.add("consistency.min_det_seen", lag.min_det_seen);
  certificates.add_verdict("consistency", discrepancy <= 1e-6);
  summary.add("consistency", discrepancy <= 1e-6 ? "pass" : "fail");
}

// ---------------------------------------------------------------------------
// Audits

bool all_pass(const Report& r) {
  for (const auto& [k, v] : r.entries())
    if (v == "fail") return false;
  return true;
}

void symbol_audit(const RunConfig& c, const MatrixSymbol& metric, Report& cert, Report& summary, const Logger& log) {
  Report m;
  log("order and ellipticity certificates for " + metric.name());
  m.append(check_order_estimate(metric, c.max_alpha, c.xi_max).report(), "order_estimate.");
  m.append(check_ellipticity(metric, c.xi_max).report(), "elliptic.");
  if (metric.has_principal()) {
    const MatrixSymbol p = metric.principal();
    m.append(check_normal_ellipticity(p, c.sphere_samples).report(), "normally_elliptic.");
    m.append(check_strong_ellipticity(p, c.sphere_samples).report(), "strongly_elliptic.");
  }
  cert.append(m, "metric.");
  const bool metric_ok = all_pass(m);
  cert.add_verdict("metric_certificates", metric_ok);

  log("square root checks");
  Report s;
  bool sqrt_ok = true;
  const auto samples = random_frequencies(c.dimension, c.sphere_samples, 1e-2, c.xi_max, c.seed);
  std::vector<MatrixSymbol> targets{metric, random_hpd_symbol(c.dimension, std::max(metric.order(), 0.5), c.seed + 1)};
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const std::string tag = k == 0 ? "metric." : "random_hpd.";
    const MatrixSymbol b = sqrt_symbol(targets[k]);
    const double defect = square_defect(b, targets[k], samples);
    s.add(tag + "symbol", targets[k].name());
    s.add(tag + "samples", static_cast<long long>(samples.size()));
    s.add(tag + "max_square_defect", defect);
    s.add_verdict(tag + "square", defect <= 1e-12);
    Report bc;
    bc.append(check_order_estimate(b, c.max_alpha, c.xi_max).report(), "order_estimate.");
    bc.append(check_ellipticity(b, c.xi_max).report(), "elliptic.");
    s.append(bc, tag + "sqrt.");
    sqrt_ok = sqrt_ok && defect <= 1e-12 && all_pass(bc);
  }
  cert.append(s, "sqrt.");
  cert.add_verdict("sqrt_certificates", sqrt_ok);

  log("Sylvester trials");
  const SylvesterTrials syl = sylvester_trials(c.sylvester_trials, c.seed + 2);
  cert.append(syl.report(), "sylvester.");

  log("shear family ellipticity");
  bool shear_expected = true;
  for (double t : c.shear_t) {
    const MatrixSymbol a = shear_laplacian_symbol(t);
    const ClassCertificate normal = check_normal_ellipticity(a, c.sphere_samples);
    const ClassCertificate strong = check_strong_ellipticity(a, c.sphere_samples);
    const std::string tag = "shear.t=" + short_number(t) + ".";
    cert.add(tag + "min_eigenvalue_real_part", normal.measured_constant);
    cert.add_verdict(tag + "normally_elliptic", normal.pass);
    cert.add(tag + "min_hermitian_eigenvalue", strong.measured_constant);
    cert.add_verdict(tag + "strongly_elliptic", strong.pass);
    shear_expected = shear_expected && normal.pass && strong.pass == (std::abs(t) < 2.0);
  }
  cert.add_verdict("shear.matches_expected_boundary", shear_expected);

  const bool ok = metric_ok && sqrt_ok && syl.violations == 0;
  summary.add("audit", ok ? "pass" : "fail");
  summary.add("metric_certificates", metric_ok ? "pass" : "fail");
  summary.add("sqrt_certificates", sqrt_ok ? "pass" : "fail");
  summary.add("sylvester", syl.violations == 0 ? "pass" : "fail");
  summary.add("shear_boundary", shear_expected ? "pass" : "fail");
}

double relative_difference(const SpectralField& x, const SpectralField& y) {
  SpectralField diff = x;
  diff -= y;
  const double scale = std::max(x.max_abs(), y.max_abs());
  return scale > 0.0 ? diff.max_abs() / scale : diff.max_abs();
}

void conjugation_audit(const RunConfig& c, const MatrixSymbol& metric, Report& cert, Report& summary,
                       const Logger& log) {
  const TorusGrid grid(c.dimension, c.audit_points, c.length);
  const FourierMultiplier a(grid, metric);
  bool ok = true;

  for (int n = 1; n <= 2; ++n) {
    log("A_" + std::to_string(n) + ": recursive vs convolution on " + std::to_string(c.trials) + " inputs");
    const int band = std::max(1, (grid.points() / 2 - 1) / (n + 1));
    double worst = 0.0, worst_flipped = 0.0;
    for (int trial = 0; trial < c.trials; ++trial) {
      std::vector<SpectralField> u;
      for (int k = 0; k <= n; ++k)
        u.push_back(random_bandlimited(grid, c.dimension, band, 0.0, 1.0,
                                       c.seed * 7919 + static_cast<std::uint64_t>(trial * 3 + k + 100 * n)));
      const SpectralField rec = apply_An_recursive(a, n, u);
      const SpectralField conv = apply_An_convolution(metric, n, u);
      SpectralField flipped = conv;
      flipped *= -1.0;
      worst = std::max(worst, relative_difference(rec, conv));
      worst_flipped = std::max(worst_flipped, relative_difference(rec, flipped));
    }
    const std::string tag = "oracle.n=" + std::to_string(n) + ".";
    cert.add(tag + "inputs", c.trials);
    cert.add(tag + "band", band);
    cert.add(tag + "kernel_sign", kernel_sign(n));
    cert.add(tag + "max_relative_defect", worst);
    cert.add(tag + "max_relative_defect_opposite_sign", worst_flipped);
    cert.add_verdict(tag + "agreement", worst <= 1e-10);
    ok = ok && worst <= 1e-10;
  }

  for (int n = 1; n <= 2; ++n) {
    log("C_" + std::to_string(n) + " estimate at xi_max/2 and xi_max");
    TupleSampling half, full;
    half.xi_max = 0.5 * c.xi_max;
    full.xi_max = c.xi_max;
    const CnEstimate e1 = estimate_Cn(metric, n, half);
    const CnEstimate e2 = estimate_Cn(metric, n, full);
    const double change = std::abs(e2.ratio - e1.ratio) / std::max(e1.ratio, 1e-300);
    const bool stable = std::isfinite(e1.ratio) && std::isfinite(e2.ratio) && change < 0.05;
    const std::string tag = "estimate.n=" + std::to_string(n) + ".";
    cert.add(tag + "ratio_half_xi_max", e1.ratio);
    cert.add(tag + "ratio_xi_max", e2.ratio);
    cert.add(tag + "tuples", static_cast<long long>(e2.tuples));
    cert.add(tag + "relative_change", change);
    cert.add_verdict(tag + "stable", stable);
    ok = ok && stable;
  }

  log("s_n identity on " + std::to_string(c.sn_tuples) + " tuples");
  const SnIdentityReport sn = verify_sn_identity(metric, 2, c.sn_tuples, c.seed);
  cert.append(sn.report());
  ok = ok && sn.pass;
  summary.add("audit", ok ? "pass" : "fail");
}

}  // namespace

std::string diagnostics_header(int dim, const std::vector<double>& norm_orders) {
  std::string h = "t,energy";
  for (int c = 1; c <= dim; ++c) h += ",mom_" + std::to_string(c);
  h += ",sup_grad_u";
  for (double q : norm_orders) h += ",h_norm_" + short_number(q);
  return h;
}

std::string diagnostics_row(const Diagnostics& row) {
  std::string s = format_double(row.t) + "," + format_double(row.energy);
  for (double m : row.momentum) s += "," + format_double(m);
  s += "," + format_double(row.sup_grad_u);
  for (double q : row.sobolev_norms) s += "," + format_double(q);
  return s;
}

ScenarioResult run_scenario(const RunConfig& config, std::ostream& log_stream, bool quiet) {
  const Logger log(log_stream, quiet);
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

  const MatrixSymbol metric = metric_symbol(config);
  ScenarioResult result;
  result.summary = describe_run(config, metric);
  Report& cert = result.certificates;
  Report& summary = result.summary;

  if (is_simulation(config.scenario)) {
    const TorusGrid grid = config.grid();
    const FourierMultiplier a(grid, metric);
    if (!a.invertible())
      throw ConfigError("metric: symbol '" + metric.name() + "' failed the ellipticity check, cannot invert it");
    const SpectralField u0 = drop_nyquist(initial_velocity(config, grid, metric));
    const EulerState initial = state_from_velocity(a, u0);
    const SimulationOutcome sim = simulate(config, a, initial, dir, cert, summary, log);
    result.exit_code = sim.exit_code;
    if (config.scenario == Scenario::consistency) consistency_check(config, a, u0, sim, cert, summary, log);
  } else {
    write_file(dir / "diagnostics.csv", diagnostics_header(config.dimension, config.norm_orders) + "\n");
    if (config.scenario == Scenario::symbol_audit)
      symbol_audit(config, metric, cert, summary, log);
    else
      conjugation_audit(config, metric, cert, summary, log);
  }

  write_file(dir / "certificates.txt", cert.str());
  write_file(dir / "summary.txt", summary.str());
  log("wrote " + (dir / "summary.txt").string());
  return result;
}

std::string list_scenarios_text() {
  return R"(gaussian_blob
  keys: grid.dimension grid.points metric.s integrator.dt integrator.t_end [scenario.amplitude scenario.width scenario.center]
  Gaussian velocity bump integrated with RK4; diagnostics, conservation and regularity report.
random_bandlimited
  keys: grid.dimension grid.points metric.s integrator.dt integrator.t_end [scenario.band scenario.norm scenario.norm_order run.seed]
  Random velocity on |k| <= band scaled to a given Sobolev norm; seeded and reproducible.
peakon_pair
  keys: grid.dimension grid.points metric.s integrator.dt integrator.t_end [scenario.amplitude scenario.separation scenario.ell scenario.delta]
  Odd smoothed peakon/antipeakon pair; gradient blow-up detection confirmed by a dt/2 rerun.
symbol_audit
  keys: grid.dimension metric.s [audit.xi_max audit.max_alpha audit.sphere_samples audit.shear_t audit.sylvester_trials]
  Order, ellipticity and square-root certificates for the metric, Sylvester trials, shear family ellipticity.
conjugation_audit
  keys: grid.dimension metric.s [audit.points audit.trials audit.xi_max audit.sn_tuples]
  Commutator operators A_n: recursive vs convolution oracle, C_n estimate stability, s_n identity.
consistency
  keys: grid.dimension grid.points metric.s integrator.dt integrator.t_end [scenario.amplitude scenario.width]
  Gaussian bump run by the Eulerian solver and the Lagrangian spray; reports their velocity gap.
)";
}

}  // namespace sobolev
