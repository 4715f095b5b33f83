// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Tolerances and problem sizes are fixed here; nothing is read from the
// environment. Runs single-threaded and deterministically.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sobolev/calculus.hpp"
#include "sobolev/conjugation.hpp"
#include "sobolev/epdiff.hpp"
#include "sobolev/initial_data.hpp"
#include "sobolev/lagrangian.hpp"
#include "sobolev/operator.hpp"
#include "sobolev/symbol.hpp"

using namespace sobolev;

namespace {

// Pinned tolerances.
constexpr double kOracleTol = 1e-10;
constexpr double kOracleSeconds = 120.0;
constexpr double kSquareTol = 1e-12;
constexpr int kSquareSamples = 10000;
constexpr int kSylvesterInstances = 1000;
constexpr int kSphereSamples = 10000;
constexpr double kEnergyDriftTol = 1e-6;
constexpr double kMomentumDriftTol = 1e-10;
constexpr double kConservationSeconds = 60.0;
constexpr double kRegularityBound = 1e3;
constexpr double kBlowupShiftTol = 0.05;
constexpr double kRegimeSeconds = 600.0;
constexpr double kConsistencyTol = 1e-6;
constexpr double kCnChangeTol = 0.05;
constexpr double kSnTol = 1e-10;
constexpr double kOrderRatioLo = 14.0;
constexpr double kOrderRatioHi = 18.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_diff(const SpectralField& a, const SpectralField& b) {
  const double scale = std::max(a.max_abs(), b.max_abs());
  return scale == 0.0 ? 0.0 : (a - b).max_abs() / scale;
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case { int dim, points; };
  double worst = 0.0;
  int compared = 0;
  for (const Case c : {Case{1, 16}, Case{2, 8}}) {
    const TorusGrid g(c.dim, c.points);
    const auto a = sobolev_multiplier(g, 1.5);
    for (int n = 1; n <= 2; ++n) {
      const int band = std::max(1, (c.points / 2 - 1) / (n + 1));
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<SpectralField> u;
        for (int k = 0; k <= n; ++k)
          u.push_back(random_bandlimited(g, c.dim, band, 0.0, 1.0, 100000 * c.dim + 1000 * n + 10 * trial + k));
        worst = std::max(worst, rel_diff(apply_An_convolution(a->symbol(), n, u), apply_An_recursive(*a, n, u)));
        ++compared;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= kOracleTol && secs < kOracleSeconds,
          "max relative defect " + fmt("%.2e", worst) + " over " + std::to_string(compared) +
              " input sets (tol 1e-10), " + fmt("%.1f", secs) + " s (limit 120 s)"};
}

Outcome square_root() {
  double worst = 0.0;
  bool certs = true;
  std::string notes;
  const std::vector<MatrixSymbol> symbols{sobolev_symbol(1.5, 2), random_hpd_symbol(2, 3.0, 2024),
                                          random_hpd_symbol(3, 3.0, 2025)};
  for (const auto& a : symbols) {
    const MatrixSymbol b = sqrt_symbol(a);
    worst = std::max(worst, square_defect(b, a, random_frequencies(a.dim(), kSquareSamples, 1e-2, 1e3, 7)));
    const bool order_ok = check_order_estimate(b, 2, 1e3).pass && b.order() == 0.5 * a.order();
    const bool ell_ok = check_ellipticity(b, 1e3).pass;
    certs = certs && order_ok && ell_ok;
  }
  return {worst <= kSquareTol && certs, "max ||b^2 - a||/||a|| " + fmt("%.2e", worst) +
                                            " on 1e4 samples x 3 symbols (tol 1e-12); order-r/2 and "
                                            "ellipticity certificates " +
                                            (certs ? "pass" : "FAIL")};
}

Outcome sylvester() {
  const SylvesterTrials t = sylvester_trials(kSylvesterInstances, 4242);
  return {t.violations == 0 && t.instances == kSylvesterInstances,
          std::to_string(t.instances) + " instances, d in 1..4: max residual " + fmt("%.2e", t.max_residual) +
              ", max ||x||/bound " + fmt("%.3f", t.max_bound_ratio) + ", violations " +
              std::to_string(t.violations)};
}

Outcome ellipticity_boundary() {
  const ClassCertificate below = check_strong_ellipticity(shear_laplacian_symbol(1.99), kSphereSamples);
  const ClassCertificate above = check_strong_ellipticity(shear_laplacian_symbol(2.01), kSphereSamples);
  bool normal = true;
  for (double t : {0.0, 1.0, 5.0, 100.0}) normal = normal && check_normal_ellipticity(shear_laplacian_symbol(t), kSphereSamples).pass;
  const double four_pi_sq = 4.0 * kPi * kPi;
  return {below.pass && !above.pass && normal,
          "strong: t=1.99 " + std::string(below.pass ? "pass" : "fail") + " (alpha/4pi^2 " +
              fmt("%.4f", below.measured_constant / four_pi_sq) + "), t=2.01 " + (above.pass ? "pass" : "fail") +
              " (" + fmt("%.4f", above.measured_constant / four_pi_sq) + "); normal for t in {0,1,5,100}: " +
              (normal ? "pass" : "FAIL")};
}

Outcome conservation() {
  const auto t0 = std::chrono::steady_clock::now();
  const TorusGrid g(1, 256);
  const auto a = sobolev_multiplier(g, 1.5);
  IntegratorOptions opt;
  opt.dt = 1e-3;
  opt.t_end = 1.0;
  opt.cadence = 1;
  const Trajectory tr = integrate(*a, state_from_velocity(*a, gaussian_blob(g, 0.3, 0.1, {0.5, 0, 0})), opt);
  double de = 0.0, dm = 0.0;
  for (const auto& row : tr.rows) {
    de = std::max(de, std::abs(row.energy - tr.rows.front().energy) / tr.rows.front().energy);
    dm = std::max(dm, std::abs(row.momentum[0] - tr.rows.front().momentum[0]));
  }
  const double secs = seconds_since(t0);
  return {tr.status == RunStatus::completed && de <= kEnergyDriftTol && dm <= kMomentumDriftTol &&
              secs < kConservationSeconds,
          "energy drift " + fmt("%.2e", de) + " (tol 1e-6), momentum drift " + fmt("%.2e", dm) +
              " (tol 1e-10), " + std::to_string(tr.steps) + " steps, " + fmt("%.1f", secs) + " s"};
}

Outcome regimes() {
  const auto t0 = std::chrono::steady_clock::now();
  // Global regime: H^2 metric, long run.
  const TorusGrid g(1, 256);
  const auto a2 = sobolev_multiplier(g, 2.0);
  IntegratorOptions opt;
  opt.dt = 1e-3;
  opt.t_end = 50.0;
  opt.cadence = 500;
  opt.cfl = 0.1;
  opt.norm_orders = {2.0, 3.0, 4.0};
  const EulerState s2 = state_from_velocity(*a2, peakon_pair(g, 1.0, 0.2, 0.2, 0.02));
  const Trajectory smooth = integrate(*a2, s2, opt);
  double grad_max = 0.0;
  for (const auto& row : smooth.rows) grad_max = std::max(grad_max, row.sup_grad_u);
  const RegularityProbe probe = regularity_probe(smooth, opt.norm_orders, kRegularityBound);
  double ratio_max = 0.0;
  for (double r : probe.max_ratio) ratio_max = std::max(ratio_max, r);
  const bool global_ok = smooth.status == RunStatus::completed && probe.pass && std::isfinite(grad_max);

  // Blow-up regime: H^1 (Camassa-Holm), odd data, explicit threshold.
  const TorusGrid fine(1, 2048);
  const auto a1 = sobolev_multiplier(fine, 1.0);
  IntegratorOptions ch;
  ch.dt = 1e-4;
  ch.t_end = 1.0;
  ch.cadence = 1000;
  ch.blowup_threshold = 50.0;
  const BlowupVerdict v =
      detect_blowup(*a1, state_from_velocity(*a1, peakon_pair(fine, 1.0, 0.2, 0.2, 0.02)), ch, kBlowupShiftTol);
  const double secs = seconds_since(t0);
  return {global_ok && v.blowup && v.confirmed && secs < kRegimeSeconds,
          "s=2 to t=50: " + std::string(to_string(smooth.status)) + ", max sup|du| " + fmt("%.2f", grad_max) +
              ", max H^q ratio " + fmt("%.2f", ratio_max) + " (bound 1e3); s=1: t* " + fmt("%.6f", v.t_star) +
              ", dt/2 shift " + fmt("%.1e", v.relative_shift) + " (tol 5%), " + fmt("%.0f", secs) +
              " s (limit 600 s)"};
}

Outcome consistency() {
  const TorusGrid g(1, 256);
  const auto a = sobolev_multiplier(g, 1.5);
  const SpectralField u0 = gaussian_blob(g, 0.3, 0.1, {0.5, 0, 0});
  const LagrangianRun lag = integrate_lagrangian(*a, u0, 1e-3, 0.1);
  IntegratorOptions opt;
  opt.dt = 1e-3;
  opt.t_end = 0.1;
  opt.cadence = 100;
  const Trajectory eul = integrate(*a, state_from_velocity(*a, u0), opt);
  const double gap = sup_norm(eulerian_velocity(lag.final_state) - eul.last_good.u);
  return {gap <= kConsistencyTol, "sup|v o phi^-1 - u| at t=0.1: " + fmt("%.2e", gap) + " (tol 1e-6)"};
}

Outcome cn_stability() {
  double worst_change = 0.0;
  bool finite = true;
  std::string ratios;
  for (int n = 1; n <= 2; ++n) {
    for (double s : {0.5, 1.0, 1.5, 2.0}) {
      TupleSampling half;
      half.xi_max = 500.0;
      TupleSampling full;
      full.xi_max = 1000.0;
      const double r1 = estimate_Cn(sobolev_symbol(s, 1), n, half).ratio;
      const double r2 = estimate_Cn(sobolev_symbol(s, 1), n, full).ratio;
      finite = finite && std::isfinite(r1) && std::isfinite(r2) && r2 > 0.0;
      worst_change = std::max(worst_change, std::abs(r2 - r1) / r1);
      if (s == 2.0) ratios += " C_" + std::to_string(n) + "(s=2)=" + fmt("%.3f", r2);
    }
  }
  return {finite && worst_change < kCnChangeTol,
          "n in {1,2}, s in {0.5,1,1.5,2}: max relative change " + fmt("%.2e", worst_change) +
              " for xi_max 500 -> 1000 (tol 5%);" + ratios};
}

Outcome sn_identity() {
  double worst = 0.0;
  bool pass = true;
  for (int d = 1; d <= 2; ++d) {
    const SnIdentityReport r = verify_sn_identity(sobolev_symbol(1.5, d), 2, 100, 31 + d);
    worst = std::max({worst, r.max_identity_defect, r.max_symmetry_defect});
    pass = pass && r.pass;
  }
  return {pass && worst <= kSnTol, "100 tuples, n in {1,2}, d in {1,2}: max relative defect " + fmt("%.2e", worst) +
                                       " (tol 1e-10)"};
}

Outcome self_convergence() {
  const TorusGrid g(1, 64);
  const auto a = sobolev_multiplier(g, 1.5);
  const EulerState s0 = state_from_velocity(*a, gaussian_blob(g, 1.0, 0.1, {0.5, 0, 0}));
  auto run = [&](double dt) {
    IntegratorOptions opt;
    opt.dt = dt;
    opt.t_end = 0.4;
    opt.cadence = 1000000;
    return integrate(*a, s0, opt).last_good.m;
  };
  const double dt = 0.4 / 80.0;  // below the CFL limit, no substeps
  const SpectralField ref = run(dt / 8.0);
  const double e1 = (run(dt) - ref).max_abs();
  const double e2 = (run(dt / 2.0) - ref).max_abs();
  const double ratio = e1 / e2;
  return {ratio >= kOrderRatioLo && ratio <= kOrderRatioHi,
          "error(dt)/error(dt/2) = " + fmt("%.3f", ratio) + " against a dt/8 reference (band [14, 18])"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"C1", "A_n recursion vs convolution oracle", oracle_equivalence},
      {"C2", "square root of E^r symbols", square_root},
      {"C3", "Sylvester residual and bound", sylvester},
      {"C4", "strong/normal ellipticity boundary", ellipticity_boundary},
      {"C5", "energy and momentum conservation", conservation},
      {"C6", "global vs blow-up regimes", regimes},
      {"C7", "Eulerian-Lagrangian consistency", consistency},
      {"C8", "C_n estimate stability", cn_stability},
      {"C9", "s_n identity", sn_identity},
      {"C10", "RK4 self-convergence", self_convergence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %-4s %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
