#include "sobolev/epdiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sobolev/calculus.hpp"
#include "sobolev/report.hpp"

namespace sobolev {
namespace {

void require_vector(const SpectralField& f, const char* what) {
  if (f.components() != f.grid().dim()) throw GridMismatch(std::string(what) + ": expected a vector field");
}

void require_invertible(const FourierMultiplier& a, const char* what) {
  if (!a.invertible())
    throw NotElliptic(std::string(what) + ": inertia operator '" + a.symbol().name() + "' is not elliptic");
}

bool all_finite(const SpectralField& f) {
  for (const auto& c : f.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace

EulerState state_from_velocity(const FourierMultiplier& a, const SpectralField& u, double t) {
  require_vector(u, "state_from_velocity");
  SpectralField clean = drop_nyquist(u);
  SpectralField m = a.apply(clean);
  return {t, std::move(m), std::move(clean)};
}

EulerState state_from_momentum(const FourierMultiplier& a, const SpectralField& m, double t) {
  require_vector(m, "state_from_momentum");
  require_invertible(a, "state_from_momentum");
  SpectralField clean = drop_nyquist(m);
  SpectralField u = a.apply_inverse(clean);
  return {t, std::move(clean), std::move(u)};
}

double energy(const EulerState& state) { return 0.5 * l2_pairing(state.m, state.u); }

Diagnostics diagnose(const EulerState& state, const std::vector<double>& norm_orders) {
  Diagnostics d;
  d.t = state.t;
  d.energy = energy(state);
  for (int c = 0; c < state.m.components(); ++c) d.momentum.push_back(state.m(c, 0).real());
  d.sup_grad_u = sup_gradient_norm(state.u);
  for (double q : norm_orders) d.sobolev_norms.push_back(sobolev_norm(state.u, q));
  return d;
}

SpectralField epdiff_nonlinearity(const SpectralField& v, const SpectralField& m) {
  require_vector(v, "epdiff_nonlinearity");
  require_vector(m, "epdiff_nonlinearity");
  require_same_grid(v.grid(), m.grid(), "epdiff_nonlinearity");
  const TorusGrid& grid = v.grid();
  const int d = grid.dim();
  const Dealiaser& dealias = Dealiaser::for_grid(grid);
  const std::size_t size = dealias.padded_size();

  std::vector<std::vector<double>> vp(d), mp(d);
  std::vector<SpectralField> dv, dm;
  for (int j = 0; j < d; ++j) {
    vp[j] = dealias.to_padded(v.component(j));
    mp[j] = dealias.to_padded(m.component(j));
    dv.push_back(spectral_gradient(v, j));
    dm.push_back(spectral_gradient(m, j));
  }
  // jac[i][j] = d_i v_j on the padded grid.
  std::vector<std::vector<std::vector<double>>> jac(d, std::vector<std::vector<double>>(d));
  std::vector<double> div(size, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      jac[i][j] = dealias.to_padded(dv[i].component(j));
      if (i == j)
        for (std::size_t p = 0; p < size; ++p) div[p] += jac[i][j][p];
    }

  SpectralField out(grid, d);
  std::vector<double> acc(size);
  for (int i = 0; i < d; ++i) {
    for (std::size_t p = 0; p < size; ++p) acc[p] = div[p] * mp[i][p];
    for (int j = 0; j < d; ++j) {
      const auto dj_mi = dealias.to_padded(dm[j].component(i));
      for (std::size_t p = 0; p < size; ++p) acc[p] += vp[j][p] * dj_mi[p] + jac[i][j][p] * mp[j][p];
    }
    dealias.from_padded(acc, out.component(i));
  }
  return out;
}

SpectralField ad_transpose(const FourierMultiplier& a, const SpectralField& v, const SpectralField& u) {
  require_invertible(a, "ad_transpose");
  return a.apply_inverse(epdiff_nonlinearity(v, a.apply(u)));
}

SpectralField arnold_B(const FourierMultiplier& a, const SpectralField& u, const SpectralField& v) {
  SpectralField out = ad_transpose(a, u, v);
  out += ad_transpose(a, v, u);
  out *= 0.5;
  return out;
}

SpectralField euler_rhs(const FourierMultiplier& a, const SpectralField& m) {
  require_invertible(a, "euler_rhs");
  SpectralField out = epdiff_nonlinearity(a.apply_inverse(m), m);
  out *= -1.0;
  return out;
}

SpectralField velocity_rhs(const FourierMultiplier& a, const SpectralField& u) {
  SpectralField out = arnold_B(a, u, u);
  out *= -1.0;
  return out;
}

EulerState step_rk4(const FourierMultiplier& a, const EulerState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
  const SpectralField& m = state.m;
  const SpectralField k1 = euler_rhs(a, m);
  SpectralField tmp = m;
  tmp.axpy(0.5 * dt, k1);
  const SpectralField k2 = euler_rhs(a, tmp);
  tmp = m;
  tmp.axpy(0.5 * dt, k2);
  const SpectralField k3 = euler_rhs(a, tmp);
  tmp = m;
  tmp.axpy(dt, k3);
  const SpectralField k4 = euler_rhs(a, tmp);
  SpectralField next = m;
  next.axpy(dt / 6.0, k1);
  next.axpy(dt / 3.0, k2);
  next.axpy(dt / 3.0, k3);
  next.axpy(dt / 6.0, k4);
  SpectralField u = a.apply_inverse(next);
  return {state.t + dt, std::move(next), std::move(u)};
}

double cfl_limit(const SpectralField& u, double cfl) {
  const double umax = sup_norm(u);
  if (umax == 0.0) return std::numeric_limits<double>::infinity();
  return cfl * u.grid().spacing() / umax;
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup: return "blowup";
    case RunStatus::nan_abort: return "nan_abort";
  }
  return "unknown";
}

Trajectory integrate(const FourierMultiplier& a, const EulerState& initial, const IntegratorOptions& options,
                     const TrajectoryObserver& observer) {
  if (!(options.dt > 0.0) || !std::isfinite(options.dt)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(options.t_end >= initial.t)) throw std::invalid_argument("integrate: t_end precedes the initial time");
  if (options.cadence < 1) throw std::invalid_argument("integrate: cadence must be >= 1");
  if (options.max_halvings < 0) throw std::invalid_argument("integrate: max_halvings must be >= 0");
  require_invertible(a, "integrate");

  Trajectory tr;
  tr.last_good = initial;
  EulerState state = initial;
  const double g0 = sup_gradient_norm(state.u);
  tr.threshold = options.blowup_threshold.value_or(1e3 * (g0 + 1.0));

  auto emit = [&](const EulerState& s) {
    Diagnostics row = diagnose(s, options.norm_orders);
    tr.rows.push_back(row);
    if (options.keep_snapshots) tr.snapshots.push_back(s);
    if (observer) observer(row, s);
  };
  emit(state);

  const double t0 = initial.t;
  const double span = options.t_end - t0;
  const long long nsteps = static_cast<long long>(std::ceil(span / options.dt - 1e-9));
  const double spacing = a.grid().spacing();
  int level = 0;
  double prev_grad = g0;

  for (long long step = 1; step <= nsteps; ++step) {
    const double target = (step == nsteps) ? options.t_end : t0 + static_cast<double>(step) * options.dt;
    while (target - state.t > 1e-12 * std::max(1.0, std::abs(target))) {
      const double h = std::min(std::ldexp(options.dt, -level), target - state.t);
      const double umax = sup_norm(state.u);
      if (h * umax > options.cfl * spacing) {
        if (++level > options.max_halvings) {
          tr.status = RunStatus::blowup;
          tr.dt_underflow = true;
          tr.crossing_time = state.t;
          tr.message = "step size underflow after " + std::to_string(options.max_halvings) + " halvings at t=" +
                       format_double(state.t);
          if (tr.rows.back().t < state.t) emit(state);
          return tr;
        }
        continue;
      }
      EulerState next = step_rk4(a, state, h);
      const double g = all_finite(next.m) ? sup_gradient_norm(next.u) : std::numeric_limits<double>::quiet_NaN();
      if (!std::isfinite(g)) {
        tr.status = RunStatus::nan_abort;
        tr.message = "non-finite coefficients after the step from t=" + format_double(state.t);
        if (tr.rows.back().t < state.t) emit(state);
        return tr;
      }
      ++tr.steps;
      if (g >= tr.threshold) {
        const double frac = (g > prev_grad) ? (tr.threshold - prev_grad) / (g - prev_grad) : 1.0;
        tr.crossing_time = state.t + std::clamp(frac, 0.0, 1.0) * h;
        tr.status = RunStatus::blowup;
        tr.message = "sup|du| reached " + format_double(g) + " >= threshold " + format_double(tr.threshold);
        tr.last_good = next;
        emit(next);
        return tr;
      }
      state = std::move(next);
      prev_grad = g;
      tr.last_good = state;
    }
    state.t = target;
    tr.last_good.t = target;
    if (step % options.cadence == 0 || step == nsteps) emit(state);
  }
  return tr;
}

std::string BlowupVerdict::summary() const { return blowup ? "t=" + format_double(t_star) : "none"; }

BlowupVerdict detect_blowup(const Trajectory& trajectory) {
  BlowupVerdict v;
  if (trajectory.status == RunStatus::blowup && trajectory.crossing_time) {
    v.blowup = true;
    v.t_star = *trajectory.crossing_time;
  }
  return v;
}

BlowupVerdict detect_blowup(const Trajectory& coarse, const Trajectory& refined, double tolerance) {
  BlowupVerdict v = detect_blowup(coarse);
  const BlowupVerdict r = detect_blowup(refined);
  if (!v.blowup) return v;
  if (!r.blowup) {
    v.blowup = false;
    return v;
  }
  v.t_star_refined = r.t_star;
  v.relative_shift = std::abs(r.t_star - v.t_star) / std::max(std::abs(v.t_star), 1e-300);
  v.confirmed = v.relative_shift <= tolerance;
  v.blowup = v.confirmed;
  return v;
}

BlowupVerdict detect_blowup(const FourierMultiplier& a, const EulerState& initial, IntegratorOptions options,
                            double tolerance) {
  options.keep_snapshots = false;
  const Trajectory coarse = integrate(a, initial, options);
  if (coarse.status != RunStatus::blowup) return detect_blowup(coarse);
  options.dt *= 0.5;
  options.cadence *= 2;
  options.blowup_threshold = coarse.threshold;
  const Trajectory refined = integrate(a, initial, options);
  return detect_blowup(coarse, refined, tolerance);
}

}  // namespace sobolev
