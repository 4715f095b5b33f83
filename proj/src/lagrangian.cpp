#include "sobolev/lagrangian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sobolev/calculus.hpp"

namespace sobolev {
namespace {

double determinant(const std::array<double, 9>& j, int d) {
  if (d == 1) return j[0];
  if (d == 2) return j[0] * j[3] - j[1] * j[2];
  return j[0] * (j[4] * j[8] - j[5] * j[7]) - j[1] * (j[3] * j[8] - j[5] * j[6]) + j[2] * (j[3] * j[7] - j[4] * j[6]);
}

// Nearest periodic representative of a difference.
double wrap_difference(double dx, double L) { return dx - L * std::round(dx / L); }

SpectralField sample_to_field(const TorusGrid& grid, int components, std::vector<double> values) {
  return forward_transform(RealField(grid, components, std::move(values)));
}

}  // namespace

// ---------------------------------------------------------------------------
// DiffeoChart

DiffeoChart::DiffeoChart(SpectralField f)
    : f_(std::move(f)), samples_(f_.grid(), f_.grid().dim()), det_(f_.grid(), 1) {
  const TorusGrid& grid = f_.grid();
  const int d = grid.dim();
  if (f_.components() != d) throw InvalidChart("DiffeoChart: displacement must be a vector field");
  samples_ = inverse_transform(f_);

  std::vector<SpectralField> grads;
  for (int j = 0; j < d; ++j) grads.push_back(spectral_gradient(f_, j));
  std::vector<RealField> grad_samples;
  for (int j = 0; j < d; ++j) grad_samples.push_back(inverse_transform(grads[j]));

  min_det_ = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    std::array<double, 9> jac{};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) jac[i * d + j] = (i == j ? 1.0 : 0.0) + grad_samples[j](i, p);
    det_(0, p) = determinant(jac, d);
    min_det_ = std::min(min_det_, det_(0, p));
  }
  if (!(min_det_ > 0.0))
    throw InvalidChart("DiffeoChart: det(I + df) has minimum " + format_double(min_det_) + " <= 0");

  f_spline_ = std::make_shared<const std::vector<PeriodicSpline>>(splines_of(f_));
  std::vector<PeriodicSpline> dfs;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) dfs.emplace_back(grads[j], i);
  df_spline_ = std::make_shared<const std::vector<PeriodicSpline>>(std::move(dfs));
}

DiffeoChart DiffeoChart::identity(const TorusGrid& grid) { return DiffeoChart(SpectralField::vector(grid)); }

Point DiffeoChart::operator()(const Point& x) const {
  Point y = x;
  for (int a = 0; a < grid().dim(); ++a) y[a] += (*f_spline_)[a](x);
  return y;
}

std::array<double, 9> DiffeoChart::jacobian(const Point& x) const {
  const int d = grid().dim();
  std::array<double, 9> jac{};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) jac[i * d + j] = (i == j ? 1.0 : 0.0) + (*df_spline_)[i * d + j](x);
  return jac;
}

RealField jacobian_det(const DiffeoChart& phi) { return phi.jacobian_det(); }

// ---------------------------------------------------------------------------
// Composition and inversion

SpectralField compose(const SpectralField& u, const DiffeoChart& phi) {
  const TorusGrid& grid = phi.grid();
  require_same_grid(grid, u.grid(), "compose");
  const auto splines = splines_of(u);
  const RealField& f = phi.displacement_samples();
  std::vector<double> values(grid.size() * u.components());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    Point y = grid.point(p);
    for (int a = 0; a < grid.dim(); ++a) y[a] += f(a, p);
    for (int c = 0; c < u.components(); ++c) values[c * grid.size() + p] = splines[c](y);
  }
  return sample_to_field(grid, u.components(), std::move(values));
}

DiffeoChart compose_diffeo(const DiffeoChart& phi, const DiffeoChart& psi) {
  require_same_grid(phi.grid(), psi.grid(), "compose_diffeo");
  SpectralField g = psi.displacement();
  g += compose(phi.displacement(), psi);
  return DiffeoChart(std::move(g));
}

DiffeoChart invert(const DiffeoChart& phi, const InversionOptions& options) {
  const TorusGrid& grid = phi.grid();
  const int d = grid.dim();
  const double L = grid.length();
  const double tol = options.tolerance * L;
  const RealField& f = phi.displacement_samples();
  std::vector<double> g(grid.size() * d);

  using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Point x = grid.point(p);
    // F(g) = x + g + f(x + g) - x = g + f(x + g).
    auto residual = [&](const Vec& gv) {
      Point y = x;
      for (int a = 0; a < d; ++a) y[a] += gv(a);
      const Point z = phi(y);
      Vec r(d);
      for (int a = 0; a < d; ++a) r(a) = wrap_difference(z[a] - x[a], L);
      return r;
    };
    Vec gv(d);
    for (int a = 0; a < d; ++a) gv(a) = -f(a, p);
    Vec r = residual(gv);
    int it = 0;
    while (r.lpNorm<Eigen::Infinity>() > tol) {
      if (++it > options.max_iterations)
        throw InversionFailure("invert: Newton did not converge within " + std::to_string(options.max_iterations) +
                               " iterations at grid point " + std::to_string(p) + " (residual " +
                               format_double(r.lpNorm<Eigen::Infinity>()) + ")");
      Point y = x;
      for (int a = 0; a < d; ++a) y[a] += gv(a);
      const auto jac = phi.jacobian(y);
      Mat jm(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) jm(i, j) = jac[i * d + j];
      Vec step = jm.partialPivLu().solve(r);
      if (!step.allFinite()) step = r;  // fixed-point fallback
      double damp = 1.0;
      Vec trial = gv - step;
      Vec rt = residual(trial);
      while (rt.norm() >= r.norm() && damp > 1.0 / 64.0) {
        damp *= 0.5;
        trial = gv - damp * step;
        rt = residual(trial);
      }
      gv = trial;
      r = rt;
    }
    for (int a = 0; a < d; ++a) g[a * grid.size() + p] = gv(a);
  }
  return DiffeoChart(sample_to_field(grid, d, std::move(g)));
}

double inversion_residual(const DiffeoChart& phi, const DiffeoChart& psi) {
  const TorusGrid& grid = phi.grid();
  require_same_grid(grid, psi.grid(), "inversion_residual");
  const RealField& g = psi.displacement_samples();
  double worst = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Point x = grid.point(p);
    Point y = x;
    for (int a = 0; a < grid.dim(); ++a) y[a] += g(a, p);
    const Point z = phi(y);
    for (int a = 0; a < grid.dim(); ++a)
      worst = std::max(worst, std::abs(wrap_difference(z[a] - x[a], grid.length())));
  }
  return worst;
}

double distance_dq(const DiffeoChart& phi1, const DiffeoChart& phi2, double q) {
  require_same_grid(phi1.grid(), phi2.grid(), "distance_dq");
  const double h = sobolev_norm(phi1.displacement() - phi2.displacement(), q);
  double sup = 0.0;
  const auto& d1 = phi1.jacobian_det();
  const auto& d2 = phi2.jacobian_det();
  for (std::size_t p = 0; p < phi1.grid().size(); ++p) sup = std::max(sup, std::abs(1.0 / d1(0, p) - 1.0 / d2(0, p)));
  return h + sup;
}

// ---------------------------------------------------------------------------
// Spray

SpectralField commutator_term(const FourierMultiplier& a, const SpectralField& u) {
  SpectralField out = a.apply(covariant_derivative(u, u));
  out -= covariant_derivative(u, a.apply(u));
  return out;
}

SpectralField spray_at_identity(const FourierMultiplier& a, const SpectralField& u) {
  if (!a.invertible()) throw NotElliptic("spray_at_identity: inertia operator is not elliptic");
  const SpectralField au = a.apply(u);
  // (grad u)^t A u + (div u) A u = N(u, A u) - grad_u A u.
  SpectralField rest = epdiff_nonlinearity(u, au);
  rest -= covariant_derivative(u, au);
  SpectralField inner = commutator_term(a, u);
  inner -= rest;
  return a.apply_inverse(inner);
}

SpectralField eulerian_velocity(const GeodesicState& state) {
  return compose(state.v, invert(state.phi));
}

SprayValue spray_rhs(const FourierMultiplier& a, const GeodesicState& state) {
  require_same_grid(state.phi.grid(), state.v.grid(), "spray_rhs");
  const SpectralField u = eulerian_velocity(state);
  return {state.v, compose(spray_at_identity(a, u), state.phi)};
}

GeodesicState step_lagrangian(const FourierMultiplier& a, const GeodesicState& state, double dt) {
  const SpectralField& f = state.phi.displacement();
  auto stage = [&](const SprayValue& k, double h) {
    SpectralField fs = f;
    fs.axpy(h, k.dphi);
    SpectralField vs = state.v;
    vs.axpy(h, k.dv);
    return GeodesicState{state.t + h, DiffeoChart(std::move(fs)), std::move(vs)};
  };
  const SprayValue k1 = spray_rhs(a, state);
  const SprayValue k2 = spray_rhs(a, stage(k1, 0.5 * dt));
  const SprayValue k3 = spray_rhs(a, stage(k2, 0.5 * dt));
  const SprayValue k4 = spray_rhs(a, stage(k3, dt));
  SpectralField fn = f;
  SpectralField vn = state.v;
  const double w[4] = {dt / 6.0, dt / 3.0, dt / 3.0, dt / 6.0};
  const SprayValue* ks[4] = {&k1, &k2, &k3, &k4};
  for (int s = 0; s < 4; ++s) {
    fn.axpy(w[s], ks[s]->dphi);
    vn.axpy(w[s], ks[s]->dv);
  }
  return {state.t + dt, DiffeoChart(std::move(fn)), std::move(vn)};
}

double lagrangian_energy(const FourierMultiplier& a, const GeodesicState& state) {
  const TorusGrid& grid = state.phi.grid();
  const SpectralField u = eulerian_velocity(state);
  const RealField au_phi = inverse_transform(compose(a.apply(u), state.phi));
  const RealField v = inverse_transform(state.v);
  const RealField& det = state.phi.jacobian_det();
  double sum = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    double dot = 0.0;
    for (int c = 0; c < grid.dim(); ++c) dot += au_phi(c, p) * v(c, p);
    sum += dot * det(0, p);
  }
  return 0.5 * sum * grid.cell_volume();
}

LagrangianRun integrate_lagrangian(const FourierMultiplier& a, const SpectralField& u0, double dt, double t_end) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_lagrangian: dt must be positive");
  GeodesicState state{0.0, DiffeoChart::identity(u0.grid()), drop_nyquist(u0)};
  double min_det = state.phi.min_det();
  const long long nsteps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
  std::size_t steps = 0;
  for (long long s = 1; s <= nsteps; ++s) {
    const double target = (s == nsteps) ? t_end : static_cast<double>(s) * dt;
    state = step_lagrangian(a, state, target - state.t);
    state.t = target;
    min_det = std::min(min_det, state.phi.min_det());
    ++steps;
  }
  return {std::move(state), min_det, steps};
}

// ---------------------------------------------------------------------------
// Regularity probe

Report RegularityProbe::report() const {
  Report r;
  for (std::size_t i = 0; i < orders.size(); ++i)
    r.add("regularity.max_ratio_h" + format_double(orders[i]), max_ratio[i]);
  r.add("regularity.bound", bound);
  r.add_verdict("regularity", pass);
  return r;
}

namespace {

RegularityProbe finish_probe(std::vector<double> orders, std::vector<double> ratio, double bound) {
  RegularityProbe probe;
  probe.orders = std::move(orders);
  probe.max_ratio = std::move(ratio);
  probe.bound = bound;
  probe.pass = std::all_of(probe.max_ratio.begin(), probe.max_ratio.end(),
                           [bound](double r) { return std::isfinite(r) && r <= bound; });
  return probe;
}

double safe_ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

RegularityProbe regularity_probe(const std::vector<SpectralField>& velocities, const std::vector<double>& orders,
                                 double bound) {
  std::vector<double> ratio(orders.size(), 1.0);
  if (velocities.empty()) return finish_probe(orders, ratio, bound);
  for (std::size_t q = 0; q < orders.size(); ++q) {
    const double base = sobolev_norm(velocities.front(), orders[q]);
    for (const auto& u : velocities) ratio[q] = std::max(ratio[q], safe_ratio(sobolev_norm(u, orders[q]), base));
  }
  return finish_probe(orders, ratio, bound);
}

RegularityProbe regularity_probe(const Trajectory& trajectory, const std::vector<double>& orders, double bound) {
  std::vector<double> ratio(orders.size(), 1.0);
  if (trajectory.rows.empty()) return finish_probe(orders, ratio, bound);
  for (std::size_t q = 0; q < orders.size(); ++q) {
    if (trajectory.rows.front().sobolev_norms.size() <= q)
      throw std::invalid_argument("regularity_probe: trajectory lacks the requested norms");
    const double base = trajectory.rows.front().sobolev_norms[q];
    for (const auto& row : trajectory.rows) ratio[q] = std::max(ratio[q], safe_ratio(row.sobolev_norms[q], base));
  }
  return finish_probe(orders, ratio, bound);
}

}  // namespace sobolev
