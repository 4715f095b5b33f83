#include <doctest.h>

#include <cmath>

#include "sobolev/calculus.hpp"
#include "sobolev/conjugation.hpp"
#include "sobolev/initial_data.hpp"
#include "sobolev/lagrangian.hpp"
#include "support.hpp"

using namespace sobolev;
using sobolev::testing::max_diff;
using sobolev::testing::random_field;
using sobolev::testing::rel_diff;
using sobolev::testing::sample;

namespace {

SpectralField constant(const TorusGrid& g, const Point& h) {
  return sample(g, g.dim(), [&](int c, const Point&) { return h[c]; });
}

// Small smooth displacement, well inside the chart domain.
DiffeoChart small_chart(const TorusGrid& g, double size, std::uint64_t seed) {
  SpectralField f = random_field(g, g.dim(), 3, seed);
  f *= size / sup_gradient_norm(f);
  return DiffeoChart(f);
}

}  // namespace

TEST_CASE("identity chart") {
  const TorusGrid g(2, 32);
  const DiffeoChart id = DiffeoChart::identity(g);
  CHECK(id.min_det() == 1.0);
  const SpectralField u = random_field(g, 2, 8, 1);
  CHECK(max_diff(compose(u, id), u) < 1e-13);
  CHECK(invert(id).displacement().max_abs() == 0.0);
  const RealField det = jacobian_det(id);
  for (double v : det.values()) CHECK(v == 1.0);
}

TEST_CASE("composition with a constant shift is a phase") {
  const TorusGrid g(1, 128);
  const SpectralField u = random_field(g, 1, 4, 2);
  const Point h{0.0123, 0, 0};
  const DiffeoChart phi(constant(g, h));
  // u(x + h) = (tau_{-h} u)(x)
  CHECK(sup_norm(compose(u, phi) - translate(u, {-h[0], 0, 0})) < 1e-8 * sup_norm(u));

  const DiffeoChart inv = invert(phi);
  CHECK(max_diff(inv.displacement(), constant(g, {-h[0], 0, 0})) < 1e-12);
}

TEST_CASE("composition is associative to interpolation accuracy") {
  const TorusGrid g(2, 128);
  const SpectralField u = random_field(g, 2, 4, 3);
  const DiffeoChart phi = small_chart(g, 0.3, 4);
  const DiffeoChart psi = small_chart(g, 0.3, 5);
  const SpectralField lhs = compose(compose(u, phi), psi);
  const SpectralField rhs = compose(u, compose_diffeo(phi, psi));
  CHECK(sup_norm(lhs - rhs) < 2e-8 * sup_norm(u));
}

TEST_CASE("inversion residual") {
  for (int d = 1; d <= 2; ++d) {
    const TorusGrid g(d, 64, 2.0);
    const DiffeoChart phi = small_chart(g, 0.5, 6 + d);
    const DiffeoChart inv = invert(phi);
    CHECK(inversion_residual(phi, inv) <= 1e-10 * g.length());
  }
}

TEST_CASE("Jacobian determinant") {
  const TorusGrid g(1, 64);
  const double eps = 0.1;
  const DiffeoChart phi(sample(g, 1, [&](int, const Point& x) { return eps * std::sin(kTwoPi * x[0]); }));
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    err = std::max(err, std::abs(phi.jacobian_det()(0, j) - (1.0 + kTwoPi * eps * std::cos(kTwoPi * g.point(j)[0]))));
  CHECK(err < 1e-13);
  CHECK(phi.min_det() == doctest::Approx(1.0 - kTwoPi * eps));

  // volume is preserved by any valid chart
  for (int d = 1; d <= 3; ++d) {
    const TorusGrid gd(d, d == 3 ? 16 : 32, 1.5);
    const DiffeoChart c = small_chart(gd, 0.6, 20 + d);
    double vol = 0.0;
    for (double v : c.jacobian_det().values()) vol += v;
    vol *= gd.cell_volume();
    CHECK(std::abs(vol - gd.volume()) <= 1e-10 * gd.volume());
  }
}

TEST_CASE("folded maps are rejected") {
  const TorusGrid g(1, 64);
  const SpectralField f = sample(g, 1, [](int, const Point& x) { return 0.5 * std::sin(kTwoPi * x[0]); });
  CHECK_THROWS_AS(DiffeoChart{f}, InvalidChart);
  CHECK_THROWS_AS(DiffeoChart{SpectralField::scalar(TorusGrid(2, 16))}, InvalidChart);
}

TEST_CASE("distance d_q") {
  const TorusGrid g(2, 32);
  const DiffeoChart a = small_chart(g, 0.4, 30);
  const DiffeoChart b = small_chart(g, 0.4, 31);
  CHECK(distance_dq(a, a, 2.0) == 0.0);
  CHECK(distance_dq(a, b, 2.0) == distance_dq(b, a, 2.0));

  // constant shifts: only the H^q term of the constant difference survives
  const DiffeoChart s1(constant(g, {0.1, 0.2, 0}));
  const DiffeoChart s2(constant(g, {0.0, -0.1, 0}));
  CHECK(distance_dq(s1, s2, 3.0) == doctest::Approx(std::sqrt(0.01 + 0.09) * std::sqrt(g.volume())));

  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const TorusGrid g1(1, 16);
    const DiffeoChart x = small_chart(g1, 0.5, 3 * t + 100);
    const DiffeoChart y = small_chart(g1, 0.5, 3 * t + 101);
    const DiffeoChart z = small_chart(g1, 0.5, 3 * t + 102);
    const double q = 0.5 * (t % 5);
    if (distance_dq(x, z, q) > distance_dq(x, y, q) + distance_dq(y, z, q) + 1e-12) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("spray at the identity") {
  const TorusGrid g(2, 32);
  const auto a = sobolev_multiplier(g, 1.5);
  const SpectralField u = random_field(g, 2, 5, 40);
  // [A, grad_u] u = -A_1(u, u)
  const std::vector<SpectralField> args{u, u};
  CHECK(rel_diff(commutator_term(*a, u), -1.0 * apply_An_recursive(*a, 1, args)) < 1e-10);
  // S(u) = grad_u u - B(u, u)
  CHECK(rel_diff(spray_at_identity(*a, u), covariant_derivative(u, u) - arnold_B(*a, u, u)) < 1e-11);

  const GeodesicState at_id{0.0, DiffeoChart::identity(g), u};
  const SprayValue sv = spray_rhs(*a, at_id);
  CHECK(max_diff(sv.dphi, u) == 0.0);
  CHECK(rel_diff(sv.dv, spray_at_identity(*a, u)) < 1e-10);

  const GeodesicState rest{0.0, small_chart(g, 0.3, 41), SpectralField::vector(g)};
  const SprayValue zero = spray_rhs(*a, rest);
  CHECK(zero.dphi.max_abs() == 0.0);
  CHECK(zero.dv.max_abs() == 0.0);
}

TEST_CASE("Lagrangian and Eulerian solvers agree") {
  const TorusGrid g(1, 128);
  const auto a = sobolev_multiplier(g, 1.5);
  const SpectralField u0 = gaussian_blob(g, 0.3, 0.1, {0.5, 0, 0});
  const double dt = 1e-3;
  const LagrangianRun lag = integrate_lagrangian(*a, u0, dt, 0.05);
  IntegratorOptions opt;
  opt.dt = dt;
  opt.t_end = 0.05;
  opt.cadence = 1000;
  const Trajectory eul = integrate(*a, state_from_velocity(*a, u0), opt);
  CHECK(lag.min_det_seen > 0.0);
  CHECK(sup_norm(eulerian_velocity(lag.final_state) - eul.last_good.u) <= 1e-6);
  CHECK(lagrangian_energy(*a, lag.final_state) == doctest::Approx(energy(eul.last_good)).epsilon(1e-8));
}

TEST_CASE("regularity probe") {
  const TorusGrid g(1, 64);
  const std::vector<SpectralField> zero{SpectralField::vector(g), SpectralField::vector(g)};
  const RegularityProbe z = regularity_probe(zero, {1.0, 2.0});
  CHECK(z.pass);
  CHECK(z.max_ratio[0] == 1.0);

  const auto a = sobolev_multiplier(g, 2.0);
  IntegratorOptions opt;
  opt.dt = 1e-2;
  opt.t_end = 1.0;
  opt.cadence = 10;
  opt.norm_orders = {2.0, 3.0, 4.0};
  const Trajectory tr = integrate(*a, state_from_velocity(*a, gaussian_blob(g, 0.3, 0.1, {0.5, 0, 0})), opt);
  const RegularityProbe p = regularity_probe(tr, {2.0, 3.0, 4.0});
  CHECK(p.pass);
  for (double r : p.max_ratio) CHECK(std::isfinite(r));
  CHECK_THROWS(regularity_probe(tr, {2.0, 3.0, 4.0, 5.0}));
}

TEST_CASE("rough data: the norm above its regularity grows with resolution") {
  const double q = 1.0;
  double prev_low = 0.0, prev_high = 0.0;
  for (int n : {64, 256, 1024}) {
    const SpectralField u = rough_field(TorusGrid(1, n), 1, q, 3);
    const double low = sobolev_norm(u, q - 0.5);
    const double high = sobolev_norm(u, q + 1.0);
    if (prev_low > 0.0) {
      CHECK(low < 1.5 * prev_low);
      CHECK(high > 3.0 * prev_high);
    }
    prev_low = low;
    prev_high = high;
  }
}
