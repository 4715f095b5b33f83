#include <doctest.h>

#include <cmath>

#include "sobolev/grid.hpp"
#include "sobolev/operator.hpp"
#include "support.hpp"

using namespace sobolev;
using sobolev::testing::max_diff;
using sobolev::testing::random_field;
using sobolev::testing::rel_diff;
using sobolev::testing::sample;

namespace {

const double kFourPiSq = 4.0 * kPi * kPi;

// lambda_r(xi) P + 4 pi^2 lambda_{r-2}(xi) xi xi^t with a fixed real SPD P, so
// a(-xi) = conj(a(xi)) and real fields stay real.
MatrixSymbol real_spd_symbol(double r) {
  auto eval = [r](const Frequency& xi) -> Matrix {
    Matrix p(2, 2);
    p << 2.0, 0.5, 0.5, 1.0;
    Matrix m = sobolev_weight(r, xi) * p;
    const double w = kFourPiSq * sobolev_weight(r - 2.0, xi);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) += w * xi(i) * xi(j);
    return m;
  };
  return MatrixSymbol(2, r, eval, {true, true, false}, std::nullopt, "real_spd");
}

SpectralField sine(const TorusGrid& g) {
  return sample(g, 1, [](int, const Point& x) { return std::sin(kTwoPi * x[0]); });
}

}  // namespace

TEST_CASE("identity multiplier leaves fields unchanged") {
  const TorusGrid g(2, 16);
  const FourierMultiplier id(g, sobolev_symbol(0.0, 2));
  const SpectralField u = random_field(g, 2, 7, 1);
  CHECK(max_diff(id.apply(u), u) == 0.0);
  CHECK(max_diff(id.apply_inverse(u), u) < 1e-15);
  CHECK(id.is_scalar());
}

TEST_CASE("1 - Laplacian on a single harmonic") {
  const TorusGrid g(1, 32);
  const auto a = sobolev_multiplier(g, 1.0);
  const SpectralField u = sine(g);
  CHECK(max_diff(a->apply(u), (1.0 + kFourPiSq) * u) < 1e-12);
  CHECK(max_diff(a->apply_inverse((1.0 + kFourPiSq) * u), u) < 1e-14);
}

TEST_CASE("table and inverse table") {
  const TorusGrid g(2, 16, 2.0);
  const FourierMultiplier a(g, random_hpd_symbol(2, 2.0, 3));
  CHECK(a.invertible());
  CHECK(!a.is_scalar());
  for (std::size_t i = 0; i < g.size(); i += 7) {
    CHECK((a.table(i) - a.symbol()(g.frequency(i))).norm() == 0.0);
    CHECK((a.table(i) * a.inverse_table(i) - Matrix::Identity(2, 2)).norm() < 1e-13);
  }
  const SpectralField u = random_field(g, 2, 7, 4);
  CHECK(rel_diff(a.apply_inverse(a.apply(u)), u) < 1e-12);
  CHECK(rel_diff(a.apply(a.apply_inverse(u)), u) < 1e-12);
}

TEST_CASE("non-elliptic multipliers have no inverse") {
  const TorusGrid g(1, 16);
  const FourierMultiplier a(g, logistic_weighted_symbol(2.0));
  CHECK(!a.invertible());
  CHECK_THROWS_AS(a.apply_inverse(SpectralField::vector(g)), NotElliptic);
  CHECK_THROWS_AS(FourierMultiplier(g, sobolev_symbol(1.0, 2)), GridMismatch);
}

TEST_CASE("multipliers commute and are L2-symmetric") {
  const TorusGrid g(2, 32);
  const auto a = sobolev_multiplier(g, 1.5);
  const FourierMultiplier b(g, real_spd_symbol(1.0));
  const SpectralField u = random_field(g, 2, 12, 5);
  const SpectralField v = random_field(g, 2, 12, 6);
  CHECK(rel_diff(a->apply(b.apply(u)), b.apply(a->apply(u))) < 1e-13);
  const double auv = l2_pairing_physical(b.apply(u), v);
  const double uav = l2_pairing_physical(u, b.apply(v));
  CHECK(std::abs(auv - uav) <= 1e-12 * std::abs(auv));
  CHECK(b.apply(u).conjugate_symmetry_defect() < 1e-12 * b.apply(u).max_abs());
}

TEST_CASE("Sobolev norms of a unit harmonic") {
  const TorusGrid g(1, 32);
  const SpectralField u = sine(g);
  CHECK(sobolev_norm(SpectralField::scalar(g), 2.0) == 0.0);
  CHECK(sobolev_norm(u, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sobolev_norm(u, 1.0) == doctest::Approx(std::sqrt(1.0 + kFourPiSq) / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("Sobolev norm is monotone in q and L2 at q = 0") {
  const TorusGrid g(2, 32, 1.5);
  const SpectralField u = random_field(g, 2, 10, 2);
  double prev = 0.0;
  for (double q = 0.0; q <= 4.0; q += 0.25) {
    const double nq = sobolev_norm(u, q);
    CHECK(nq >= prev);
    prev = nq;
  }
  CHECK(sobolev_norm(u, 0.0) == doctest::Approx(std::sqrt(l2_pairing_physical(u, u))).epsilon(1e-13));
}

TEST_CASE("inner product") {
  const TorusGrid g(2, 32);
  const auto a = sobolev_multiplier(g, 1.25);
  const SpectralField u = random_field(g, 2, 10, 3);
  const SpectralField v = random_field(g, 2, 10, 4);
  CHECK(inner_product(*a, u, u) > 0.0);
  CHECK(inner_product(*a, u, v) == doctest::Approx(inner_product(*a, v, u)).epsilon(1e-13));
  CHECK(inner_product(*a, u, u) == doctest::Approx(std::pow(sobolev_norm(u, 1.25), 2)).epsilon(1e-13));
  const FourierMultiplier id(g, sobolev_symbol(0.0, 2));
  CHECK(inner_product(id, u, v) == doctest::Approx(l2_pairing_physical(u, v)).epsilon(1e-12));
  // frequency sum against physical quadrature
  CHECK(inner_product(*a, u, v) == doctest::Approx(l2_pairing_physical(a->apply(u), v)).epsilon(1e-12));
  // bilinearity
  const SpectralField w = u + 2.0 * v;
  CHECK(inner_product(*a, w, u) == doctest::Approx(inner_product(*a, u, u) + 2.0 * inner_product(*a, v, u)).epsilon(1e-12));

  const FourierMultiplier shear(g, shear_laplacian_symbol(1.0));
  CHECK_THROWS(inner_product(shear, u, v));
}

TEST_CASE("isomorphism constants are finite") {
  // ||A u||_{H^{q-r}} / ||u||_{H^q} = 1 exactly for the scalar Sobolev operator
  // and stays within the eigenvalue range of P for the random matrix symbol.
  const TorusGrid g(2, 32);
  const auto a = sobolev_multiplier(g, 1.0);
  const FourierMultiplier b(g, real_spd_symbol(2.0));
  double lo = 1e300, hi = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const SpectralField u = random_field(g, 2, 1 + trial % 15, 100 + trial);
    CHECK(sobolev_norm(a->apply(u), -0.5) == doctest::Approx(sobolev_norm(u, 1.5)).epsilon(1e-12));
    const double ratio = sobolev_norm(b.apply(u), 0.5) / sobolev_norm(u, 2.5);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo > 0.0);
  CHECK(std::isfinite(hi));
  CHECK(hi / lo < 100.0);
}
