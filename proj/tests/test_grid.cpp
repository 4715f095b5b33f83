#include <doctest.h>

#include <cmath>
#include <random>

#include "sobolev/calculus.hpp"
#include "sobolev/grid.hpp"
#include "sobolev/operator.hpp"
#include "support.hpp"

using namespace sobolev;
using sobolev::testing::max_diff;
using sobolev::testing::random_field;
using sobolev::testing::rel_diff;
using sobolev::testing::sample;

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(TorusGrid(0, 16), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(4, 16), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(1, 12), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(1, 16, -1.0), std::invalid_argument);
  const TorusGrid g(2, 16);
  CHECK_THROWS_AS(RealField(g, 1, std::vector<double>(10)), GridMismatch);
  CHECK_THROWS_AS(SpectralField(g, 2, std::vector<Complex>(16)), GridMismatch);
}

TEST_CASE("lattice bookkeeping") {
  const TorusGrid g(3, 8, 2.0);
  CHECK(g.size() == 512);
  CHECK(g.cell_volume() == doctest::Approx(0.015625));
  CHECK(g.volume() == doctest::Approx(8.0));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Wavevector k = g.wavenumber(i);
    for (int a = 0; a < 3; ++a) {
      CHECK(k[a] >= -4);
      CHECK(k[a] < 4);
      CHECK(g.is_nyquist(i, a) == (k[a] == -4));
    }
    CHECK(g.index_of(k) == i);
    const Wavevector mk = g.wavenumber(g.negated(i));
    for (int a = 0; a < 3; ++a) CHECK((mk[a] + k[a]) % 8 == 0);
  }
  const Point x = g.point(g.flat_index({1, 2, 3}));
  CHECK(x[0] == doctest::Approx(0.25));
  CHECK(x[1] == doctest::Approx(0.5));
  CHECK(x[2] == doctest::Approx(0.75));
}

TEST_CASE("constant field has a single coefficient c L^d") {
  const TorusGrid g(2, 16, 3.0);
  const SpectralField u = sample(g, 1, [](int, const Point&) { return 2.5; });
  const std::size_t zero = g.index_of({0, 0, 0});
  CHECK(std::abs(u(0, zero) - Complex(2.5 * 9.0, 0.0)) < 1e-12);
  double rest = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (i != zero) rest = std::max(rest, std::abs(u(0, i)));
  CHECK(rest < 1e-12);
}

TEST_CASE("single harmonic coefficients and the derivative sign") {
  const double L = 1.0;
  const TorusGrid g(1, 16, L);
  const SpectralField u = sample(g, 1, [&](int, const Point& x) { return std::sin(kTwoPi * x[0] / L); });
  const Complex expected = L / Complex(0.0, 2.0);
  CHECK(std::abs(u(0, g.index_of({1, 0, 0})) - expected) < 1e-14);
  CHECK(std::abs(u(0, g.index_of({-1, 0, 0})) + expected) < 1e-14);

  // d/dx sin = (2 pi / L) cos, which fixes the +2 pi i k / L rule.
  const SpectralField du = spectral_gradient(u, 0);
  const SpectralField cosine =
      sample(g, 1, [&](int, const Point& x) { return kTwoPi / L * std::cos(kTwoPi * x[0] / L); });
  CHECK(max_diff(du, cosine) < 1e-13);

  const SpectralField c = sample(g, 1, [](int, const Point&) { return 1.0; });
  CHECK(spectral_gradient(c, 0).max_abs() == 0.0);
}

TEST_CASE("round trip and Parseval in every dimension") {
  for (int d = 1; d <= 3; ++d) {
    const int n = d == 3 ? 16 : 32;
    const TorusGrid g(d, n, 1.7);
    std::mt19937_64 rng(11 + d);
    std::normal_distribution<double> gauss;
    RealField f(g, 2);
    for (double& v : f.values()) v = gauss(rng);
    const SpectralField u = forward_transform(f);
    const RealField back = inverse_transform(u);
    double err = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i) err = std::max(err, std::abs(back.values()[i] - f.values()[i]));
    CHECK(err < 1e-12 * f.max_abs());

    double physical = 0.0;
    for (double v : f.values()) physical += v * v;
    physical *= g.cell_volume();
    double spectral = 0.0;
    for (const Complex& c : u.coeffs()) spectral += std::norm(c);
    spectral /= g.volume();
    CHECK(std::abs(physical - spectral) < 1e-12 * physical);
    CHECK(u.conjugate_symmetry_defect() < 1e-12 * u.max_abs());
  }
}

TEST_CASE("mixed partial derivatives commute") {
  const TorusGrid g(2, 32);
  const SpectralField u = random_field(g, 2, 15, 5);
  const SpectralField xy = spectral_gradient(spectral_gradient(u, 0), 1);
  const SpectralField yx = spectral_gradient(spectral_gradient(u, 1), 0);
  CHECK(max_diff(xy, yx) <= 1e-13 * xy.max_abs());
}

TEST_CASE("derivatives drop the Nyquist mode") {
  const TorusGrid g(1, 16);
  const SpectralField u = sample(g, 1, [](int, const Point& x) { return std::cos(kTwoPi * 8.0 * x[0]); });
  CHECK(u.has_nyquist_content());
  const SpectralField du = spectral_gradient(u, 0);
  CHECK(du.max_abs() == 0.0);
  CHECK(!drop_nyquist(u).has_nyquist_content());
}

TEST_CASE("dealiased product: identity element and double angle") {
  const TorusGrid g(1, 32);
  const SpectralField f = random_field(g, 1, 15, 3);
  const SpectralField one = sample(g, 1, [](int, const Point&) { return 1.0; });
  CHECK(max_diff(dealiased_product(f, one), f) < 1e-13);

  const int k = 7;
  const SpectralField s = sample(g, 1, [&](int, const Point& x) { return std::sin(kTwoPi * k * x[0]); });
  const SpectralField expected =
      sample(g, 1, [&](int, const Point& x) { return 0.5 - 0.5 * std::cos(kTwoPi * 2 * k * x[0]); });
  CHECK(max_diff(dealiased_product(s, s), expected) < 1e-13);

  // 2k beyond the lattice: the product keeps only the mean.
  const int k2 = 9;
  const SpectralField s2 = sample(g, 1, [&](int, const Point& x) { return std::sin(kTwoPi * k2 * x[0]); });
  const SpectralField half = sample(g, 1, [](int, const Point&) { return 0.5; });
  CHECK(max_diff(dealiased_product(s2, s2), half) < 1e-13);
}

TEST_CASE("dealiased product matches an oversampled product") {
  for (int d = 1; d <= 2; ++d) {
    const TorusGrid g(d, 32, 1.3);
    const TorusGrid fine(d, 128, 1.3);
    const SpectralField f = random_field(g, 1, 15, 21 + d);
    const SpectralField h = random_field(g, d, 15, 31 + d);
    const RealField ff = inverse_transform(resample(f, fine));
    RealField hh = inverse_transform(resample(h, fine));
    for (int c = 0; c < d; ++c)
      for (std::size_t j = 0; j < fine.size(); ++j) hh(c, j) *= ff(0, j);
    const SpectralField oracle = resample(forward_transform(hh), g);
    CHECK(rel_diff(dealiased_product(f, h), oracle) < 1e-12);
  }
}

TEST_CASE("dealiased product rejects mismatched grids") {
  const SpectralField a = SpectralField::scalar(TorusGrid(1, 16));
  const SpectralField b = SpectralField::scalar(TorusGrid(1, 32));
  CHECK_THROWS_AS(dealiased_product(a, b), GridMismatch);
}

TEST_CASE("translation is a phase and commutes with multipliers") {
  const TorusGrid g(2, 32, 2.0);
  const SpectralField u = random_field(g, 2, 12, 8);
  const Point h{3 * g.spacing(), 5 * g.spacing(), 0.0};
  const SpectralField tu = translate(u, h);
  // A lattice shift just permutes samples.
  const RealField ru = inverse_transform(u);
  const RealField rt = inverse_transform(tu);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    auto m = g.multi_index(j);
    const std::size_t src = g.flat_index({(m[0] + 32 - 3) % 32, (m[1] + 32 - 5) % 32, 0});
    for (int c = 0; c < 2; ++c) err = std::max(err, std::abs(rt(c, j) - ru(c, src)));
  }
  CHECK(err < 1e-13);

  const auto a = sobolev_multiplier(g, 1.5);
  CHECK(rel_diff(a->apply(tu), translate(a->apply(u), h)) < 1e-13);
}

TEST_CASE("gradient commutes with multipliers") {
  const TorusGrid g(2, 32);
  const SpectralField u = random_field(g, 2, 12, 9);
  const auto a = sobolev_multiplier(g, 0.75);
  for (int axis = 0; axis < 2; ++axis)
    CHECK(rel_diff(a->apply(spectral_gradient(u, axis)), spectral_gradient(a->apply(u), axis)) < 1e-13);
}

TEST_CASE("resample keeps interior modes") {
  const TorusGrid g(1, 16);
  const TorusGrid fine(1, 64);
  const SpectralField u = random_field(g, 1, 7, 4);
  CHECK(max_diff(resample(resample(u, fine), g), u) == 0.0);
  CHECK(resample(u, fine).band_limit() == 7);
}

TEST_CASE("calculus identities") {
  const TorusGrid g(2, 32);
  const SpectralField v = random_field(g, 2, 7, 1);
  const SpectralField w = random_field(g, 2, 7, 2);
  const SpectralField f = random_field(g, 1, 7, 3);
  // [v, w] = -[w, v]
  CHECK(max_diff(lie_bracket(v, w), -1.0 * lie_bracket(w, v)) < 1e-13);
  // div(f v) = grad_v f + f div v
  const SpectralField lhs = divergence(dealiased_product(f, v));
  const SpectralField rhs = covariant_derivative(v, f) + dealiased_product(f, divergence(v));
  CHECK(rel_diff(lhs, rhs) < 1e-12);
  // sup norms of a single mode
  const SpectralField wave = sample(g, 2, [](int c, const Point& x) {
    return c == 0 ? std::sin(kTwoPi * x[1]) : 0.0;
  });
  CHECK(sup_norm(wave) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(sup_gradient_norm(wave) == doctest::Approx(kTwoPi).epsilon(1e-3));
}
