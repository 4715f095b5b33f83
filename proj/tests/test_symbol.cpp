#include <doctest.h>

#include <cmath>
#include <random>

#include "sobolev/symbol.hpp"

using namespace sobolev;

namespace {

const double kFourPiSq = 4.0 * kPi * kPi;

Frequency freq(std::initializer_list<double> v) {
  Frequency f(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) f(i++) = x;
  return f;
}

Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Brute-force minimum of Re(a eta . conj(eta)) over random unit eta in C^2.
double sampled_form_minimum(const Matrix& a, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double lo = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Eigen::Vector2cd eta(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
    eta.normalize();
    lo = std::min(lo, (eta.adjoint() * a * eta)(0).real());
  }
  return lo;
}

}  // namespace

TEST_CASE("Sobolev symbol values and flags") {
  const MatrixSymbol id = sobolev_symbol(0.0, 2);
  CHECK((id(freq({3.0, -7.0})) - Matrix::Identity(2, 2)).norm() == 0.0);

  const MatrixSymbol ch = sobolev_symbol(1.0, 1);
  CHECK(ch(freq({0.0}))(0, 0).real() == 1.0);
  CHECK(ch(freq({1.0}))(0, 0).real() == doctest::Approx(1.0 + kFourPiSq));
  CHECK(ch.order() == 2.0);
  CHECK(ch.flags().hermitian);
  CHECK(ch.flags().positive_definite);
  CHECK(ch.principal()(freq({1.0}))(0, 0).real() == doctest::Approx(kFourPiSq));
  CHECK_THROWS_AS(sobolev_symbol(-1.0, 1), std::invalid_argument);
}

TEST_CASE("order estimate: Sobolev passes with unit ratio at alpha = 0") {
  for (double s : {0.5, 1.0, 1.5, 2.0}) {
    const ClassCertificate c = check_order_estimate(sobolev_symbol(s, 1), 3, 1e3);
    CHECK(c.pass);
    CHECK(std::stod(c.details.get("alpha_0.sup")) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(c.measured_constant));
  }
  const ClassCertificate c2 = check_order_estimate(sobolev_symbol(1.5, 2), 2, 1e3);
  CHECK(c2.pass);
  CHECK(std::stod(c2.details.get("alpha_00.sup")) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("order estimate fails for super-polynomial growth") {
  auto grow = [](const Frequency& xi) { return std::exp(kFourPiSq * xi.squaredNorm()); };
  const MatrixSymbol a = scalar_symbol(1, 2.0, grow, {}, "exp");
  // within the finite range the ratio runs away between the radial halves
  const ClassCertificate c = check_order_estimate(a, 1, 3.0);
  CHECK(!c.pass);
  CHECK(c.diagnostic.find("keeps growing") != std::string::npos);
  // further out the values overflow
  const ClassCertificate far = check_order_estimate(a, 1, 1e3);
  CHECK(!far.pass);
  CHECK(far.diagnostic.find("non-finite") != std::string::npos);
}

TEST_CASE("bounded weight with vanishing liminf: order ok, not elliptic") {
  const MatrixSymbol a = logistic_weighted_symbol(2.0);
  CHECK(check_order_estimate(a, 2, 1e3).pass);
  const ClassCertificate e = check_ellipticity(a, 1e3);
  CHECK(!e.pass);
  CHECK(check_ellipticity(sobolev_symbol(1.0, 1), 1e3).pass);
  // No constant shift repairs it: the weight decays against a growing lambda_r.
  CHECK_THROWS_AS(measure_ellipticity_shift(a, 1e3), SymbolDomainError);
  CHECK(measure_ellipticity_shift(sobolev_symbol(1.0, 1), 1e3).shift == 0.0);
}

TEST_CASE("mixed orders are not elliptic of the leading order") {
  CHECK(!check_ellipticity(mixed_order_symbol(2.0, 1.0), 1e3).pass);
  CHECK(check_ellipticity(mixed_order_symbol(2.0, 2.0), 1e3).pass);
}

TEST_CASE("normal ellipticity") {
  const ClassCertificate c = check_normal_ellipticity(sobolev_symbol(1.5, 2).principal(), 1000);
  CHECK(c.pass);
  CHECK(c.measured_constant == doctest::Approx(std::pow(kFourPiSq, 1.5)).epsilon(1e-12));
  for (double t : {0.0, 1.0, 5.0, 100.0}) {
    const ClassCertificate n = check_normal_ellipticity(shear_laplacian_symbol(t), 1000);
    CHECK(n.pass);
    CHECK(n.measured_constant == doctest::Approx(kFourPiSq).epsilon(1e-12));
  }
  auto neg = [](const Frequency& xi) { return -kFourPiSq * xi.squaredNorm(); };
  const MatrixSymbol minus = scalar_symbol(2, 2.0, neg, {}, "-laplacian");
  CHECK(!check_normal_ellipticity(minus, 1000).pass);
}

TEST_CASE("normal ellipticity needs a homogeneous principal part") {
  const MatrixSymbol full = sobolev_symbol(1.0, 2);
  const ClassCertificate c = check_normal_ellipticity(full, 100);  // 1 + 4 pi^2 |xi|^2 is not homogeneous
  CHECK(!c.pass);
  CHECK(c.diagnostic.find("homogene") != std::string::npos);
}

TEST_CASE("strong ellipticity of the shear family") {
  // Oracle: random unit eta, independent of the eigenvalue route.
  for (double t : {1.9, 2.1}) {
    const ClassCertificate c = check_strong_ellipticity(shear_laplacian_symbol(t), 10000);
    const double sampled = sampled_form_minimum(shear_laplacian_symbol(t)(freq({1.0, 0.0})), 200000, 3);
    CHECK(c.measured_constant / kFourPiSq == doctest::Approx(1.0 - t / 2.0).epsilon(1e-9));
    CHECK(sampled / kFourPiSq == doctest::Approx(1.0 - t / 2.0).epsilon(2e-3));
    CHECK(c.pass == (t < 2.0));
    // normal ellipticity survives either way
    CHECK(check_normal_ellipticity(shear_laplacian_symbol(t), 10000).pass);
  }
  const ClassCertificate lap = check_strong_ellipticity(sobolev_symbol(1.0, 2).principal(), 1000);
  CHECK(lap.pass);
  CHECK(lap.measured_constant == doctest::Approx(kFourPiSq).epsilon(1e-12));
}

TEST_CASE("strong ellipticity flips between 1.99 and 2.01") {
  CHECK(check_strong_ellipticity(shear_laplacian_symbol(1.99), 10000).pass);
  CHECK(!check_strong_ellipticity(shear_laplacian_symbol(2.01), 10000).pass);
  CHECK(check_strong_ellipticity(shear_laplacian_symbol(-1.99), 10000).pass);
  CHECK(!check_strong_ellipticity(shear_laplacian_symbol(-2.01), 10000).pass);
}

TEST_CASE("strong implies normal on random principal symbols") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix base = random_matrix(2, rng) + 1.5 * Matrix::Identity(2, 2);
    auto eval = [base](const Frequency& xi) -> Matrix { return kFourPiSq * xi.squaredNorm() * base; };
    const MatrixSymbol p(2, 2.0, eval, {}, MatrixSymbol::Evaluator(eval), "random");
    if (check_strong_ellipticity(p, 200).pass) CHECK(check_normal_ellipticity(p, 200).pass);
  }
}

TEST_CASE("Sylvester: identity and diagonal examples") {
  std::mt19937_64 rng(1);
  const Matrix a = random_matrix(3, rng);
  const Matrix x = sylvester_solve(Matrix::Identity(3, 3), a);
  CHECK((x - 0.5 * a).norm() < 1e-14);
  CHECK(frobenius_norm(x) <= sylvester_bound(Matrix::Identity(3, 3), a));

  Matrix b = Matrix::Zero(2, 2);
  b(0, 0) = 1.0;
  b(1, 1) = 2.0;
  Matrix rhs = Matrix::Zero(2, 2);
  rhs(0, 1) = 3.0;
  rhs(1, 0) = 3.0;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 1) = 1.0;
  expected(1, 0) = 1.0;
  CHECK((sylvester_solve(b, rhs) - expected).norm() < 1e-14);
}

TEST_CASE("Sylvester: substitution oracle and bound") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 4;
    const Matrix g = random_matrix(d, rng);
    const Matrix b = g * g.adjoint() + 1e-2 * Matrix::Identity(d, d);
    const Matrix a = random_matrix(d, rng);
    const Matrix x = sylvester_solve(b, a);
    CHECK(frobenius_norm(b * x + x * b - a) <= 1e-12 * frobenius_norm(a));
    CHECK(frobenius_norm(x) <= sylvester_bound(b, a));
  }
  const SylvesterTrials t = sylvester_trials(1000, 5);
  CHECK(t.instances == 1000);
  CHECK(t.violations == 0);
  CHECK(t.max_bound_ratio <= 1.0);
}

TEST_CASE("Sylvester rejects indefinite or non-Hermitian b") {
  Matrix b = Matrix::Identity(2, 2);
  b(1, 1) = -1.0;
  CHECK_THROWS_AS(sylvester_solve(b, Matrix::Identity(2, 2)), SymbolDomainError);
  Matrix c = Matrix::Identity(2, 2);
  c(0, 1) = 1.0;
  CHECK_THROWS_AS(sylvester_solve(c, Matrix::Identity(2, 2)), SymbolDomainError);
}

TEST_CASE("square root of scalar and diagonal symbols") {
  const auto samples = random_frequencies(2, 500, 1e-2, 1e3, 4);
  for (double s : {0.5, 1.0, 1.5}) {
    const MatrixSymbol b = sqrt_symbol(sobolev_symbol(2.0 * s, 2));
    const MatrixSymbol expected = sobolev_symbol(s, 2);
    CHECK(b.order() == 2.0 * s);
    for (const auto& xi : samples) CHECK((b(xi) - expected(xi)).norm() <= 1e-12 * expected(xi).norm());
  }
  auto diag = [](const Frequency& xi) -> Matrix {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 4.0 * sobolev_weight(2.0, xi);
    m(1, 1) = 9.0 * sobolev_weight(2.0, xi);
    return m;
  };
  const MatrixSymbol a(2, 2.0, diag, {true, true, false});
  const MatrixSymbol b = sqrt_symbol(a);
  for (const auto& xi : samples) {
    Matrix e = Matrix::Zero(2, 2);
    e(0, 0) = 2.0 * sobolev_weight(1.0, xi);
    e(1, 1) = 3.0 * sobolev_weight(1.0, xi);
    CHECK((b(xi) - e).norm() <= 1e-12 * e.norm());
  }
}

TEST_CASE("square root of a random order-3 matrix symbol") {
  const MatrixSymbol a = random_hpd_symbol(2, 3.0, 99);
  const MatrixSymbol b = sqrt_symbol(a);
  CHECK(b.order() == doctest::Approx(1.5));
  CHECK(square_defect(b, a, random_frequencies(2, 10000, 1e-2, 1e3, 6)) <= 1e-12);
  CHECK(check_order_estimate(b, 2, 1e3).pass);
  CHECK(check_ellipticity(b, 1e3).pass);
  CHECK(check_ellipticity(a, 1e3).pass);
}

TEST_CASE("square root rejects indefinite symbols") {
  auto eval = [](const Frequency& xi) -> Matrix {
    Matrix m = sobolev_weight(2.0, xi) * Matrix::Identity(2, 2);
    m(1, 1) = -1.0;
    return m;
  };
  CHECK_THROWS_AS(sqrt_symbol(MatrixSymbol(2, 2.0, eval, {true, true, false})), SymbolDomainError);
  CHECK_THROWS_AS(sqrt_symbol(shear_laplacian_symbol(1.0)), SymbolDomainError);
}

TEST_CASE("sampling sets") {
  CHECK(sphere_samples(1, 10).size() == 2);
  const auto s2 = sphere_samples(2, 64);
  CHECK(s2.size() == 64);
  for (const auto& w : sphere_samples(3, 500)) CHECK(w.norm() == doctest::Approx(1.0));
  for (const auto& w : s2) CHECK(w.norm() == doctest::Approx(1.0));
  const auto r = random_frequencies(3, 100, 0.1, 10.0, 1);
  for (const auto& xi : r) {
    CHECK(xi.norm() >= 0.1 * (1 - 1e-12));
    CHECK(xi.norm() <= 10.0 * (1 + 1e-12));
  }
  CHECK(radial_samples(1, {}).front().norm() == 0.0);
}
