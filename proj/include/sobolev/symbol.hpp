#pragma once

// Matrix-valued Fourier symbols a(xi), numerical certificates for the symbol
// classes (order estimate, ellipticity, normal and strong ellipticity), the
// Hermitian square root, and the Sylvester solver used to bound its
// derivatives.
//
// Frequencies follow the grid convention: the symbol of 1 - Laplacian is
// 1 + 4 pi^2 |xi|^2, and lambda_rho(xi) = (1 + 4 pi^2 |xi|^2)^(rho/2).

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sobolev/grid.hpp"
#include "sobolev/report.hpp"

namespace sobolev {

/// Small complex matrix (at most 4x4, no heap allocation).
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
/// Frequency vector xi in R^d (at most 4 entries).
using Frequency = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

/// Raised when a symbol violates the preconditions of an operation
/// (non-Hermitian, indefinite, singular) at some sampled frequency.
class SymbolDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// lambda_rho(xi) = (1 + 4 pi^2 |xi|^2)^(rho/2)
double sobolev_weight(double rho, const Frequency& xi);
double sobolev_weight(double rho, const Point& xi, int dim);

Frequency to_frequency(const Point& xi, int dim);
std::string describe(const Frequency& xi);

struct SymbolFlags {
  bool hermitian = false;
  bool positive_definite = false;
  bool classical = false;
};

/// xi -> d x d complex matrix with a declared order and optional
/// homogeneous principal part.
class MatrixSymbol {
 public:
  using Evaluator = std::function<Matrix(const Frequency&)>;

  MatrixSymbol(int dim, double order, Evaluator eval, SymbolFlags flags = {},
               std::optional<Evaluator> principal = std::nullopt, std::string name = "custom");

  int dim() const noexcept { return dim_; }
  double order() const noexcept { return order_; }
  const SymbolFlags& flags() const noexcept { return flags_; }
  const std::string& name() const noexcept { return name_; }

  Matrix operator()(const Frequency& xi) const;
  Matrix operator()(const Point& xi) const { return (*this)(to_frequency(xi, dim_)); }

  bool has_principal() const noexcept { return principal_.has_value(); }
  /// The principal part as a symbol of the same order (throws if absent).
  MatrixSymbol principal() const;

 private:
  int dim_;
  double order_;
  Evaluator eval_;
  SymbolFlags flags_;
  std::optional<Evaluator> principal_;
  std::string name_;
};

/// (1 + 4 pi^2 |xi|^2)^s I_d: the inertia symbol of the H^s metric.
MatrixSymbol sobolev_symbol(double s, int dim);

/// profile(xi) * I.
MatrixSymbol scalar_symbol(int dim, double order, std::function<double(const Frequency&)> profile,
                           SymbolFlags flags, std::string name);

/// shift * I + a(xi).
MatrixSymbol shifted(const MatrixSymbol& a, double shift);

/// a_t(xi) = 4 pi^2 |xi|^2 [[1, t], [0, 1]] on R^2: normally elliptic for all
/// t, strongly elliptic only for |t| < 2.
MatrixSymbol shear_laplacian_symbol(double t);

/// f(xi) lambda_r(xi) on R with the logistic f(xi) = 1 / (1 + exp(-xi)):
/// bounded smooth weight with liminf f = 0 as xi -> -infinity.
MatrixSymbol logistic_weighted_symbol(double r);

/// diag(lambda_r, lambda_r2) on R^2, declared order r.
MatrixSymbol mixed_order_symbol(double r, double r2);

/// lambda_r(xi) P + 4 pi^2 lambda_{r-2}(xi) xi xi^t with P a random Hermitian
/// positive definite matrix drawn from `seed` (eigenvalues in [0.5, 2]).
MatrixSymbol random_hpd_symbol(int dim, double r, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Sampling

/// Radial sample set: xi = 0 plus log-spaced radii in [xi_min, xi_max] times a
/// fixed direction set (+-1 in 1-d, equally spaced angles in 2-d, axes and
/// cube diagonals in 3-d).
struct RadialSampling {
  double xi_min = 1e-2;
  double xi_max = 1e3;
  int per_decade = 25;
};

std::vector<Frequency> radial_samples(int dim, const RadialSampling& sampling);
std::string describe(const RadialSampling& sampling, int dim);

/// Points on the unit sphere S^{d-1}: {+-1} in 1-d, `count` equally spaced
/// angles in 2-d, a Fibonacci lattice of `count` points in 3-d.
std::vector<Frequency> sphere_samples(int dim, int count);

/// `count` frequencies with log-uniform radius in [xi_min, xi_max] and
/// uniformly random direction.
std::vector<Frequency> random_frequencies(int dim, int count, double xi_min, double xi_max, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Certificates

enum class CertificateKind { order_estimate, elliptic, normally_elliptic, strongly_elliptic };

const char* to_string(CertificateKind kind);

struct ClassCertificate {
  CertificateKind kind = CertificateKind::order_estimate;
  bool pass = false;
  /// Supremum (or infimum, for the eigenvalue tests) of the defining ratio.
  double measured_constant = 0.0;
  int max_alpha_checked = 0;
  std::string sampling;
  std::string diagnostic;
  Report details;

  Report report() const;
};

/// Relative growth allowed between the inner and outer radial halves.
inline constexpr double kStabilizationFactor = 1.1;
/// Positivity threshold for eigenvalue tests after normalizing the
/// principal symbol to unit Frobenius sup on the sphere.
inline constexpr double kPositivityTolerance = 1e-10;

/// sup over samples of ||d^alpha a(xi)||_F / lambda_{r-|alpha|}(xi) for every
/// multi-index with |alpha| <= max_alpha (central differences, step
/// max(1e-4, 1e-4 |xi|)). Passes when every ratio is finite and its sup over
/// |xi| >= xi_max/2 is at most 1.1 times its sup over |xi| < xi_max/2.
ClassCertificate check_order_estimate(const MatrixSymbol& a, int max_alpha, double xi_max);
ClassCertificate check_order_estimate(const MatrixSymbol& a, int max_alpha, const RadialSampling& sampling);

/// sup over samples of ||a(xi)^{-1}||_F lambda_r(xi), same stabilization rule.
ClassCertificate check_ellipticity(const MatrixSymbol& a, double xi_max);
ClassCertificate check_ellipticity(const MatrixSymbol& a, const RadialSampling& sampling);

/// min over unit xi of the smallest real part of the eigenvalues of a_pi(xi).
ClassCertificate check_normal_ellipticity(const MatrixSymbol& principal, int sphere_count);

/// min over unit xi and unit eta of Re(a_pi(xi) eta . conj(eta)) / |xi|^r; the
/// eta-minimum is the smallest eigenvalue of the Hermitian part.
ClassCertificate check_strong_ellipticity(const MatrixSymbol& principal, int sphere_count);

/// Smallest shift lambda >= 0 (to `tolerance`) such that lambda + a passes
/// check_ellipticity, found by bisection.
struct EllipticityShift {
  double shift = 0.0;
  ClassCertificate certificate;
};
EllipticityShift measure_ellipticity_shift(const MatrixSymbol& a, double xi_max, double tolerance = 1e-6);

// ---------------------------------------------------------------------------
// Linear algebra

double frobenius_norm(const Matrix& m);

/// Solves b x + x b = a for Hermitian positive definite b.
Matrix sylvester_solve(const Matrix& b, const Matrix& a);

/// sqrt(d/2) ||b^{-1}||_F ||a||_F
double sylvester_bound(const Matrix& b, const Matrix& a);

/// Positive square root of a Hermitian positive semi-definite matrix.
Matrix hermitian_sqrt(const Matrix& a);

/// Pointwise positive square root. Verifies Hermitian positive definiteness
/// on the radial sample set first; the result has order r/2.
MatrixSymbol sqrt_symbol(const MatrixSymbol& a, const RadialSampling& sampling = {});

/// max over samples of ||b(xi)^2 - a(xi)||_F / ||a(xi)||_F.
double square_defect(const MatrixSymbol& b, const MatrixSymbol& a, const std::vector<Frequency>& samples);

struct SylvesterTrials {
  int instances = 0;
  double max_residual = 0.0;    // ||b x + x b - a||_F / ||a||_F
  double max_bound_ratio = 0.0; // ||x||_F / (sqrt(d/2) ||b^{-1}||_F ||a||_F)
  int violations = 0;           // residual > 1e-12 or ratio > 1
  Report report() const;
};

/// Random Hermitian positive definite b and Hermitian a of sizes 1..4 (cycled).
SylvesterTrials sylvester_trials(int instances, std::uint64_t seed);

}  // namespace sobolev
