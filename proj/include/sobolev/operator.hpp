#pragma once

// Fourier multipliers a(D) on the torus: u -> F^{-1}(a(k/L) u^(k)).

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sobolev/grid.hpp"
#include "sobolev/symbol.hpp"

namespace sobolev {

/// Raised when an operation needs an inverse table the multiplier does not have.
class NotElliptic : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class FourierMultiplier {
 public:
  /// Tabulates symbol(k/L) on every lattice mode. The inverse table is built
  /// only if check_ellipticity passes with the given radial range.
  FourierMultiplier(TorusGrid grid, MatrixSymbol symbol, double ellipticity_xi_max = 1e3);

  const TorusGrid& grid() const noexcept { return grid_; }
  const MatrixSymbol& symbol() const noexcept { return symbol_; }
  const ClassCertificate& ellipticity() const noexcept { return ellipticity_; }
  bool invertible() const noexcept { return has_inverse_; }
  /// Symbol is a multiple of the identity on every mode.
  bool is_scalar() const noexcept { return scalar_; }

  Matrix table(std::size_t mode) const;
  Matrix inverse_table(std::size_t mode) const;

  SpectralField apply(const SpectralField& u) const;
  SpectralField apply_inverse(const SpectralField& w) const;

 private:
  SpectralField multiply(const SpectralField& u, const std::vector<Complex>& table) const;

  TorusGrid grid_;
  MatrixSymbol symbol_;
  ClassCertificate ellipticity_;
  bool has_inverse_ = false;
  bool scalar_ = false;
  int d_;
  // d*d entries per mode, row-major, or one entry per mode when scalar.
  std::vector<Complex> table_;
  std::vector<Complex> inverse_;
};

/// Shared multiplier for the H^s inertia operator (1 - Laplacian)^s.
std::shared_ptr<const FourierMultiplier> sobolev_multiplier(const TorusGrid& grid, double s);

/// ||u||_{H^q}^2 = L^{-d} sum_k lambda_q(k/L)^2 |u^(k)|^2, summed over components.
double sobolev_norm(const SpectralField& u, double q);

/// <u, v>_A = integral of (Au) . v, as a lattice sum L^{-d} sum_k Re(A u^(k) . conj(v^(k))).
/// Requires a symbol flagged Hermitian positive definite.
double inner_product(const FourierMultiplier& a, const SpectralField& u, const SpectralField& v);

/// L^2 pairing in physical space: (L/n)^d sum_j u(x_j) . v(x_j).
double l2_pairing_physical(const SpectralField& u, const SpectralField& v);

/// L^2 pairing as a lattice sum.
double l2_pairing(const SpectralField& u, const SpectralField& v);

}  // namespace sobolev
