#pragma once

// Periodic lattice on T^d = (R / L Z)^d, spectral fields on it, and the
// pseudo-spectral calculus (transforms, derivatives, dealiased products).
//
// Transform convention:
//   coeff(k) = (L/n)^d * sum_j f(x_j) exp(-2 pi i k.x_j / L)
//   f(x_j)   = L^{-d} * sum_k coeff(k) exp(+2 pi i k.x_j / L)
// so coeff(k) approximates the continuous transform at frequency xi = k / L
// and d/dx_j acts as multiplication by 2 pi i k_j / L.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sobolev {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Thrown when fields, operators, or sample arrays disagree on the grid.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Wavevector = std::array<int, 3>;
using Point = std::array<double, 3>;

/// Uniform grid on the d-torus of side L with n points per axis.
///
/// Flat indices are row-major with axis 0 slowest. Unused trailing axes of
/// Wavevector / Point are zero.
class TorusGrid {
 public:
  /// dim in {1,2,3}; points a power of two, at least 8; length > 0.
  TorusGrid(int dim, int points, double length = 1.0);
  /// Placeholder 1-d grid with 8 points.
  TorusGrid() : TorusGrid(1, 8) {}

  int dim() const noexcept { return dim_; }
  int points() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return length_ / n_; }
  double cell_volume() const noexcept;
  double volume() const noexcept;

  std::array<int, 3> multi_index(std::size_t index) const noexcept;
  std::size_t flat_index(const std::array<int, 3>& multi) const noexcept;

  /// Integer wavenumber of a mode, each component in [-n/2, n/2).
  Wavevector wavenumber(std::size_t index) const noexcept;
  /// Physical frequency k / L.
  Point frequency(std::size_t index) const noexcept;
  /// True if any component sits at -n/2.
  bool is_nyquist(std::size_t index) const noexcept;
  bool is_nyquist(std::size_t index, int axis) const noexcept;
  /// Index of the mode k (components taken mod n).
  std::size_t index_of(const Wavevector& k) const noexcept;
  /// Index of the mode -k.
  std::size_t negated(std::size_t index) const noexcept;
  /// Physical sample point j * L / n.
  Point point(std::size_t index) const noexcept;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int dim_;
  int n_;
  double length_;
  std::size_t size_;
};

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what);

/// Real samples of a field with `components` components (1 = scalar,
/// d = vector field). Storage is component-major.
class RealField {
 public:
  RealField(TorusGrid grid, int components);
  RealField(TorusGrid grid, int components, std::vector<double> values);

  const TorusGrid& grid() const noexcept { return grid_; }
  int components() const noexcept { return components_; }

  std::span<double> component(int c);
  std::span<const double> component(int c) const;
  double& operator()(int c, std::size_t index) { return values_[c * grid_.size() + index]; }
  double operator()(int c, std::size_t index) const { return values_[c * grid_.size() + index]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Largest absolute sample.
  double max_abs() const noexcept;

 private:
  TorusGrid grid_;
  int components_;
  std::vector<double> values_;
};

/// Fourier coefficients of a real field on the grid, one block per
/// component. Realness means coeff(-k) = conj(coeff(k)).
class SpectralField {
 public:
  /// Zero scalar field on the placeholder grid.
  SpectralField() : SpectralField(TorusGrid(), 1) {}
  SpectralField(TorusGrid grid, int components);
  SpectralField(TorusGrid grid, int components, std::vector<Complex> coeffs);

  static SpectralField scalar(const TorusGrid& grid) { return {grid, 1}; }
  static SpectralField vector(const TorusGrid& grid) { return {grid, grid.dim()}; }

  const TorusGrid& grid() const noexcept { return grid_; }
  int components() const noexcept { return components_; }

  std::span<Complex> component(int c);
  std::span<const Complex> component(int c) const;
  Complex& operator()(int c, std::size_t index) { return coeffs_[c * grid_.size() + index]; }
  const Complex& operator()(int c, std::size_t index) const { return coeffs_[c * grid_.size() + index]; }

  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }

  /// Single component as a scalar field.
  SpectralField extract(int c) const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double factor);
  /// this += factor * other
  SpectralField& axpy(double factor, const SpectralField& other);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  double max_abs() const noexcept;
  /// Largest |coeff(-k) - conj(coeff(k))| over all modes and components.
  double conjugate_symmetry_defect() const noexcept;
  /// Largest |k|_inf over modes whose coefficient exceeds relative_floor times
  /// the largest coefficient (0 for the zero field).
  int band_limit(double relative_floor = 1e-13) const noexcept;
  bool has_nyquist_content() const noexcept;

 private:
  TorusGrid grid_;
  int components_;
  std::vector<Complex> coeffs_;
};

SpectralField forward_transform(const RealField& samples);
RealField inverse_transform(const SpectralField& field);

/// Partial derivative along `axis`: multiplication by 2 pi i k_axis / L with
/// the axis-Nyquist modes set to zero.
SpectralField spectral_gradient(const SpectralField& u, int axis);

/// Exact product of the Nyquist-free parts of f and g, truncated to the
/// interior modes |k_a| < n/2 (3/2-rule zero padding). One of the factors may
/// be scalar; otherwise the product is taken component by component.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

/// Translation (tau_h u)(x) = u(x - h): phase factor exp(-2 pi i k.h / L).
SpectralField translate(const SpectralField& u, const Point& shift);

/// Copies the interior modes (|k_a| < min(n, n')/2) of u onto another grid of
/// the same dimension and length; other modes are zero.
SpectralField resample(const SpectralField& u, const TorusGrid& target);

/// Drops all modes with a Nyquist component.
SpectralField drop_nyquist(SpectralField u);

/// Pseudo-spectral workspace on the 3n/2 padded grid. Used to form sums of
/// quadratic products in physical space with a single transform back.
class Dealiaser {
 public:
  explicit Dealiaser(const TorusGrid& grid);
  /// Process-wide instance for a grid, built on first use.
  static const Dealiaser& for_grid(const TorusGrid& grid);

  const TorusGrid& grid() const noexcept { return grid_; }
  int padded_points() const noexcept { return m_; }
  std::size_t padded_size() const noexcept { return padded_size_; }

  /// Physical samples on the padded grid of one component (Nyquist dropped).
  std::vector<double> to_padded(std::span<const Complex> coeffs) const;
  /// Transform padded samples back, keeping only interior modes.
  void from_padded(std::span<const double> samples, std::span<Complex> out) const;

 private:
  TorusGrid grid_;
  int m_;
  std::size_t padded_size_;
  std::size_t half_size_;
  // Interior modes with last wavenumber >= 0 and their half-spectrum slot.
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> padded_of_;
  // Interior modes with last wavenumber < 0, read back as conj of the slot of -k.
  std::vector<std::size_t> mirrored_;
  std::vector<std::size_t> mirror_slot_;
};

}  // namespace sobolev
