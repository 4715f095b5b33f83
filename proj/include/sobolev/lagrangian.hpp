#pragma once

// Discrete diffeomorphisms phi = id + f of the torus, composition and
// inversion through quintic splines, the d_q distance, and the geodesic
// spray in Lagrangian variables (phi, v = phi_t).

#include <memory>
#include <stdexcept>
#include <vector>

#include "sobolev/epdiff.hpp"
#include "sobolev/grid.hpp"
#include "sobolev/operator.hpp"
#include "sobolev/report.hpp"
#include "sobolev/spline.hpp"

namespace sobolev {

class InvalidChart : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InversionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// phi = id + f with det(I + df) > 0 at every grid point. The Jacobian is
/// derived from f spectrally on construction.
class DiffeoChart {
 public:
  /// Throws InvalidChart when min det <= 0 or f is not a vector field.
  explicit DiffeoChart(SpectralField f);
  static DiffeoChart identity(const TorusGrid& grid);

  const TorusGrid& grid() const noexcept { return f_.grid(); }
  const SpectralField& displacement() const noexcept { return f_; }
  /// Physical samples of f.
  const RealField& displacement_samples() const noexcept { return samples_; }
  /// det(I + df) at the grid points.
  const RealField& jacobian_det() const noexcept { return det_; }
  double min_det() const noexcept { return min_det_; }

  /// phi(x) = x + f(x), f evaluated by spline at an arbitrary point.
  Point operator()(const Point& x) const;
  /// I + df at an arbitrary point (row i, column j = d_j phi_i), row-major.
  std::array<double, 9> jacobian(const Point& x) const;

 private:
  SpectralField f_;
  RealField samples_;
  RealField det_;
  double min_det_ = 0.0;
  std::shared_ptr<const std::vector<PeriodicSpline>> f_spline_;
  std::shared_ptr<const std::vector<PeriodicSpline>> df_spline_;  // d*d, index i*d + j
};

/// det(I + df) samples.
RealField jacobian_det(const DiffeoChart& phi);

/// u o phi sampled on the grid, returned as spectral coefficients.
SpectralField compose(const SpectralField& u, const DiffeoChart& phi);

/// phi o psi, i.e. displacement g + f o psi for phi = id + f, psi = id + g.
DiffeoChart compose_diffeo(const DiffeoChart& phi, const DiffeoChart& psi);

struct InversionOptions {
  double tolerance = 1e-10;  // relative to L
  int max_iterations = 50;
};

/// phi^{-1} by damped Newton on the displacement g = -f(x + g) at each grid
/// point. Throws InversionFailure when the residual stays above tolerance.
DiffeoChart invert(const DiffeoChart& phi, const InversionOptions& options = {});

/// sup over grid points of |phi(psi(x)) - x| (componentwise periodic distance).
double inversion_residual(const DiffeoChart& phi, const DiffeoChart& psi);

/// ||f_1 - f_2||_{H^q} + max |1/det(dphi_1) - 1/det(dphi_2)|.
double distance_dq(const DiffeoChart& phi1, const DiffeoChart& phi2, double q);

/// S(u) = A^{-1}{[A, grad_u] u - (grad u)^t A u - (div u) A u}
///      = grad_u u - B(u, u).
SpectralField spray_at_identity(const FourierMultiplier& a, const SpectralField& u);

/// [A, grad_u] u = A(grad_u u) - grad_u(A u).
SpectralField commutator_term(const FourierMultiplier& a, const SpectralField& u);

struct GeodesicState {
  double t = 0.0;
  DiffeoChart phi;
  SpectralField v;  // phi_t, a field on the grid
};

struct SprayValue {
  SpectralField dphi;  // = v
  SpectralField dv;    // = S(u) o phi, u = v o phi^{-1}
};

SprayValue spray_rhs(const FourierMultiplier& a, const GeodesicState& state);

/// One RK4 step of the spray in (f, v).
GeodesicState step_lagrangian(const FourierMultiplier& a, const GeodesicState& state, double dt);

/// Eulerian velocity v o phi^{-1} of a Lagrangian state.
SpectralField eulerian_velocity(const GeodesicState& state);

/// 0.5 * integral of ((A u) o phi) . v det(dphi), u = v o phi^{-1}.
double lagrangian_energy(const FourierMultiplier& a, const GeodesicState& state);

struct LagrangianRun {
  GeodesicState final_state;
  double min_det_seen = 0.0;
  std::size_t steps = 0;
};

LagrangianRun integrate_lagrangian(const FourierMultiplier& a, const SpectralField& u0, double dt, double t_end);

struct RegularityProbe {
  std::vector<double> orders;
  std::vector<double> max_ratio;  // max_t ||u(t)||_{H^q} / ||u(0)||_{H^q}, 0/0 -> 1
  bool pass = false;              // every ratio finite and <= bound
  double bound = 1e3;
  Report report() const;
};

RegularityProbe regularity_probe(const std::vector<SpectralField>& velocities, const std::vector<double>& orders,
                                 double bound = 1e3);

/// Same from trajectory rows whose sobolev_norms were recorded for `orders`.
RegularityProbe regularity_probe(const Trajectory& trajectory, const std::vector<double>& orders,
                                 double bound = 1e3);

}  // namespace sobolev
