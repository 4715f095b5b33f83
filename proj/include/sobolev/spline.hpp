#pragma once

// Periodic quintic B-spline interpolation of grid samples, used to evaluate
// fields at displaced points x + f(x).

#include <vector>

#include "sobolev/grid.hpp"

namespace sobolev {

class PeriodicSpline {
 public:
  /// Interpolates the physical samples of one component of f.
  PeriodicSpline(const SpectralField& f, int component);

  const TorusGrid& grid() const noexcept { return grid_; }
  /// Value at an arbitrary point (wrapped onto the torus).
  double operator()(const Point& x) const;

 private:
  TorusGrid grid_;
  std::vector<double> coeffs_;
};

/// Spline interpolants for every component of a field.
std::vector<PeriodicSpline> splines_of(const SpectralField& f);

}  // namespace sobolev
