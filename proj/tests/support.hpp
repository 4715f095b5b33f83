#pragma once

// Small helpers shared by the unit tests.

#include <cmath>
#include <cstdint>
#include <functional>

#include "sobolev/grid.hpp"
#include "sobolev/initial_data.hpp"

namespace sobolev::testing {

/// Random real vector (or scalar) field with unit L2 norm on |k|_inf <= band.
inline SpectralField random_field(const TorusGrid& grid, int components, int band, std::uint64_t seed) {
  return random_bandlimited(grid, components, band, 0.0, 1.0, seed);
}

inline double max_diff(const SpectralField& a, const SpectralField& b) { return (a - b).max_abs(); }

inline double rel_diff(const SpectralField& a, const SpectralField& b) {
  const double scale = std::max(a.max_abs(), b.max_abs());
  return scale == 0.0 ? 0.0 : max_diff(a, b) / scale;
}

/// Samples component-wise f(c, x) on the grid and transforms.
inline SpectralField sample(const TorusGrid& grid, int components, const std::function<double(int, const Point&)>& f) {
  RealField r(grid, components);
  for (int c = 0; c < components; ++c)
    for (std::size_t j = 0; j < grid.size(); ++j) r(c, j) = f(c, grid.point(j));
  return forward_transform(r);
}

}  // namespace sobolev::testing
