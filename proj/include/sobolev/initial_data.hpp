#pragma once

// Initial velocity fields for the scenarios and tests. All fields are real,
// Nyquist-free, and returned as spectral coefficients.

#include <cstdint>

#include "sobolev/grid.hpp"

namespace sobolev {

/// amplitude * exp(-|x - center|^2 / (2 width^2)) * direction, summed over
/// the periodic images within five widths. direction has unit length
/// (defaults to (1, .., 1) / sqrt(d)).
SpectralField gaussian_blob(const TorusGrid& grid, double amplitude, double width, const Point& center,
                            const Point* direction = nullptr);

/// Random field with independent Gaussian coefficients on |k|_inf <= band,
/// rescaled so that its H^q norm equals norm_q. band <= n/2 - 1.
SpectralField random_bandlimited(const TorusGrid& grid, int components, int band, double q, double norm_q,
                                 std::uint64_t seed);

/// Odd smoothed peakon / antipeakon pair on the first axis (1-d profile
/// copied to every component in higher dimension):
///   u(x) = amplitude * [k(x - c + s) - k(x - c - s)],  k(y) = exp(-sqrt(y^2 + delta^2) / ell)
/// with c = L/2, periodized. u is odd about c with u'(c) < 0.
SpectralField peakon_pair(const TorusGrid& grid, double amplitude, double separation, double ell, double delta);

/// Field with |u^(k)| = lambda_{q + 1/2}(k/L)^{-1} and random phases on all
/// interior modes: in H^{q'} for q' < q uniformly in n, with the H^{q+1} norm
/// growing with n.
SpectralField rough_field(const TorusGrid& grid, int components, double q, std::uint64_t seed);

}  // namespace sobolev
