#pragma once

// Dealiased differential expressions of vector fields built on the grid
// primitives.

#include "sobolev/grid.hpp"

namespace sobolev {

/// grad_v w = sum_j v_j d_j w (w scalar or vector), exact for Nyquist-free
/// inputs whose band limits sum below n/2.
SpectralField covariant_derivative(const SpectralField& v, const SpectralField& w);

/// div v = sum_j d_j v_j
SpectralField divergence(const SpectralField& v);

/// Lie bracket [v, w] = grad_v w - grad_w v.
SpectralField lie_bracket(const SpectralField& v, const SpectralField& w);

/// Largest pointwise Frobenius norm of the Jacobian (d_j v_i) over the grid.
double sup_gradient_norm(const SpectralField& v);

/// Largest pointwise Euclidean norm of the physical samples of v.
double sup_norm(const SpectralField& v);

}  // namespace sobolev
