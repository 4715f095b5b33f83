#pragma once

// Thin FFTW wrapper: unnormalized complex and real transforms on cubic
// d-dimensional arrays, with plans cached per (dim, n, kind).

#include <complex>
#include <cstddef>
#include <span>

namespace sobolev::detail {

enum class FftDirection { forward, backward };

/// In-place unnormalized DFT. forward uses exp(-2 pi i ...), backward exp(+...).
void fft_inplace(int dim, int n, std::span<std::complex<double>> data, FftDirection direction);

/// Half-spectrum layout for the real transforms: the last axis keeps
/// n/2 + 1 entries, so size n^(dim-1) * (n/2 + 1).
std::size_t half_spectrum_size(int dim, int n);

/// Unnormalized inverse real transform. `half` is overwritten.
void fft_c2r(int dim, int n, std::span<std::complex<double>> half, std::span<double> out);
/// Unnormalized forward real transform. `in` is left intact.
void fft_r2c(int dim, int n, std::span<double> in, std::span<std::complex<double>> half);

}  // namespace sobolev::detail
