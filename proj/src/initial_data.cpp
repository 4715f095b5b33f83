#include "sobolev/initial_data.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "sobolev/operator.hpp"

namespace sobolev {
namespace {

// Imposes coeff(-k) = conj(coeff(k)) and removes Nyquist modes.
void make_real(SpectralField& f) {
  const TorusGrid& grid = f.grid();
  for (int c = 0; c < f.components(); ++c) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const std::size_t j = grid.negated(i);
      if (grid.is_nyquist(i)) {
        f(c, i) = Complex{};
      } else if (i == j) {
        f(c, i) = f(c, i).real();
      } else if (i < j) {
        f(c, j) = std::conj(f(c, i));
      }
    }
  }
}

double unit_or(double v) { return v == 0.0 ? 1.0 : v; }

}  // namespace

SpectralField gaussian_blob(const TorusGrid& grid, double amplitude, double width, const Point& center,
                            const Point* direction) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_blob: width must be positive");
  const int d = grid.dim();
  Point dir{0.0, 0.0, 0.0};
  if (direction) {
    double norm = 0.0;
    for (int a = 0; a < d; ++a) norm += (*direction)[a] * (*direction)[a];
    if (!(norm > 0.0)) throw std::invalid_argument("gaussian_blob: zero direction");
    for (int a = 0; a < d; ++a) dir[a] = (*direction)[a] / std::sqrt(norm);
  } else {
    for (int a = 0; a < d; ++a) dir[a] = 1.0 / std::sqrt(static_cast<double>(d));
  }
  const double L = grid.length();
  const int images = static_cast<int>(std::ceil(5.0 * width / L));
  RealField samples(grid, d);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    double value = 0.0;
    std::array<int, 3> m{-images, -images, -images};
    for (int a = d; a < 3; ++a) m[a] = 0;
    while (true) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double dx = x[a] - center[a] + m[a] * L;
        r2 += dx * dx;
      }
      value += std::exp(-r2 / (2.0 * width * width));
      int a = 0;
      for (; a < d; ++a) {
        if (++m[a] <= images) break;
        m[a] = -images;
      }
      if (a == d) break;
    }
    for (int c = 0; c < d; ++c) samples(c, i) = amplitude * value * dir[c];
  }
  SpectralField out = forward_transform(samples);
  make_real(out);
  return out;
}

SpectralField random_bandlimited(const TorusGrid& grid, int components, int band, double q, double norm_q,
                                 std::uint64_t seed) {
  if (band < 0 || band > grid.points() / 2 - 1)
    throw std::invalid_argument("random_bandlimited: band must be in 0..n/2-1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField out(grid, components);
  for (int c = 0; c < components; ++c) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto k = grid.wavenumber(i);
      bool inside = true;
      for (int a = 0; a < grid.dim(); ++a) inside = inside && std::abs(k[a]) <= band;
      const double re = normal(rng);
      const double im = normal(rng);
      if (inside) out(c, i) = Complex(re, im);
    }
  }
  make_real(out);
  const double current = sobolev_norm(out, q);
  if (current > 0.0) out *= norm_q / current;
  return out;
}

SpectralField peakon_pair(const TorusGrid& grid, double amplitude, double separation, double ell, double delta) {
  if (!(ell > 0.0) || !(delta >= 0.0)) throw std::invalid_argument("peakon_pair: need ell > 0, delta >= 0");
  const double L = grid.length();
  const double c = 0.5 * L;
  const int images = 2 + static_cast<int>(std::ceil(40.0 * ell / L));
  auto kernel = [&](double y) {
    double sum = 0.0;
    for (int m = -images; m <= images; ++m) {
      const double z = y + m * L;
      sum += std::exp(-std::sqrt(z * z + delta * delta) / ell);
    }
    return sum;
  };
  RealField samples(grid, grid.dim());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i)[0];
    const double v = amplitude * (kernel(x - c + separation) - kernel(x - c - separation));
    for (int comp = 0; comp < grid.dim(); ++comp) samples(comp, i) = v;
  }
  SpectralField out = forward_transform(samples);
  make_real(out);
  return out;
}

SpectralField rough_field(const TorusGrid& grid, int components, double q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  SpectralField out(grid, components);
  for (int c = 0; c < components; ++c) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double w = sobolev_weight(q + 0.5, to_frequency(grid.frequency(i), grid.dim()));
      out(c, i) = std::polar(1.0 / unit_or(w), phase(rng));
    }
  }
  make_real(out);
  return out;
}

}  // namespace sobolev
