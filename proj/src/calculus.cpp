#include "sobolev/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace sobolev {

SpectralField covariant_derivative(const SpectralField& v, const SpectralField& w) {
  const TorusGrid& grid = v.grid();
  require_same_grid(grid, w.grid(), "covariant_derivative");
  const int d = grid.dim();
  if (v.components() != d) throw GridMismatch("covariant_derivative: direction must be a vector field");
  const Dealiaser& dealias = Dealiaser::for_grid(grid);
  std::vector<std::vector<double>> vs(d);
  for (int j = 0; j < d; ++j) vs[j] = dealias.to_padded(v.component(j));
  std::vector<SpectralField> dw;
  for (int j = 0; j < d; ++j) dw.push_back(spectral_gradient(w, j));

  SpectralField out(grid, w.components());
  std::vector<double> acc(dealias.padded_size());
  for (int c = 0; c < w.components(); ++c) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int j = 0; j < d; ++j) {
      const auto dj = dealias.to_padded(dw[j].component(c));
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += vs[j][i] * dj[i];
    }
    dealias.from_padded(acc, out.component(c));
  }
  return out;
}

SpectralField divergence(const SpectralField& v) {
  const TorusGrid& grid = v.grid();
  if (v.components() != grid.dim()) throw GridMismatch("divergence: needs a vector field");
  SpectralField out(grid, 1);
  for (int j = 0; j < grid.dim(); ++j) out += spectral_gradient(v.extract(j), j);
  return out;
}

SpectralField lie_bracket(const SpectralField& v, const SpectralField& w) {
  return covariant_derivative(v, w) - covariant_derivative(w, v);
}

double sup_gradient_norm(const SpectralField& v) {
  const TorusGrid& grid = v.grid();
  std::vector<double> frob(grid.size(), 0.0);
  for (int j = 0; j < grid.dim(); ++j) {
    const RealField dj = inverse_transform(spectral_gradient(v, j));
    for (int c = 0; c < v.components(); ++c) {
      auto s = dj.component(c);
      for (std::size_t i = 0; i < grid.size(); ++i) frob[i] += s[i] * s[i];
    }
  }
  double m = 0.0;
  for (double f : frob) m = std::max(m, f);
  return std::sqrt(m);
}

double sup_norm(const SpectralField& v) {
  const RealField s = inverse_transform(v);
  const std::size_t n = v.grid().size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (int c = 0; c < v.components(); ++c) sq += s(c, i) * s(c, i);
    m = std::max(m, sq);
  }
  return std::sqrt(m);
}

}  // namespace sobolev
