#include "sobolev/operator.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace sobolev {

FourierMultiplier::FourierMultiplier(TorusGrid grid, MatrixSymbol symbol, double ellipticity_xi_max)
    : grid_(grid), symbol_(std::move(symbol)), d_(grid.dim()) {
  if (symbol_.dim() != d_) throw GridMismatch("FourierMultiplier: symbol dimension differs from grid dimension");

  std::vector<Matrix> mats(grid_.size());
  scalar_ = true;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    mats[i] = symbol_(grid_.frequency(i));
    const Matrix& m = mats[i];
    for (int r = 0; r < d_ && scalar_; ++r)
      for (int c = 0; c < d_; ++c)
        if ((r == c && m(r, c) != m(0, 0)) || (r != c && m(r, c) != Complex{})) {
          scalar_ = false;
          break;
        }
  }
  const std::size_t stride = scalar_ ? 1 : static_cast<std::size_t>(d_ * d_);
  table_.resize(grid_.size() * stride);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (scalar_) {
      table_[i] = mats[i](0, 0);
    } else {
      for (int r = 0; r < d_; ++r)
        for (int c = 0; c < d_; ++c) table_[i * stride + r * d_ + c] = mats[i](r, c);
    }
  }

  ellipticity_ = check_ellipticity(symbol_, ellipticity_xi_max);
  has_inverse_ = ellipticity_.pass;
  if (!has_inverse_) return;
  inverse_.resize(table_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (scalar_) {
      inverse_[i] = 1.0 / table_[i];
    } else {
      const Matrix inv = mats[i].inverse();
      for (int r = 0; r < d_; ++r)
        for (int c = 0; c < d_; ++c) inverse_[i * stride + r * d_ + c] = inv(r, c);
    }
  }
}

Matrix FourierMultiplier::table(std::size_t mode) const {
  if (scalar_) return table_[mode] * Matrix::Identity(d_, d_);
  Matrix m(d_, d_);
  for (int r = 0; r < d_; ++r)
    for (int c = 0; c < d_; ++c) m(r, c) = table_[mode * d_ * d_ + r * d_ + c];
  return m;
}

Matrix FourierMultiplier::inverse_table(std::size_t mode) const {
  if (!has_inverse_) throw NotElliptic("FourierMultiplier: symbol '" + symbol_.name() + "' is not elliptic");
  if (scalar_) return inverse_[mode] * Matrix::Identity(d_, d_);
  Matrix m(d_, d_);
  for (int r = 0; r < d_; ++r)
    for (int c = 0; c < d_; ++c) m(r, c) = inverse_[mode * d_ * d_ + r * d_ + c];
  return m;
}

SpectralField FourierMultiplier::multiply(const SpectralField& u, const std::vector<Complex>& table) const {
  require_same_grid(grid_, u.grid(), "FourierMultiplier");
  const int comps = u.components();
  if (scalar_) {
    SpectralField out(grid_, comps);
    for (int c = 0; c < comps; ++c) {
      auto src = u.component(c);
      auto dst = out.component(c);
      for (std::size_t i = 0; i < grid_.size(); ++i) dst[i] = table[i] * src[i];
    }
    return out;
  }
  if (comps != d_) throw GridMismatch("FourierMultiplier: matrix symbol needs a d-component field");
  SpectralField out(grid_, comps);
  const std::size_t stride = static_cast<std::size_t>(d_ * d_);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const Complex* row = &table[i * stride];
    for (int r = 0; r < d_; ++r) {
      Complex acc{};
      for (int c = 0; c < d_; ++c) acc += row[r * d_ + c] * u(c, i);
      out(r, i) = acc;
    }
  }
  return out;
}

SpectralField FourierMultiplier::apply(const SpectralField& u) const { return multiply(u, table_); }

SpectralField FourierMultiplier::apply_inverse(const SpectralField& w) const {
  if (!has_inverse_) throw NotElliptic("FourierMultiplier: symbol '" + symbol_.name() + "' is not elliptic");
  return multiply(w, inverse_);
}

std::shared_ptr<const FourierMultiplier> sobolev_multiplier(const TorusGrid& grid, double s) {
  using Key = std::tuple<int, int, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::weak_ptr<const FourierMultiplier>> cache;
  const Key key{grid.dim(), grid.points(), grid.length(), s};
  std::lock_guard lock(mutex);
  if (auto hit = cache[key].lock()) return hit;
  auto made = std::make_shared<const FourierMultiplier>(grid, sobolev_symbol(s, grid.dim()));
  cache[key] = made;
  return made;
}

double sobolev_norm(const SpectralField& u, double q) {
  const auto& grid = u.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto xi = grid.frequency(i);
    double k2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) k2 += xi[a] * xi[a];
    const double w = std::pow(1.0 + 4.0 * kPi * kPi * k2, q);
    double mag = 0.0;
    for (int c = 0; c < u.components(); ++c) mag += std::norm(u(c, i));
    sum += w * mag;
  }
  return std::sqrt(sum / grid.volume());
}

double l2_pairing(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u.grid(), v.grid(), "l2_pairing");
  if (u.components() != v.components()) throw GridMismatch("l2_pairing: component counts differ");
  double sum = 0.0;
  for (int c = 0; c < u.components(); ++c) {
    auto a = u.component(c);
    auto b = v.component(c);
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] * std::conj(b[i])).real();
  }
  return sum / u.grid().volume();
}

double l2_pairing_physical(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u.grid(), v.grid(), "l2_pairing_physical");
  if (u.components() != v.components()) throw GridMismatch("l2_pairing_physical: component counts differ");
  const RealField a = inverse_transform(u);
  const RealField b = inverse_transform(v);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) sum += a.values()[i] * b.values()[i];
  return sum * u.grid().cell_volume();
}

double inner_product(const FourierMultiplier& a, const SpectralField& u, const SpectralField& v) {
  const auto& flags = a.symbol().flags();
  if (!flags.hermitian || !flags.positive_definite)
    throw SymbolDomainError("inner_product: symbol '" + a.symbol().name() + "' is not Hermitian positive definite");
  return l2_pairing(a.apply(u), v);
}

}  // namespace sobolev
