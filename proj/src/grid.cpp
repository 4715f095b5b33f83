#include "sobolev/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "fft.hpp"

namespace sobolev {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int wrap_mode(int i, int n) { return i < n / 2 ? i : i - n; }

int modulo(int k, int n) {
  int r = k % n;
  return r < 0 ? r + n : r;
}

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// TorusGrid

TorusGrid::TorusGrid(int dim, int points, double length) : dim_(dim), n_(points), length_(length) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("TorusGrid: dimension must be 1, 2 or 3");
  if (points < 8 || !is_power_of_two(points))
    throw std::invalid_argument("TorusGrid: points per axis must be a power of two >= 8");
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("TorusGrid: length must be positive and finite");
  size_ = ipow(static_cast<std::size_t>(n_), dim_);
}

double TorusGrid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

double TorusGrid::volume() const noexcept { return std::pow(length_, dim_); }

std::array<int, 3> TorusGrid::multi_index(std::size_t index) const noexcept {
  std::array<int, 3> m{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    m[a] = static_cast<int>(index % n_);
    index /= n_;
  }
  return m;
}

std::size_t TorusGrid::flat_index(const std::array<int, 3>& multi) const noexcept {
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a) idx = idx * n_ + static_cast<std::size_t>(multi[a]);
  return idx;
}

Wavevector TorusGrid::wavenumber(std::size_t index) const noexcept {
  auto m = multi_index(index);
  Wavevector k{0, 0, 0};
  for (int a = 0; a < dim_; ++a) k[a] = wrap_mode(m[a], n_);
  return k;
}

Point TorusGrid::frequency(std::size_t index) const noexcept {
  auto k = wavenumber(index);
  Point xi{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) xi[a] = k[a] / length_;
  return xi;
}

bool TorusGrid::is_nyquist(std::size_t index) const noexcept {
  auto m = multi_index(index);
  for (int a = 0; a < dim_; ++a)
    if (m[a] == n_ / 2) return true;
  return false;
}

bool TorusGrid::is_nyquist(std::size_t index, int axis) const noexcept {
  return multi_index(index)[axis] == n_ / 2;
}

std::size_t TorusGrid::index_of(const Wavevector& k) const noexcept {
  std::array<int, 3> m{0, 0, 0};
  for (int a = 0; a < dim_; ++a) m[a] = modulo(k[a], n_);
  return flat_index(m);
}

std::size_t TorusGrid::negated(std::size_t index) const noexcept {
  auto m = multi_index(index);
  for (int a = 0; a < dim_; ++a) m[a] = modulo(-m[a], n_);
  return flat_index(m);
}

Point TorusGrid::point(std::size_t index) const noexcept {
  auto m = multi_index(index);
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = m[a] * spacing();
  return x;
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": grids differ");
}

// ---------------------------------------------------------------------------
// RealField

RealField::RealField(TorusGrid grid, int components)
    : grid_(grid), components_(components), values_(grid.size() * components, 0.0) {
  if (components < 1) throw std::invalid_argument("RealField: components must be >= 1");
}

RealField::RealField(TorusGrid grid, int components, std::vector<double> values)
    : grid_(grid), components_(components), values_(std::move(values)) {
  if (components < 1) throw std::invalid_argument("RealField: components must be >= 1");
  if (values_.size() != grid_.size() * components_)
    throw GridMismatch("RealField: sample array does not match grid shape");
}

std::span<double> RealField::component(int c) {
  return {values_.data() + c * grid_.size(), grid_.size()};
}

std::span<const double> RealField::component(int c) const {
  return {values_.data() + c * grid_.size(), grid_.size()};
}

double RealField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(TorusGrid grid, int components)
    : grid_(grid), components_(components), coeffs_(grid.size() * components) {
  if (components < 1) throw std::invalid_argument("SpectralField: components must be >= 1");
}

SpectralField::SpectralField(TorusGrid grid, int components, std::vector<Complex> coeffs)
    : grid_(grid), components_(components), coeffs_(std::move(coeffs)) {
  if (components < 1) throw std::invalid_argument("SpectralField: components must be >= 1");
  if (coeffs_.size() != grid_.size() * components_)
    throw GridMismatch("SpectralField: coefficient array does not match grid shape");
}

std::span<Complex> SpectralField::component(int c) {
  return {coeffs_.data() + c * grid_.size(), grid_.size()};
}

std::span<const Complex> SpectralField::component(int c) const {
  return {coeffs_.data() + c * grid_.size(), grid_.size()};
}

SpectralField SpectralField::extract(int c) const {
  auto src = component(c);
  return {grid_, 1, std::vector<Complex>(src.begin(), src.end())};
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  return axpy(1.0, other);
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  return axpy(-1.0, other);
}

SpectralField& SpectralField::operator*=(double factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

SpectralField& SpectralField::axpy(double factor, const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField arithmetic");
  if (components_ != other.components_)
    throw GridMismatch("SpectralField arithmetic: component counts differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += factor * other.coeffs_[i];
  return *this;
}

double SpectralField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::conjugate_symmetry_defect() const noexcept {
  double worst = 0.0;
  for (int c = 0; c < components_; ++c) {
    auto block = component(c);
    for (std::size_t i = 0; i < grid_.size(); ++i)
      worst = std::max(worst, std::abs(block[grid_.negated(i)] - std::conj(block[i])));
  }
  return worst;
}

int SpectralField::band_limit(double relative_floor) const noexcept {
  const double floor = relative_floor * max_abs();
  int band = 0;
  for (int c = 0; c < components_; ++c) {
    auto block = component(c);
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (std::abs(block[i]) <= floor) continue;
      auto k = grid_.wavenumber(i);
      for (int a = 0; a < grid_.dim(); ++a) band = std::max(band, std::abs(k[a]));
    }
  }
  return band;
}

bool SpectralField::has_nyquist_content() const noexcept {
  for (int c = 0; c < components_; ++c) {
    auto block = component(c);
    for (std::size_t i = 0; i < grid_.size(); ++i)
      if (grid_.is_nyquist(i) && block[i] != Complex{}) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Transforms and calculus

SpectralField forward_transform(const RealField& samples) {
  const auto& grid = samples.grid();
  SpectralField out(grid, samples.components());
  const double scale = grid.cell_volume();
  for (int c = 0; c < samples.components(); ++c) {
    auto dst = out.component(c);
    auto src = samples.component(c);
    std::copy(src.begin(), src.end(), dst.begin());
    detail::fft_inplace(grid.dim(), grid.points(), dst, detail::FftDirection::forward);
    for (auto& v : dst) v *= scale;
  }
  return out;
}

RealField inverse_transform(const SpectralField& field) {
  const auto& grid = field.grid();
  RealField out(grid, field.components());
  const double scale = 1.0 / grid.volume();
  std::vector<Complex> work(grid.size());
  for (int c = 0; c < field.components(); ++c) {
    auto src = field.component(c);
    std::copy(src.begin(), src.end(), work.begin());
    detail::fft_inplace(grid.dim(), grid.points(), work, detail::FftDirection::backward);
    auto dst = out.component(c);
    for (std::size_t i = 0; i < grid.size(); ++i) dst[i] = work[i].real() * scale;
  }
  return out;
}

SpectralField spectral_gradient(const SpectralField& u, int axis) {
  const auto& grid = u.grid();
  if (axis < 0 || axis >= grid.dim()) throw std::invalid_argument("spectral_gradient: invalid axis");
  SpectralField out(grid, u.components());
  const double factor = kTwoPi / grid.length();
  const std::size_t n = static_cast<std::size_t>(grid.points());
  const std::size_t inner = ipow(n, grid.dim() - 1 - axis);
  const std::size_t outer = grid.size() / (n * inner);
  for (int c = 0; c < u.components(); ++c) {
    auto src = u.component(c);
    auto dst = out.component(c);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t m = 0; m < n; ++m) {
        if (m == n / 2) continue;
        const double w = factor * wrap_mode(static_cast<int>(m), static_cast<int>(n));
        const std::size_t base = (o * n + m) * inner;
        for (std::size_t j = base; j < base + inner; ++j) dst[j] = Complex(-w * src[j].imag(), w * src[j].real());
      }
  }
  return out;
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid(), "dealiased_product");
  const int fc = f.components();
  const int gc = g.components();
  if (fc != gc && fc != 1 && gc != 1)
    throw GridMismatch("dealiased_product: incompatible component counts");
  const int comps = std::max(fc, gc);
  const Dealiaser& dealias = Dealiaser::for_grid(f.grid());
  SpectralField out(f.grid(), comps);
  std::vector<double> fs, gs;
  for (int c = 0; c < comps; ++c) {
    if (c == 0 || fc > 1) fs = dealias.to_padded(f.component(fc > 1 ? c : 0));
    if (c == 0 || gc > 1) gs = dealias.to_padded(g.component(gc > 1 ? c : 0));
    std::vector<double> prod(fs.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fs[i] * gs[i];
    dealias.from_padded(prod, out.component(c));
  }
  return out;
}

SpectralField translate(const SpectralField& u, const Point& shift) {
  const auto& grid = u.grid();
  SpectralField out(grid, u.components());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto k = grid.wavenumber(i);
    double phase = 0.0;
    for (int a = 0; a < grid.dim(); ++a) phase -= kTwoPi * k[a] * shift[a] / grid.length();
    const Complex rot = std::polar(1.0, phase);
    for (int c = 0; c < u.components(); ++c) out(c, i) = rot * u(c, i);
  }
  return out;
}

SpectralField resample(const SpectralField& u, const TorusGrid& target) {
  const auto& src = u.grid();
  if (src.dim() != target.dim() || src.length() != target.length())
    throw GridMismatch("resample: grids must share dimension and length");
  const int limit = std::min(src.points(), target.points()) / 2;
  SpectralField out(target, u.components());
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto k = src.wavenumber(i);
    bool interior = true;
    for (int a = 0; a < src.dim(); ++a) interior = interior && std::abs(k[a]) < limit;
    if (!interior) continue;
    const std::size_t j = target.index_of(k);
    for (int c = 0; c < u.components(); ++c) out(c, j) = u(c, i);
  }
  return out;
}

SpectralField drop_nyquist(SpectralField u) {
  const auto& grid = u.grid();
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.is_nyquist(i))
      for (int c = 0; c < u.components(); ++c) u(c, i) = Complex{};
  return u;
}

// ---------------------------------------------------------------------------
// Dealiaser

Dealiaser::Dealiaser(const TorusGrid& grid) : grid_(grid), m_(3 * grid.points() / 2) {
  const int d = grid.dim();
  padded_size_ = ipow(static_cast<std::size_t>(m_), d);
  half_size_ = detail::half_spectrum_size(d, m_);
  auto slot = [&](const Wavevector& k) {
    std::size_t p = 0;
    for (int a = 0; a < d - 1; ++a) p = p * m_ + static_cast<std::size_t>(modulo(k[a], m_));
    return p * static_cast<std::size_t>(m_ / 2 + 1) + static_cast<std::size_t>(k[d - 1]);
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_nyquist(i)) continue;
    Wavevector k = grid.wavenumber(i);
    if (k[d - 1] >= 0) {
      interior_.push_back(i);
      padded_of_.push_back(slot(k));
    } else {
      for (int a = 0; a < d; ++a) k[a] = -k[a];
      mirrored_.push_back(i);
      mirror_slot_.push_back(slot(k));
    }
  }
}

const Dealiaser& Dealiaser::for_grid(const TorusGrid& grid) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<const Dealiaser>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{grid.dim(), grid.points(), grid.length()}];
  if (!slot) slot = std::make_unique<const Dealiaser>(grid);
  return *slot;
}

std::vector<double> Dealiaser::to_padded(std::span<const Complex> coeffs) const {
  // Only the k_last >= 0 half is read: the field is taken to be real.
  std::vector<Complex> work(half_size_);
  for (std::size_t j = 0; j < interior_.size(); ++j) work[padded_of_[j]] = coeffs[interior_[j]];
  std::vector<double> out(padded_size_);
  detail::fft_c2r(grid_.dim(), m_, work, out);
  const double scale = 1.0 / grid_.volume();
  for (double& v : out) v *= scale;
  return out;
}

void Dealiaser::from_padded(std::span<const double> samples, std::span<Complex> out) const {
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<Complex> work(half_size_);
  detail::fft_r2c(grid_.dim(), m_, in, work);
  const double scale = std::pow(grid_.length() / m_, grid_.dim());
  std::fill(out.begin(), out.end(), Complex{});
  for (std::size_t j = 0; j < interior_.size(); ++j) out[interior_[j]] = work[padded_of_[j]] * scale;
  for (std::size_t j = 0; j < mirrored_.size(); ++j) out[mirrored_[j]] = std::conj(work[mirror_slot_[j]]) * scale;
}

}  // namespace sobolev
