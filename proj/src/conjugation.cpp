#include "sobolev/conjugation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sobolev/calculus.hpp"

namespace sobolev {
namespace {

constexpr Complex kTwoPiI{0.0, kTwoPi};

std::size_t ipow(int base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

void require_tuple(std::span<const Frequency> xi, int count, int dim, const char* what) {
  if (static_cast<int>(xi.size()) != count)
    throw std::invalid_argument(std::string(what) + ": wrong number of frequencies");
  for (const auto& x : xi)
    if (x.size() != dim) throw std::invalid_argument(std::string(what) + ": frequency has wrong dimension");
}

// a_n evaluated by the defining recursion.
MultiSymbolTensor an_recursive(const MatrixSymbol& a, int n, std::vector<Frequency>& xi) {
  if (n == 0) return MultiSymbolTensor::from_matrix(a(xi[0]));
  const Frequency last = xi[n];
  std::vector<Frequency> head(xi.begin(), xi.begin() + n);
  const MultiSymbolTensor base = an_recursive(a, n - 1, head);
  MultiSymbolTensor out(a.dim(), n);
  for (int k = 0; k < n; ++k) {
    std::vector<Frequency> moved = head;
    moved[k] += last;
    out += (an_recursive(a, n - 1, moved) - base).append_covector(head[k]);
  }
  out *= kTwoPiI;
  return out;
}

// Generic Rec(b)(xi_0..xi_{n+1}) for a tensor-valued function b of n + 1 frequencies.
template <class F>
MultiSymbolTensor rec(F&& b, int dim, int n, std::span<const Frequency> xi) {
  std::vector<Frequency> head(xi.begin(), xi.begin() + n + 1);
  const MultiSymbolTensor base = b(std::span<const Frequency>(head));
  MultiSymbolTensor out(dim, n + 1);
  for (int k = 0; k <= n; ++k) {
    std::vector<Frequency> moved = head;
    moved[k] += xi[n + 1];
    out += (b(std::span<const Frequency>(moved)) - base).append_covector(head[k]);
  }
  return out;
}

int permutation_sign(const std::vector<int>& perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiSymbolTensor

MultiSymbolTensor::MultiSymbolTensor(int dim, int n) : d_(dim), n_(n) {
  if (dim < 1 || dim > 4 || n < 0 || n > 4) throw std::invalid_argument("MultiSymbolTensor: unsupported shape");
  data_.assign(ipow(dim, n + 2), Complex{});
}

MultiSymbolTensor MultiSymbolTensor::from_matrix(const Matrix& m) {
  MultiSymbolTensor t(static_cast<int>(m.rows()), 0);
  for (int i = 0; i < t.d_; ++i)
    for (int j = 0; j < t.d_; ++j) t.data_[i * t.d_ + j] = m(i, j);
  return t;
}

MultiSymbolTensor MultiSymbolTensor::append_covector(const Frequency& v) const {
  MultiSymbolTensor out(d_, n_ + 1);
  for (std::size_t i = 0; i < data_.size(); ++i)
    for (int j = 0; j < d_; ++j) out.data_[i * d_ + j] = data_[i] * v(j);
  return out;
}

ComplexVector MultiSymbolTensor::contract(std::span<const ComplexVector> x) const {
  if (static_cast<int>(x.size()) != n_ + 1) throw std::invalid_argument("MultiSymbolTensor::contract: wrong arity");
  // Contract the trailing slot first: T[..][j_n] x_n[j_n].
  std::vector<Complex> cur(data_);
  for (int slot = n_; slot >= 0; --slot) {
    std::vector<Complex> next(cur.size() / d_);
    for (std::size_t i = 0; i < next.size(); ++i) {
      Complex acc{};
      for (int j = 0; j < d_; ++j) acc += cur[i * d_ + j] * x[slot](j);
      next[i] = acc;
    }
    cur.swap(next);
  }
  ComplexVector out(d_);
  for (int i = 0; i < d_; ++i) out(i) = cur[i];
  return out;
}

MultiSymbolTensor MultiSymbolTensor::swap_slots(int p, int q) const {
  if (p < 0 || q < 0 || p > n_ || q > n_) throw std::invalid_argument("MultiSymbolTensor::swap_slots: bad slot");
  MultiSymbolTensor out(d_, n_);
  const int rank = n_ + 2;
  std::vector<int> idx(rank);
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    std::size_t rem = flat;
    for (int s = rank - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rem % d_);
      rem /= d_;
    }
    std::swap(idx[p + 1], idx[q + 1]);
    std::size_t dst = 0;
    for (int s = 0; s < rank; ++s) dst = dst * d_ + idx[s];
    out.data_[dst] = data_[flat];
  }
  return out;
}

MultiSymbolTensor& MultiSymbolTensor::operator+=(const MultiSymbolTensor& o) {
  if (o.d_ != d_ || o.n_ != n_) throw std::invalid_argument("MultiSymbolTensor: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

MultiSymbolTensor& MultiSymbolTensor::operator-=(const MultiSymbolTensor& o) {
  if (o.d_ != d_ || o.n_ != n_) throw std::invalid_argument("MultiSymbolTensor: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

MultiSymbolTensor& MultiSymbolTensor::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

double MultiSymbolTensor::norm() const noexcept {
  double sum = 0.0;
  for (const auto& v : data_) sum += std::norm(v);
  return std::sqrt(sum);
}

double MultiSymbolTensor::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// a_n and A_n

MultiSymbolTensor symbol_an(const MatrixSymbol& a, int n, std::span<const Frequency> xi) {
  if (n < 0 || n > 3) throw std::invalid_argument("symbol_an: n must be in 0..3");
  require_tuple(xi, n + 1, a.dim(), "symbol_an");
  std::vector<Frequency> tuple(xi.begin(), xi.end());
  return an_recursive(a, n, tuple);
}

SpectralField apply_An_recursive(const FourierMultiplier& a, int n, std::span<const SpectralField> u) {
  if (n < 0 || n > 3) throw std::invalid_argument("apply_An_recursive: n must be in 0..3");
  if (static_cast<int>(u.size()) != n + 1) throw std::invalid_argument("apply_An_recursive: need n + 1 fields");
  const TorusGrid& grid = a.grid();
  int band = 0;
  for (const auto& f : u) {
    require_same_grid(grid, f.grid(), "apply_An_recursive");
    if (f.components() != grid.dim()) throw GridMismatch("apply_An_recursive: inputs must be vector fields");
    band += f.band_limit();
  }
  if (band > grid.points() / 2 - 1) {
    int need = 8;
    while (need / 2 - 1 < band) need *= 2;
    throw InsufficientHeadroom("apply_An_recursive: summed band limit " + std::to_string(band) +
                                   " aliases on a grid of " + std::to_string(grid.points()) +
                                   " points per axis; need at least " + std::to_string(need),
                               need);
  }

  auto eval = [&](auto&& self, int order, std::vector<SpectralField> args) -> SpectralField {
    if (order == 0) return a.apply(args[0]);
    const SpectralField v = args[order];
    args.pop_back();
    SpectralField out = covariant_derivative(v, self(self, order - 1, args));
    for (int k = 0; k < order; ++k) {
      std::vector<SpectralField> moved = args;
      moved[k] = covariant_derivative(v, args[k]);
      out -= self(self, order - 1, std::move(moved));
    }
    return out;
  };
  return eval(eval, n, std::vector<SpectralField>(u.begin(), u.end()));
}

SpectralField apply_An_convolution(const MatrixSymbol& a, int n, std::span<const SpectralField> u) {
  if (n < 0 || n > 2) throw std::invalid_argument("apply_An_convolution: n must be in 0..2");
  if (static_cast<int>(u.size()) != n + 1) throw std::invalid_argument("apply_An_convolution: need n + 1 fields");
  const TorusGrid& grid = u[0].grid();
  const int d = grid.dim();
  if (a.dim() != d) throw GridMismatch("apply_An_convolution: symbol dimension differs from grid");
  if ((d == 1 && grid.points() > 32) || (d == 2 && grid.points() > 8) || d > 2)
    throw std::invalid_argument("apply_An_convolution: cost guard exceeded (1-d: n <= 32, 2-d: 8 x 8)");
  for (const auto& f : u) {
    require_same_grid(grid, f.grid(), "apply_An_convolution");
    if (f.components() != d) throw GridMismatch("apply_An_convolution: inputs must be vector fields");
  }

  std::vector<std::size_t> modes;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!grid.is_nyquist(i)) modes.push_back(i);
  auto coeff = [&](int which, std::size_t mode) {
    ComplexVector v(d);
    for (int c = 0; c < d; ++c) v(c) = u[which](c, mode);
    return v;
  };

  SpectralField out(grid, d);
  const double scale = kernel_sign(n) * std::pow(grid.volume(), -n);
  const int half = grid.points() / 2;
  std::vector<std::size_t> pick(n + 1, 0);
  std::vector<Frequency> xi(n + 1);
  std::vector<ComplexVector> args(n + 1);
  while (true) {
    Wavevector total{0, 0, 0};
    bool zero = false;
    for (int k = 0; k <= n; ++k) {
      const std::size_t mode = modes[pick[k]];
      const auto wk = grid.wavenumber(mode);
      for (int ax = 0; ax < d; ++ax) total[ax] += wk[ax];
      xi[k] = to_frequency(grid.frequency(mode), d);
      args[k] = coeff(k, mode);
      zero = zero || args[k].isZero(0.0);
    }
    bool interior = true;
    for (int ax = 0; ax < d; ++ax) interior = interior && std::abs(total[ax]) < half;
    if (interior && !zero) {
      const ComplexVector value = symbol_an(a, n, xi).contract(args);
      const std::size_t target = grid.index_of(total);
      for (int c = 0; c < d; ++c) out(c, target) += scale * value(c);
    }
    int k = 0;
    for (; k <= n; ++k) {
      if (++pick[k] < modes.size()) break;
      pick[k] = 0;
    }
    if (k > n) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// C_n estimate

CnEstimate estimate_Cn(const MatrixSymbol& a, int n, const TupleSampling& sampling) {
  if (n < 0 || n > 3) throw std::invalid_argument("estimate_Cn: n must be in 0..3");
  if (!(sampling.xi_min > 0.0) || !(sampling.xi_max > sampling.xi_min) || sampling.per_decade < 1)
    throw std::invalid_argument("estimate_Cn: invalid sampling");
  const int d = a.dim();

  // Candidate values: (radius exponent, direction index); exponent -1 marks xi = 0.
  struct Value {
    int exponent;
    int direction;
    Frequency xi;
  };
  const std::vector<Frequency> directions = sphere_samples(d, d == 2 ? 8 : 14);
  std::vector<Value> values{{-1, 0, Frequency::Zero(d)}};
  const int lo = static_cast<int>(std::ceil(std::log10(sampling.xi_min) * sampling.per_decade - 1e-9));
  const int hi = static_cast<int>(std::floor(std::log10(sampling.xi_max) * sampling.per_decade + 1e-9));
  for (int j = lo; j <= hi; ++j) {
    const double r = std::pow(10.0, static_cast<double>(j) / sampling.per_decade);
    for (std::size_t q = 0; q < directions.size(); ++q)
      values.push_back({j, static_cast<int>(q), Frequency(r * directions[q])});
  }

  double total = 1.0;
  for (int k = 0; k <= n; ++k) total *= static_cast<double>(values.size());
  std::uint64_t stride = 1;
  if (total > static_cast<double>(sampling.max_tuples))
    stride = static_cast<std::uint64_t>(std::ceil(total / static_cast<double>(sampling.max_tuples)));

  auto hash_keep = [&](const std::vector<std::size_t>& pick) {
    if (stride == 1) return true;
    std::uint64_t h = 1469598103934665603ULL;
    for (auto p : pick) {
      const std::uint64_t key = (static_cast<std::uint64_t>(values[p].exponent + 1000) << 16) ^
                                static_cast<std::uint64_t>(values[p].direction);
      h = (h ^ key) * 1099511628211ULL;
      h ^= h >> 29;
    }
    return h % stride == 0;
  };

  CnEstimate est;
  std::vector<std::size_t> pick(n + 1, 0);
  std::vector<Frequency> xi(n + 1);
  while (true) {
    if (hash_keep(pick)) {
      for (int k = 0; k <= n; ++k) xi[k] = values[pick[k]].xi;
      double prod = 1.0;
      for (int k = 0; k <= n; ++k) prod *= sobolev_weight(1.0, xi[k]);
      double envelope = 0.0;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        Frequency s = xi[0];
        for (int j = 1; j <= n; ++j)
          if (mask >> (j - 1) & 1u) s += xi[j];
        envelope += sobolev_weight(a.order() - 1.0, s);
      }
      const double ratio = symbol_an(a, n, xi).norm() / (prod * envelope);
      ++est.tuples;
      if (!(ratio <= est.ratio)) {
        est.ratio = ratio;
        est.worst = xi;
      }
    }
    int k = 0;
    for (; k <= n; ++k) {
      if (++pick[k] < values.size()) break;
      pick[k] = 0;
    }
    if (k > n) break;
  }
  return est;
}

// ---------------------------------------------------------------------------
// s_n tensors

MultiSymbolTensor t_tensor(const MatrixSymbol& a, int n, std::span<const int> p, std::span<const Frequency> frozen,
                           const Frequency& xi) {
  if (p.size() != frozen.size()) throw std::invalid_argument("t_tensor: positions and frozen values differ in count");
  MultiSymbolTensor t = MultiSymbolTensor::from_matrix(a(xi));
  std::size_t next = 0;
  for (int m = 1; m <= n; ++m) {
    if (next < p.size() && p[next] == m) {
      t = t.append_covector(frozen[next++]);
    } else {
      t = t.append_covector(xi);
    }
  }
  if (next != p.size()) throw std::invalid_argument("t_tensor: positions must be increasing within 1..n");
  return t;
}

namespace {

// s_n together with the largest single term of its defining sum, the natural
// scale against which cancellation is judged.
MultiSymbolTensor s_tensor_scaled(const MatrixSymbol& a, int n, std::span<const int> p, std::span<const Frequency> xi,
                                  double* term_scale) {
  const int r = static_cast<int>(p.size());
  if (r < 1 || r > n) throw std::invalid_argument("s_tensor: need 1 <= r <= n");
  require_tuple(xi, n + 1, a.dim(), "s_tensor");
  Frequency head = Frequency::Zero(a.dim());
  for (int k = 0; k < r; ++k) head += xi[k];

  std::vector<int> perm(r);
  for (int k = 0; k < r; ++k) perm[k] = k;
  MultiSymbolTensor out(a.dim(), n);
  std::vector<Frequency> frozen(r);
  do {
    for (int k = 0; k < r; ++k) frozen[k] = xi[perm[k]];
    const double sign = permutation_sign(perm);
    const int free = n - r + 1;  // |I_{r,n}|
    for (unsigned mask = 0; mask < (1u << free); ++mask) {
      Frequency arg = head;
      int card = 0;
      for (int j = 0; j < free; ++j)
        if (mask >> j & 1u) {
          arg += xi[r + j];
          ++card;
        }
      const double w = sign * ((card % 2) ? -1.0 : 1.0);
      const MultiSymbolTensor term = t_tensor(a, n, p, frozen, arg);
      if (term_scale) *term_scale = std::max(*term_scale, term.max_abs());
      out += Complex(w) * term;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

MultiSymbolTensor s_tensor(const MatrixSymbol& a, int n, std::span<const int> p, std::span<const Frequency> xi) {
  return s_tensor_scaled(a, n, p, xi, nullptr);
}

MultiSymbolTensor rec_s_tensor(const MatrixSymbol& a, int n, std::span<const int> p, std::span<const Frequency> xi) {
  require_tuple(xi, n + 2, a.dim(), "rec_s_tensor");
  auto b = [&](std::span<const Frequency> args) { return s_tensor(a, n, p, args); };
  return rec(b, a.dim(), n, xi);
}

Report SnIdentityReport::report() const {
  Report r;
  r.add_verdict("sn_identity", pass);
  r.add("sn_identity.tuples", tuples);
  r.add("sn_identity.max_identity_defect", max_identity_defect);
  r.add("sn_identity.max_symmetry_defect", max_symmetry_defect);
  r.add("sn_identity.max_a2_defect", max_a2_defect);
  return r;
}

SnIdentityReport verify_sn_identity(const MatrixSymbol& a, int max_n, int tuples, std::uint64_t seed, double xi_scale) {
  const int d = a.dim();
  if (d > 2) throw std::invalid_argument("verify_sn_identity: d must be 1 or 2");
  if (max_n < 1 || max_n > 2) throw std::invalid_argument("verify_sn_identity: n must be 1 or 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-xi_scale, xi_scale);
  auto draw = [&] {
    Frequency f(d);
    for (int c = 0; c < d; ++c) f(c) = unif(rng);
    return f;
  };
  auto rel = [](const MultiSymbolTensor& x, const MultiSymbolTensor& y, double scale) {
    return (x - y).max_abs() / std::max({scale, x.max_abs(), y.max_abs(), 1e-300});
  };

  SnIdentityReport rep;
  for (int t = 0; t < tuples; ++t) {
    std::vector<Frequency> xi(max_n + 2);
    for (auto& f : xi) f = draw();
    for (int n = 1; n <= max_n; ++n) {
      std::span<const Frequency> tuple(xi.data(), n + 2);
      // All increasing position lists p in 1..n.
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> p;
        for (int m = 1; m <= n; ++m)
          if (mask >> (m - 1) & 1u) p.push_back(m);
        const int r = static_cast<int>(p.size());

        double scale = 0.0;
        const MultiSymbolTensor lhs = rec_s_tensor(a, n, p, tuple);
        const MultiSymbolTensor first = s_tensor_scaled(a, n + 1, p, tuple, &scale);
        std::vector<int> p2 = p;
        p2.push_back(n + 1);
        // Arguments (xi_0..xi_{r-1}, xi_{n+1})(xi_r..xi_n).
        std::vector<Frequency> reordered(tuple.begin(), tuple.begin() + r);
        reordered.push_back(tuple[n + 1]);
        for (int k = r; k <= n; ++k) reordered.push_back(tuple[k]);
        const MultiSymbolTensor second = s_tensor_scaled(a, n + 1, p2, reordered, &scale);
        const MultiSymbolTensor rhs = Complex(-1.0) * (first + second);
        rep.max_identity_defect = std::max(rep.max_identity_defect, rel(lhs, rhs, scale));

        // Skew-symmetry in the frozen block, symmetry in the free block.
        std::span<const Frequency> base(xi.data(), n + 1);
        double s_scale = 0.0;
        const MultiSymbolTensor s = s_tensor_scaled(a, n, p, base, &s_scale);
        if (r >= 2) {
          std::vector<Frequency> sw(base.begin(), base.end());
          std::swap(sw[0], sw[1]);
          rep.max_symmetry_defect = std::max(rep.max_symmetry_defect, rel(s, Complex(-1.0) * s_tensor(a, n, p, sw), s_scale));
        }
        if (n - r + 1 >= 2) {
          std::vector<Frequency> sw(base.begin(), base.end());
          std::swap(sw[r], sw[r + 1]);
          rep.max_symmetry_defect = std::max(rep.max_symmetry_defect, rel(s, s_tensor(a, n, p, sw), s_scale));
        }
      }
    }
    // a_2 = 4 pi^2 (-s_2^1 - s_2^{1,2}) through a_2 = 2 i pi Rec(a_1), a_1 = -2 i pi s_1^1.
    if (max_n >= 1) {
      std::span<const Frequency> tuple(xi.data(), 3);
      const MultiSymbolTensor a2 = symbol_an(a, 2, tuple);
      const std::vector<int> p1{1};
      const std::vector<int> p12{1, 2};
      std::vector<Frequency> reordered{xi[0], xi[2], xi[1]};
      const MultiSymbolTensor s21 = s_tensor(a, 2, p1, tuple);
      const MultiSymbolTensor s212 = s_tensor(a, 2, p12, reordered);
      const MultiSymbolTensor expect = Complex(-4.0 * kPi * kPi) * (s21 + s212);
      rep.max_a2_defect = std::max(rep.max_a2_defect, rel(a2, expect, 4.0 * kPi * kPi * std::max(s21.max_abs(), s212.max_abs())));
    }
    ++rep.tuples;
  }
  rep.pass = rep.max_identity_defect <= 1e-10 && rep.max_symmetry_defect <= 1e-10 && rep.max_a2_defect <= 1e-10;
  return rep;
}

}  // namespace sobolev
