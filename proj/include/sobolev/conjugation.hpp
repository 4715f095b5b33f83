#pragma once

// Derivatives of u -> A_phi = R_phi A R_phi^{-1} at the identity: the operator
// recursion A_n, its Fourier kernel a_n, the convolution oracle built from
// a_n, the s_n tensor identity and the C_n envelope estimate.
//
// Symbol recursion as implemented by symbol_an (new covector slot last):
//   a_0 = a,
//   a_{n+1}(xi_0..xi_{n+1}) = 2 i pi sum_k [a_n(.., xi_k + xi_{n+1}, ..) - a_n(xi_0..xi_n)] (x) xi_k
// With the grid transform convention (d/dx <-> +2 pi i xi) the kernel of A_n is
// kernel_sign(n) * a_n = (-1)^n a_n; apply_An_convolution uses that factor.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sobolev/grid.hpp"
#include "sobolev/operator.hpp"
#include "sobolev/report.hpp"
#include "sobolev/symbol.hpp"

namespace sobolev {

using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 4, 1>;

/// Value of an (n+1)-linear map (C^d)^{n+1} -> C^d. Entries are stored
/// row-major as T[i][j_0]...[j_n]: output index first, then one index per
/// vector argument.
class MultiSymbolTensor {
 public:
  MultiSymbolTensor(int dim, int n);
  /// The n = 0 tensor of a matrix.
  static MultiSymbolTensor from_matrix(const Matrix& m);

  int dim() const noexcept { return d_; }
  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  /// T (x) v: appends a slot j_{n+1} weighted by v[j_{n+1}].
  MultiSymbolTensor append_covector(const Frequency& v) const;
  /// Applies the map to the vectors x_0..x_n.
  ComplexVector contract(std::span<const ComplexVector> x) const;
  /// Same tensor with the argument slots p and q (in 0..n) exchanged.
  MultiSymbolTensor swap_slots(int p, int q) const;

  MultiSymbolTensor& operator+=(const MultiSymbolTensor& o);
  MultiSymbolTensor& operator-=(const MultiSymbolTensor& o);
  MultiSymbolTensor& operator*=(Complex s);
  friend MultiSymbolTensor operator+(MultiSymbolTensor a, const MultiSymbolTensor& b) { return a += b; }
  friend MultiSymbolTensor operator-(MultiSymbolTensor a, const MultiSymbolTensor& b) { return a -= b; }
  friend MultiSymbolTensor operator*(Complex s, MultiSymbolTensor a) { return a *= s; }

  double norm() const noexcept;  // Frobenius
  double max_abs() const noexcept;

 private:
  int d_;
  int n_;
  std::vector<Complex> data_;
};

/// a_n(xi_0, ..., xi_n); xi.size() == n + 1, n <= 3.
MultiSymbolTensor symbol_an(const MatrixSymbol& a, int n, std::span<const Frequency> xi);

/// (-1)^n: factor relating symbol_an to the Fourier kernel of A_n.
inline double kernel_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

/// Thrown when the inputs of A_n would alias: the sum of their band limits
/// must stay below n/2 so every intermediate product is exact.
class InsufficientHeadroom : public std::invalid_argument {
 public:
  InsufficientHeadroom(const std::string& what, int required_points)
      : std::invalid_argument(what), required_points_(required_points) {}
  int required_points() const noexcept { return required_points_; }

 private:
  int required_points_;
};

/// A_0 = A, A_{n+1}(u_0..u_{n+1}) = grad_{u_{n+1}} A_n(u_0..u_n)
///                                 - sum_k A_n(.., grad_{u_{n+1}} u_k, ..).
/// n <= 3, u.size() == n + 1, all d-component vector fields.
SpectralField apply_An_recursive(const FourierMultiplier& a, int n, std::span<const SpectralField> u);

/// Brute-force lattice convolution
///   A_n(u)^(xi) = L^{-dn} sum_{xi_0+..+xi_n = xi} (-1)^n a_n(xi_0..xi_n)[u_0^(xi_0), .., u_n^(xi_n)]
/// over Nyquist-free modes. Guarded to n <= 2 and at most 32 points in 1-d,
/// 8 x 8 in 2-d.
SpectralField apply_An_convolution(const MatrixSymbol& a, int n, std::span<const SpectralField> u);

// ---------------------------------------------------------------------------
// C_n estimate

/// Tuple sample set for estimate_Cn. Each xi_k ranges over {0} and the
/// radii 10^(j / per_decade) in [xi_min, xi_max] times a direction set;
/// when the full product set exceeds max_tuples a deterministic subset is
/// kept, chosen by hashing radius exponents so the subset for a larger
/// xi_max contains the one for a smaller xi_max.
struct TupleSampling {
  double xi_min = 1e-2;
  double xi_max = 1e3;
  int per_decade = 8;
  std::size_t max_tuples = 2'000'000;
};

struct CnEstimate {
  double ratio = 0.0;
  std::size_t tuples = 0;
  std::vector<Frequency> worst;
};

/// Max over tuples of ||a_n||_F divided by
///   (prod_{k=0..n} lambda_1(xi_k)) * sum_{J subset {1..n}} lambda_{r-1}(xi_0 + sum_J xi_j).
CnEstimate estimate_Cn(const MatrixSymbol& a, int n, const TupleSampling& sampling = {});

// ---------------------------------------------------------------------------
// s_n tensors

/// t_n^{p}(frozen)(xi) = a(xi) (x) w_1 (x) .. (x) w_n with w_{p_i} = frozen_i and
/// w_m = xi elsewhere. p is strictly increasing in 1..n.
MultiSymbolTensor t_tensor(const MatrixSymbol& a, int n, std::span<const int> p, std::span<const Frequency> frozen,
                           const Frequency& xi);

/// s_n^{p_1..p_r}(xi_0..xi_{r-1})(xi_r..xi_n), with xi holding all n + 1 frequencies.
MultiSymbolTensor s_tensor(const MatrixSymbol& a, int n, std::span<const int> p, std::span<const Frequency> xi);

/// Rec(s_n^{p})(xi_0..xi_{n+1}).
MultiSymbolTensor rec_s_tensor(const MatrixSymbol& a, int n, std::span<const int> p, std::span<const Frequency> xi);

struct SnIdentityReport {
  bool pass = false;
  double max_identity_defect = 0.0;   // relative
  double max_symmetry_defect = 0.0;   // relative, both skew and symmetric parts
  double max_a2_defect = 0.0;         // a_2 = 4 pi^2 (-s_2^1 - s_2^{1,2}), relative
  int tuples = 0;
  Report report() const;
};

/// Checks Rec(s_n^p) = -s_{n+1}^p - s_{n+1}^{p, n+1} for every admissible p
/// and n in 1..max_n on `tuples` random tuples with components drawn from
/// [-xi_scale, xi_scale]. d <= 2, max_n <= 2. Tolerance 1e-10 relative.
SnIdentityReport verify_sn_identity(const MatrixSymbol& a, int max_n, int tuples, std::uint64_t seed,
                                    double xi_scale = 10.0);

}  // namespace sobolev
