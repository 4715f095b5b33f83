#include "sobolev/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace sobolev {
namespace {

constexpr double kFourPiSq = 4.0 * kPi * kPi;

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

bool all_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag())) return false;
  return true;
}

std::vector<Frequency> direction_set(int dim) {
  std::vector<Frequency> dirs;
  if (dim == 1) {
    for (double s : {1.0, -1.0}) {
      Frequency f(1);
      f(0) = s;
      dirs.push_back(f);
    }
  } else if (dim == 2) {
    dirs = sphere_samples(2, 12);
  } else {
    for (int a = 0; a < dim; ++a)
      for (double s : {1.0, -1.0}) {
        Frequency f = Frequency::Zero(dim);
        f(a) = s;
        dirs.push_back(f);
      }
    if (dim == 3) {
      for (int mask = 0; mask < 8; ++mask) {
        Frequency f(3);
        for (int a = 0; a < 3; ++a) f(a) = (mask >> a & 1) ? -1.0 : 1.0;
        dirs.push_back(f / std::sqrt(3.0));
      }
    }
  }
  return dirs;
}

std::vector<double> radii(const RadialSampling& s) {
  std::vector<double> r{0.0};
  if (!(s.xi_min > 0.0) || !(s.xi_max > s.xi_min) || s.per_decade < 1)
    throw std::invalid_argument("RadialSampling: need 0 < xi_min < xi_max and per_decade >= 1");
  const double lo = std::log10(s.xi_min);
  const double hi = std::log10(s.xi_max);
  const int steps = static_cast<int>(std::ceil((hi - lo) * s.per_decade));
  for (int j = 0; j <= steps; ++j) r.push_back(std::pow(10.0, lo + (hi - lo) * j / steps));
  return r;
}

// Enumerates multi-indices alpha in N^dim with |alpha| <= max_order.
std::vector<std::array<int, 4>> multi_indices(int dim, int max_order) {
  std::vector<std::array<int, 4>> out;
  std::array<int, 4> alpha{0, 0, 0, 0};
  auto rec = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == dim) {
      out.push_back(alpha);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      alpha[axis] = k;
      self(self, axis + 1, remaining - k);
    }
    alpha[axis] = 0;
  };
  rec(rec, 0, max_order);
  std::stable_sort(out.begin(), out.end(), [dim](const auto& x, const auto& y) {
    int sx = 0, sy = 0;
    for (int a = 0; a < dim; ++a) sx += x[a], sy += y[a];
    return sx < sy;
  });
  return out;
}

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;  // to be divided by h^order
};

Stencil central_stencil(int order) {
  switch (order) {
    case 0: return {{0}, {1.0}};
    case 1: return {{-1, 1}, {-0.5, 0.5}};
    case 2: return {{-1, 0, 1}, {1.0, -2.0, 1.0}};
    case 3: return {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}};
    default: throw std::invalid_argument("central_stencil: order > 3");
  }
}

// Tensor-product central difference approximation of d^alpha a(xi).
Matrix finite_difference(const MatrixSymbol& a, const Frequency& xi, const std::array<int, 4>& alpha) {
  const int dim = a.dim();
  const double h = std::max(1e-4, 1e-4 * xi.norm());
  std::vector<Stencil> stencils;
  double scale = 1.0;
  for (int ax = 0; ax < dim; ++ax) {
    stencils.push_back(central_stencil(alpha[ax]));
    scale /= std::pow(h, alpha[ax]);
  }
  Matrix acc = Matrix::Zero(dim, dim);
  std::array<std::size_t, 4> pos{0, 0, 0, 0};
  while (true) {
    Frequency p = xi;
    double w = scale;
    for (int ax = 0; ax < dim; ++ax) {
      p(ax) += stencils[ax].offsets[pos[ax]] * h;
      w *= stencils[ax].weights[pos[ax]];
    }
    acc += w * a(p);
    int ax = 0;
    for (; ax < dim; ++ax) {
      if (++pos[ax] < stencils[ax].offsets.size()) break;
      pos[ax] = 0;
    }
    if (ax == dim) break;
  }
  return acc;
}

std::string alpha_label(const std::array<int, 4>& alpha, int dim) {
  std::string s = "alpha_";
  for (int a = 0; a < dim; ++a) s += std::to_string(alpha[a]);
  return s;
}

// Inner/outer sup bookkeeping for the stabilization rule.
struct RatioTracker {
  double boundary;
  double inner = 0.0;
  double outer = 0.0;
  double worst_xi = 0.0;

  void add(double radius, double ratio) {
    if (radius < boundary) {
      inner = std::max(inner, ratio);
    } else if (ratio > outer) {
      outer = ratio;
      worst_xi = radius;
    }
  }
  double sup() const { return std::max(inner, outer); }
  bool stabilized() const { return outer <= kStabilizationFactor * inner + 1e-9; }
};

double sphere_sup_norm(const MatrixSymbol& p, const std::vector<Frequency>& sphere) {
  double sup = 0.0;
  for (const auto& w : sphere) sup = std::max(sup, frobenius_norm(p(w)));
  return sup;
}

// Checks a_pi(mu w) = mu^r a_pi(w) on the sphere samples; returns a
// diagnostic on failure.
std::optional<std::string> homogeneity_violation(const MatrixSymbol& p, const std::vector<Frequency>& sphere) {
  const double r = p.order();
  const std::size_t stride = std::max<std::size_t>(1, sphere.size() / 64);
  for (std::size_t i = 0; i < sphere.size(); i += stride) {
    const Matrix base = p(sphere[i]);
    for (double mu : {0.5, 3.0}) {
      const Matrix expect = std::pow(mu, r) * base;
      const Matrix got = p(Frequency(mu * sphere[i]));
      const double scale = std::max(frobenius_norm(expect), std::numeric_limits<double>::min());
      if (frobenius_norm(got - expect) > 1e-10 * scale) {
        std::ostringstream os;
        os << "not homogeneous of degree " << format_double(r) << " at xi=" << describe(sphere[i])
           << " (scale " << mu << ")";
        return os.str();
      }
    }
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------

double sobolev_weight(double rho, const Frequency& xi) {
  return std::pow(1.0 + kFourPiSq * xi.squaredNorm(), 0.5 * rho);
}

double sobolev_weight(double rho, const Point& xi, int dim) { return sobolev_weight(rho, to_frequency(xi, dim)); }

Frequency to_frequency(const Point& xi, int dim) {
  Frequency f(dim);
  for (int a = 0; a < dim; ++a) f(a) = xi[a];
  return f;
}

std::string describe(const Frequency& xi) {
  std::string s = "(";
  for (Eigen::Index a = 0; a < xi.size(); ++a) {
    if (a) s += ",";
    s += format_double(xi(a));
  }
  return s + ")";
}

MatrixSymbol::MatrixSymbol(int dim, double order, Evaluator eval, SymbolFlags flags,
                           std::optional<Evaluator> principal, std::string name)
    : dim_(dim), order_(order), eval_(std::move(eval)), flags_(flags), principal_(std::move(principal)),
      name_(std::move(name)) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("MatrixSymbol: dimension must be in 1..4");
  if (!eval_) throw std::invalid_argument("MatrixSymbol: empty evaluator");
}

Matrix MatrixSymbol::operator()(const Frequency& xi) const { return eval_(xi); }

MatrixSymbol MatrixSymbol::principal() const {
  if (!principal_) throw std::logic_error("MatrixSymbol: symbol '" + name_ + "' has no principal part");
  return MatrixSymbol(dim_, order_, *principal_, SymbolFlags{flags_.hermitian, false, false}, *principal_,
                      name_ + ".principal");
}

MatrixSymbol sobolev_symbol(double s, int dim) {
  if (!(s >= 0.0)) throw std::invalid_argument("sobolev_symbol: order s must be >= 0");
  auto eval = [s, dim](const Frequency& xi) -> Matrix {
    return std::pow(1.0 + kFourPiSq * xi.squaredNorm(), s) * identity(dim);
  };
  auto principal = [s, dim](const Frequency& xi) -> Matrix {
    return std::pow(kFourPiSq * xi.squaredNorm(), s) * identity(dim);
  };
  return MatrixSymbol(dim, 2.0 * s, eval, SymbolFlags{true, true, true}, MatrixSymbol::Evaluator(principal),
                      "sobolev(s=" + format_double(s) + ")");
}

MatrixSymbol scalar_symbol(int dim, double order, std::function<double(const Frequency&)> profile,
                           SymbolFlags flags, std::string name) {
  auto eval = [dim, profile = std::move(profile)](const Frequency& xi) -> Matrix {
    return profile(xi) * identity(dim);
  };
  return MatrixSymbol(dim, order, eval, flags, std::nullopt, std::move(name));
}

MatrixSymbol shifted(const MatrixSymbol& a, double shift) {
  auto eval = [a, shift](const Frequency& xi) -> Matrix {
    return a(xi) + shift * identity(a.dim());
  };
  std::optional<MatrixSymbol::Evaluator> principal;
  if (a.has_principal()) {
    MatrixSymbol p = a.principal();
    principal = [p](const Frequency& xi) { return p(xi); };
  }
  SymbolFlags flags = a.flags();
  flags.positive_definite = flags.positive_definite && shift >= 0.0;
  return MatrixSymbol(a.dim(), a.order(), eval, flags, principal,
                      a.name() + "+" + format_double(shift));
}

MatrixSymbol shear_laplacian_symbol(double t) {
  auto eval = [t](const Frequency& xi) -> Matrix {
    Matrix m(2, 2);
    const double lap = kFourPiSq * xi.squaredNorm();
    m << lap, t * lap, 0.0, lap;
    return m;
  };
  return MatrixSymbol(2, 2.0, eval, SymbolFlags{std::abs(t) == 0.0, false, true}, MatrixSymbol::Evaluator(eval),
                      "shear_laplacian(t=" + format_double(t) + ")");
}

MatrixSymbol logistic_weighted_symbol(double r) {
  auto profile = [r](const Frequency& xi) {
    const double f = 1.0 / (1.0 + std::exp(-xi(0)));
    return f * sobolev_weight(r, xi);
  };
  return scalar_symbol(1, r, profile, SymbolFlags{true, true, false}, "logistic_weighted(r=" + format_double(r) + ")");
}

MatrixSymbol mixed_order_symbol(double r, double r2) {
  auto eval = [r, r2](const Frequency& xi) -> Matrix {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = sobolev_weight(r, xi);
    m(1, 1) = sobolev_weight(r2, xi);
    return m;
  };
  return MatrixSymbol(2, r, eval, SymbolFlags{true, true, false}, std::nullopt,
                      "mixed_order(r=" + format_double(r) + ",r2=" + format_double(r2) + ")");
}

MatrixSymbol random_hpd_symbol(int dim, double r, std::uint64_t seed) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("random_hpd_symbol: dim must be in 1..4");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.5, 2.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  // Unitary factor from QR, eigenvalues drawn separately.
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Eigen::VectorXd lam(dim);
  for (int i = 0; i < dim; ++i) lam(i) = uniform(rng);
  Matrix p = q * lam.cast<Complex>().asDiagonal() * q.adjoint();
  p = 0.5 * (p + p.adjoint());
  auto eval = [p, r, dim](const Frequency& xi) -> Matrix {
    Matrix m = sobolev_weight(r, xi) * p;
    const double w = 4.0 * kPi * kPi * sobolev_weight(r - 2.0, xi);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) += w * xi(i) * xi(j);
    return m;
  };
  return MatrixSymbol(dim, r, eval, SymbolFlags{true, true, false}, std::nullopt,
                      "random_hpd(r=" + format_double(r) + ",seed=" + std::to_string(seed) + ")");
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<Frequency> radial_samples(int dim, const RadialSampling& sampling) {
  const auto dirs = direction_set(dim);
  std::vector<Frequency> out;
  for (double r : radii(sampling)) {
    if (r == 0.0) {
      out.push_back(Frequency::Zero(dim));
      continue;
    }
    for (const auto& d : dirs) out.push_back(r * d);
  }
  return out;
}

std::string describe(const RadialSampling& sampling, int dim) {
  std::ostringstream os;
  os << "radial log-spaced |xi| in [" << format_double(sampling.xi_min) << ", " << format_double(sampling.xi_max)
     << "], " << sampling.per_decade << "/decade, " << direction_set(dim).size() << " directions, plus xi=0";
  return os.str();
}

std::vector<Frequency> random_frequencies(int dim, int count, double xi_min, double xi_max, std::uint64_t seed) {
  if (!(xi_min > 0.0) || !(xi_max >= xi_min)) throw std::invalid_argument("random_frequencies: bad radius range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logr(std::log(xi_min), std::log(xi_max));
  std::normal_distribution<double> normal;
  std::vector<Frequency> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Frequency dir(dim);
    for (int a = 0; a < dim; ++a) dir(a) = normal(rng);
    const double len = dir.norm();
    const double r = std::exp(logr(rng));
    if (len < 1e-12) continue;
    out.push_back((r / len) * dir);
  }
  return out;
}

std::vector<Frequency> sphere_samples(int dim, int count) {
  std::vector<Frequency> out;
  if (dim == 1) {
    for (double s : {1.0, -1.0}) {
      Frequency f(1);
      f(0) = s;
      out.push_back(f);
    }
    return out;
  }
  if (count < 1) throw std::invalid_argument("sphere_samples: count must be >= 1");
  if (dim == 2) {
    for (int j = 0; j < count; ++j) {
      const double th = kTwoPi * j / count;
      Frequency f(2);
      f << std::cos(th), std::sin(th);
      out.push_back(f);
    }
    return out;
  }
  if (dim == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
      const double z = 1.0 - 2.0 * (j + 0.5) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      Frequency f(3);
      f << rho * std::cos(golden * j), rho * std::sin(golden * j), z;
      out.push_back(f);
    }
    return out;
  }
  throw std::invalid_argument("sphere_samples: dimension must be 1, 2 or 3");
}

// ---------------------------------------------------------------------------
// Certificates

const char* to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::order_estimate: return "order_estimate";
    case CertificateKind::elliptic: return "elliptic";
    case CertificateKind::normally_elliptic: return "normally_elliptic";
    case CertificateKind::strongly_elliptic: return "strongly_elliptic";
  }
  return "unknown";
}

Report ClassCertificate::report() const {
  Report r;
  r.add("kind", std::string(to_string(kind)));
  r.add_verdict("verdict", pass);
  r.add("measured_constant", measured_constant);
  r.add("max_alpha_checked", max_alpha_checked);
  r.add("sampling", sampling);
  if (!diagnostic.empty()) r.add("diagnostic", diagnostic);
  r.append(details);
  return r;
}

ClassCertificate check_order_estimate(const MatrixSymbol& a, int max_alpha, double xi_max) {
  RadialSampling s;
  s.xi_max = xi_max;
  return check_order_estimate(a, max_alpha, s);
}

ClassCertificate check_order_estimate(const MatrixSymbol& a, int max_alpha, const RadialSampling& sampling) {
  if (max_alpha < 0 || max_alpha > 3)
    throw std::invalid_argument("check_order_estimate: max_alpha must be in 0..3");
  ClassCertificate cert;
  cert.kind = CertificateKind::order_estimate;
  cert.max_alpha_checked = max_alpha;
  cert.sampling = describe(sampling, a.dim());
  const auto samples = radial_samples(a.dim(), sampling);
  cert.pass = true;

  for (const auto& alpha : multi_indices(a.dim(), max_alpha)) {
    int order = 0;
    for (int ax = 0; ax < a.dim(); ++ax) order += alpha[ax];
    RatioTracker tracker{0.5 * sampling.xi_max};
    for (const auto& xi : samples) {
      const Matrix d = finite_difference(a, xi, alpha);
      if (!all_finite(d)) {
        cert.pass = false;
        cert.measured_constant = std::numeric_limits<double>::infinity();
        cert.diagnostic = "non-finite symbol derivative " + alpha_label(alpha, a.dim()) + " at xi=" + describe(xi);
        return cert;
      }
      tracker.add(xi.norm(), frobenius_norm(d) / sobolev_weight(a.order() - order, xi));
    }
    const std::string label = alpha_label(alpha, a.dim());
    cert.details.add(label + ".sup", tracker.sup());
    cert.details.add(label + ".sup_inner", tracker.inner);
    cert.details.add(label + ".sup_outer", tracker.outer);
    cert.measured_constant = std::max(cert.measured_constant, tracker.sup());
    if (!tracker.stabilized() && cert.pass) {
      cert.pass = false;
      cert.diagnostic = label + " ratio keeps growing: outer sup " + format_double(tracker.outer) +
                        " > 1.1 x inner sup " + format_double(tracker.inner) + " (|xi|=" +
                        format_double(tracker.worst_xi) + ")";
    }
  }
  return cert;
}

ClassCertificate check_ellipticity(const MatrixSymbol& a, double xi_max) {
  RadialSampling s;
  s.xi_max = xi_max;
  return check_ellipticity(a, s);
}

ClassCertificate check_ellipticity(const MatrixSymbol& a, const RadialSampling& sampling) {
  ClassCertificate cert;
  cert.kind = CertificateKind::elliptic;
  cert.sampling = describe(sampling, a.dim());
  RatioTracker tracker{0.5 * sampling.xi_max};
  for (const auto& xi : radial_samples(a.dim(), sampling)) {
    const Matrix m = a(xi);
    if (!all_finite(m)) {
      cert.measured_constant = std::numeric_limits<double>::infinity();
      cert.diagnostic = "non-finite symbol value at xi=" + describe(xi);
      return cert;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > 1e-14 * smax) || smin == 0.0) {
      cert.measured_constant = std::numeric_limits<double>::infinity();
      cert.diagnostic = "singular symbol at xi=" + describe(xi);
      return cert;
    }
    double inv_frob_sq = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) inv_frob_sq += 1.0 / (sv(i) * sv(i));
    tracker.add(xi.norm(), std::sqrt(inv_frob_sq) * sobolev_weight(a.order(), xi));
  }
  cert.measured_constant = tracker.sup();
  cert.details.add("sup_inner", tracker.inner);
  cert.details.add("sup_outer", tracker.outer);
  cert.pass = std::isfinite(cert.measured_constant) && tracker.stabilized();
  if (!cert.pass)
    cert.diagnostic = "inverse bound keeps growing: outer sup " + format_double(tracker.outer) +
                      " > 1.1 x inner sup " + format_double(tracker.inner) + " (|xi|=" +
                      format_double(tracker.worst_xi) + ")";
  return cert;
}

ClassCertificate check_normal_ellipticity(const MatrixSymbol& principal, int sphere_count) {
  ClassCertificate cert;
  cert.kind = CertificateKind::normally_elliptic;
  const auto sphere = sphere_samples(principal.dim(), sphere_count);
  cert.sampling = std::to_string(sphere.size()) + " points on S^" + std::to_string(principal.dim() - 1);
  if (auto bad = homogeneity_violation(principal, sphere)) {
    cert.diagnostic = *bad;
    cert.measured_constant = std::numeric_limits<double>::quiet_NaN();
    return cert;
  }
  double min_re = std::numeric_limits<double>::infinity();
  Frequency worst;
  for (const auto& w : sphere) {
    Eigen::ComplexEigenSolver<Matrix> es(principal(w), false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i).real() < min_re) {
        min_re = es.eigenvalues()(i).real();
        worst = w;
      }
    }
  }
  const double scale = sphere_sup_norm(principal, sphere);
  cert.measured_constant = min_re;
  cert.details.add("sphere_sup_norm", scale);
  cert.details.add("normalized_constant", scale > 0 ? min_re / scale : 0.0);
  cert.pass = scale > 0 && min_re / scale > kPositivityTolerance;
  if (!cert.pass) cert.diagnostic = "eigenvalue with non-positive real part at xi=" + describe(worst);
  return cert;
}

ClassCertificate check_strong_ellipticity(const MatrixSymbol& principal, int sphere_count) {
  ClassCertificate cert;
  cert.kind = CertificateKind::strongly_elliptic;
  const auto sphere = sphere_samples(principal.dim(), sphere_count);
  cert.sampling = std::to_string(sphere.size()) + " points on S^" + std::to_string(principal.dim() - 1) +
                  ", exact minimum over unit eta";
  if (auto bad = homogeneity_violation(principal, sphere)) {
    cert.diagnostic = *bad;
    cert.measured_constant = std::numeric_limits<double>::quiet_NaN();
    return cert;
  }
  double min_form = std::numeric_limits<double>::infinity();
  Frequency worst;
  for (const auto& w : sphere) {
    const Matrix m = principal(w);
    const Matrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    if (lo < min_form) {
      min_form = lo;
      worst = w;
    }
  }
  const double scale = sphere_sup_norm(principal, sphere);
  cert.measured_constant = min_form;
  cert.details.add("sphere_sup_norm", scale);
  cert.details.add("normalized_constant", scale > 0 ? min_form / scale : 0.0);
  cert.pass = scale > 0 && min_form / scale > kPositivityTolerance;
  if (!cert.pass) cert.diagnostic = "quadratic form not positive at xi=" + describe(worst);
  return cert;
}

EllipticityShift measure_ellipticity_shift(const MatrixSymbol& a, double xi_max, double tolerance) {
  auto passes = [&](double shift) { return check_ellipticity(shifted(a, shift), xi_max).pass; };
  if (passes(0.0)) return {0.0, check_ellipticity(a, xi_max)};
  double lo = 0.0;
  double hi = 1.0;
  while (!passes(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw SymbolDomainError("measure_ellipticity_shift: no finite shift makes the symbol elliptic");
  }
  while (hi - lo > tolerance * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? hi : lo) = mid;
  }
  return {hi, check_ellipticity(shifted(a, hi), xi_max)};
}

// ---------------------------------------------------------------------------
// Linear algebra

double frobenius_norm(const Matrix& m) { return m.norm(); }

namespace {

void require_hpd(const Matrix& b, const char* what) {
  if (b.rows() != b.cols()) throw SymbolDomainError(std::string(what) + ": matrix is not square");
  const double scale = frobenius_norm(b);
  if (frobenius_norm(b - b.adjoint()) > 1e-12 * scale)
    throw SymbolDomainError(std::string(what) + ": matrix is not Hermitian");
}

}  // namespace

Matrix sylvester_solve(const Matrix& b, const Matrix& a) {
  require_hpd(b, "sylvester_solve");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("sylvester_solve: size mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (b + b.adjoint()));
  const auto& lam = es.eigenvalues();
  if (!(lam(0) > 0.0)) throw SymbolDomainError("sylvester_solve: b is not positive definite");
  const Matrix& u = es.eigenvectors();
  Matrix at = u.adjoint() * a * u;
  for (Eigen::Index i = 0; i < at.rows(); ++i)
    for (Eigen::Index j = 0; j < at.cols(); ++j) at(i, j) /= (lam(i) + lam(j));
  return u * at * u.adjoint();
}

double sylvester_bound(const Matrix& b, const Matrix& a) {
  const double d = static_cast<double>(b.rows());
  const Matrix binv = b.inverse();
  return std::sqrt(d / 2.0) * frobenius_norm(binv) * frobenius_norm(a);
}

Matrix hermitian_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
  auto lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::sqrt(std::max(0.0, lam(i)));
  const Matrix& u = es.eigenvectors();
  return u * lam.cast<Complex>().asDiagonal() * u.adjoint();
}

MatrixSymbol sqrt_symbol(const MatrixSymbol& a, const RadialSampling& sampling) {
  if (!a.flags().hermitian || !a.flags().positive_definite)
    throw SymbolDomainError("sqrt_symbol: symbol '" + a.name() + "' is not flagged Hermitian positive definite");
  for (const auto& xi : radial_samples(a.dim(), sampling)) {
    const Matrix m = a(xi);
    const double scale = frobenius_norm(m);
    if (!all_finite(m) || frobenius_norm(m - m.adjoint()) > 1e-12 * scale)
      throw SymbolDomainError("sqrt_symbol: symbol is not Hermitian at xi=" + describe(xi));
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues()(0) > 0.0))
      throw SymbolDomainError("sqrt_symbol: symbol is not positive definite at xi=" + describe(xi));
  }
  auto eval = [a](const Frequency& xi) -> Matrix { return hermitian_sqrt(a(xi)); };
  std::optional<MatrixSymbol::Evaluator> principal;
  if (a.has_principal()) {
    MatrixSymbol p = a.principal();
    principal = [p](const Frequency& xi) -> Matrix { return hermitian_sqrt(p(xi)); };
  }
  return MatrixSymbol(a.dim(), 0.5 * a.order(), eval, a.flags(), principal, "sqrt(" + a.name() + ")");
}

double square_defect(const MatrixSymbol& b, const MatrixSymbol& a, const std::vector<Frequency>& samples) {
  double worst = 0.0;
  for (const auto& xi : samples) {
    const Matrix m = a(xi);
    const Matrix s = b(xi);
    worst = std::max(worst, frobenius_norm(s * s - m) / frobenius_norm(m));
  }
  return worst;
}

Report SylvesterTrials::report() const {
  Report r;
  r.add("instances", instances);
  r.add("max_residual", max_residual);
  r.add("max_bound_ratio", max_bound_ratio);
  r.add("violations", violations);
  r.add_verdict("verdict", violations == 0);
  return r;
}

SylvesterTrials sylvester_trials(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SylvesterTrials out;
  for (int k = 0; k < instances; ++k) {
    const int d = 1 + k % 4;
    Matrix g(d, d), h(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        g(i, j) = Complex(normal(rng), normal(rng));
        h(i, j) = Complex(normal(rng), normal(rng));
      }
    const Matrix b = g * g.adjoint() + 1e-2 * Matrix::Identity(d, d);
    const Matrix a = h + h.adjoint();
    const Matrix x = sylvester_solve(b, a);
    const double residual = frobenius_norm(b * x + x * b - a) / frobenius_norm(a);
    const double ratio = frobenius_norm(x) / sylvester_bound(b, a);
    out.max_residual = std::max(out.max_residual, residual);
    out.max_bound_ratio = std::max(out.max_bound_ratio, ratio);
    if (!(residual <= 1e-12) || !(ratio <= 1.0)) ++out.violations;
    ++out.instances;
  }
  return out;
}

}  // namespace sobolev
