#include "sobolev/spline.hpp"

#include <cmath>

namespace sobolev {
namespace {

// Values of the centred quintic B-spline at integers 0, +-1, +-2 (times 120).
double bspline_symbol(int k, int n) {
  const double th = kTwoPi * k / n;
  return (66.0 + 52.0 * std::cos(th) + 2.0 * std::cos(2.0 * th)) / 120.0;
}

// Weights of the six nodes i-2 .. i+3 for fractional offset t in [0, 1).
void quintic_weights(double t, double w[6]) {
  const double s = 1.0 - t;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  w[0] = s5 / 120.0;
  w[1] = (1.0 + 5.0 * s + 10.0 * s2 + 10.0 * s3 + 5.0 * s4 - 5.0 * s5) / 120.0;
  w[2] = (66.0 - 60.0 * t2 + 30.0 * t4 - 10.0 * t5) / 120.0;
  w[3] = (66.0 - 60.0 * s2 + 30.0 * s4 - 10.0 * s5) / 120.0;
  w[4] = (1.0 + 5.0 * t + 10.0 * t2 + 10.0 * t3 + 5.0 * t4 - 5.0 * t5) / 120.0;
  w[5] = t5 / 120.0;
}

}  // namespace

PeriodicSpline::PeriodicSpline(const SpectralField& f, int component) : grid_(f.grid()) {
  if (component < 0 || component >= f.components()) throw std::invalid_argument("PeriodicSpline: bad component");
  SpectralField filtered = f.extract(component);
  const int n = grid_.points();
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const auto m = grid_.multi_index(i);
    double b = 1.0;
    for (int a = 0; a < grid_.dim(); ++a) b *= bspline_symbol(m[a], n);
    filtered(0, i) /= b;
  }
  const RealField c = inverse_transform(filtered);
  coeffs_.assign(c.values().begin(), c.values().end());
}

double PeriodicSpline::operator()(const Point& x) const {
  const int d = grid_.dim();
  const int n = grid_.points();
  const double inv_h = 1.0 / grid_.spacing();
  int base[3] = {0, 0, 0};
  double w[3][6];
  for (int a = 0; a < d; ++a) {
    const double s = x[a] * inv_h;
    const double fl = std::floor(s);
    quintic_weights(s - fl, w[a]);
    const long long i = static_cast<long long>(fl) % n;
    base[a] = static_cast<int>(i < 0 ? i + n : i);
  }
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  double sum = 0.0;
  if (d == 1) {
    for (int p = 0; p < 6; ++p) sum += w[0][p] * coeffs_[wrap(base[0] + p - 2)];
  } else if (d == 2) {
    for (int p = 0; p < 6; ++p) {
      const std::size_t row = static_cast<std::size_t>(wrap(base[0] + p - 2)) * n;
      double inner = 0.0;
      for (int q = 0; q < 6; ++q) inner += w[1][q] * coeffs_[row + wrap(base[1] + q - 2)];
      sum += w[0][p] * inner;
    }
  } else {
    for (int p = 0; p < 6; ++p) {
      const std::size_t plane = static_cast<std::size_t>(wrap(base[0] + p - 2)) * n;
      for (int q = 0; q < 6; ++q) {
        const std::size_t row = (plane + wrap(base[1] + q - 2)) * n;
        double inner = 0.0;
        for (int r = 0; r < 6; ++r) inner += w[2][r] * coeffs_[row + wrap(base[2] + r - 2)];
        sum += w[0][p] * w[1][q] * inner;
      }
    }
  }
  return sum;
}

std::vector<PeriodicSpline> splines_of(const SpectralField& f) {
  std::vector<PeriodicSpline> out;
  for (int c = 0; c < f.components(); ++c) out.emplace_back(f, c);
  return out;
}

}  // namespace sobolev
