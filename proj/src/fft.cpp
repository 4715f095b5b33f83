#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace sobolev::detail {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

enum class PlanKind { c2c_forward, c2c_backward, r2c, c2r };

std::size_t total_size(int dim, int n) {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  return total;
}

class PlanCache {
 public:
  fftw_plan get(int dim, int n, PlanKind kind) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, n, kind);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second.get();

    // FFTW_ESTIMATE never touches the arrays and gives a reproducible plan.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    int dims[3] = {n, n, n};
    fftw_plan plan = nullptr;
    if (kind == PlanKind::c2c_forward || kind == PlanKind::c2c_backward) {
      std::vector<fftw_complex> scratch(total_size(dim, n));
      const int sign = kind == PlanKind::c2c_forward ? FFTW_FORWARD : FFTW_BACKWARD;
      plan = fftw_plan_dft(dim, dims, scratch.data(), scratch.data(), sign, flags);
    } else {
      std::vector<double> real(total_size(dim, n));
      std::vector<fftw_complex> half(half_spectrum_size(dim, n));
      plan = kind == PlanKind::r2c ? fftw_plan_dft_r2c(dim, dims, real.data(), half.data(), flags)
                                   : fftw_plan_dft_c2r(dim, dims, half.data(), real.data(), flags);
    }
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    return plans_.emplace(key, PlanHandle(plan)).first->second.get();
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, PlanKind>, PlanHandle> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_inplace(int dim, int n, std::span<std::complex<double>> data, FftDirection direction) {
  if (data.size() != total_size(dim, n)) throw std::invalid_argument("fft_inplace: size mismatch");
  fftw_plan plan = cache().get(dim, n, direction == FftDirection::forward ? PlanKind::c2c_forward : PlanKind::c2c_backward);
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, raw, raw);
}

std::size_t half_spectrum_size(int dim, int n) {
  return total_size(dim - 1, n) * static_cast<std::size_t>(n / 2 + 1);
}

void fft_c2r(int dim, int n, std::span<std::complex<double>> half, std::span<double> out) {
  if (half.size() != half_spectrum_size(dim, n) || out.size() != total_size(dim, n))
    throw std::invalid_argument("fft_c2r: size mismatch");
  fftw_plan plan = cache().get(dim, n, PlanKind::c2r);
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(half.data()), out.data());
}

void fft_r2c(int dim, int n, std::span<double> in, std::span<std::complex<double>> half) {
  if (half.size() != half_spectrum_size(dim, n) || in.size() != total_size(dim, n))
    throw std::invalid_argument("fft_r2c: size mismatch");
  fftw_plan plan = cache().get(dim, n, PlanKind::r2c);
  fftw_execute_dft_r2c(plan, in.data(), reinterpret_cast<fftw_complex*>(half.data()));
}

}  // namespace sobolev::detail
