#include "gmclab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <stdexcept>
#include <utility>

namespace gmclab {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename T>
T* aligned_alloc_array(std::size_t count) {
  void* p = fftw_malloc(sizeof(T) * count);
  if (p == nullptr) throw std::bad_alloc();
  return static_cast<T*>(p);
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("RealFft: length must be even and >= 2");
  real_ = aligned_alloc_array<double>(n);
  spectrum_ = aligned_alloc_array<std::complex<double>>(n / 2 + 1);
  auto* spec = reinterpret_cast<fftw_complex*>(spectrum_);
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(real_);
  fftw_free(spectrum_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != n_ / 2 + 1)
    throw std::invalid_argument("RealFft::forward: size mismatch");
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::copy(spectrum_, spectrum_ + out.size(), out.begin());
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  if (in.size() != n_ / 2 + 1 || out.size() != n_)
    throw std::invalid_argument("RealFft::inverse: size mismatch");
  std::copy(in.begin(), in.end(), spectrum_);
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  std::copy(real_, real_ + n_, out.begin());
}

ComplexFft::ComplexFft(std::size_t n, int sign) : n_(n) {
  if (n == 0) throw std::invalid_argument("ComplexFft: empty length");
  in_ = aligned_alloc_array<std::complex<double>>(n);
  out_ = aligned_alloc_array<std::complex<double>>(n);
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in_),
                           reinterpret_cast<fftw_complex*>(out_),
                           sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
}

ComplexFft::~ComplexFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(in_);
  fftw_free(out_);
}

void ComplexFft::execute(std::span<const std::complex<double>> in,
                         std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != n_)
    throw std::invalid_argument("ComplexFft::execute: size mismatch");
  std::copy(in.begin(), in.end(), in_);
  fftw_execute(static_cast<fftw_plan>(plan_));
  std::copy(out_, out_ + n_, out.begin());
}

RealFft& thread_real_fft(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<RealFft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft>(n);
  return *slot;
}

ComplexFft& thread_complex_fft(std::size_t n, int sign) {
  thread_local std::map<std::pair<std::size_t, int>, std::unique_ptr<ComplexFft>> cache;
  auto& slot = cache[{n, sign < 0 ? -1 : 1}];
  if (!slot) slot = std::make_unique<ComplexFft>(n, sign);
  return *slot;
}

}  // namespace gmclab
