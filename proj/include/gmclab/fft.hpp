#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace gmclab {

/// Real-input DFT of fixed length backed by FFTW. Plans are created under a
/// global lock; execution on distinct instances is thread-safe.
///
///   forward:  out[k] = sum_j in[j] exp(-2 pi i j k / n),  k = 0..n/2
///   inverse:  out[j] = sum_{k=0}^{n-1} X[k] exp(+2 pi i j k / n)
///             with X[n-k] = conj(X[k]) implied (half spectrum in, unnormalized).
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  double* real_;
  std::complex<double>* spectrum_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Complex DFT of fixed length, out[j] = sum_k in[k] exp(sign * 2 pi i j k / n).
class ComplexFft {
 public:
  ComplexFft(std::size_t n, int sign);
  ~ComplexFft();
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

 private:
  std::size_t n_;
  std::complex<double>* in_;
  std::complex<double>* out_;
  void* plan_;
};

/// Per-thread cached transforms, so workers never share FFT workspaces.
RealFft& thread_real_fft(std::size_t n);
ComplexFft& thread_complex_fft(std::size_t n, int sign);

}  // namespace gmclab
