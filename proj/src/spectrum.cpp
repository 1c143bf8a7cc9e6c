#include "gmclab/spectrum.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "gmclab/fft.hpp"

namespace gmclab::spectrum {

using std::numbers::pi;

FourierSeries::FourierSeries(std::vector<std::complex<double>> nonnegative, GridSpec grid,
                             ChaosParameter gamma, double cutoff)
    : n_max_(nonnegative.empty() ? 0 : nonnegative.size() - 1),
      grid_(grid),
      gamma_(gamma),
      cutoff_(cutoff) {
  if (nonnegative.empty()) throw std::invalid_argument("FourierSeries: no coefficients");
  coeffs_.resize(2 * n_max_ + 1);
  coeffs_[n_max_] = {nonnegative[0].real(), 0.0};
  for (std::size_t n = 1; n <= n_max_; ++n) {
    coeffs_[n_max_ + n] = nonnegative[n];
    coeffs_[n_max_ - n] = std::conj(nonnegative[n]);
  }
}

FourierSeries fourier_coefficients(std::span<const double> weights, const GridSpec& grid,
                                   std::size_t n_max) {
  const std::size_t m = grid.points();
  if (weights.size() != m) throw std::invalid_argument("fourier_coefficients: weight count mismatch");
  if (n_max > m / 2)
    throw std::invalid_argument("fourier_coefficients: Nyquist, n_max " + std::to_string(n_max) +
                                " exceeds points/2 = " + std::to_string(m / 2));
  std::vector<std::complex<double>> half(m / 2 + 1);
  thread_real_fft(m).forward(weights, half);
  // The FFT uses e^{-i...}; c_n carries e^{+i n theta}.
  std::vector<std::complex<double>> nonneg(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) nonneg[n] = std::conj(half[n]);
  return FourierSeries(std::move(nonneg), grid, ChaosParameter::from_gamma(0.0), 0.0);
}

FourierSeries fourier_coefficients(const gmc::GmcMeasure& measure, std::size_t n_max) {
  auto raw = fourier_coefficients(measure.weights, measure.grid, n_max);
  std::vector<std::complex<double>> nonneg(raw.nonnegative().begin(), raw.nonnegative().end());
  return FourierSeries(std::move(nonneg), measure.grid, measure.gamma, measure.cutoff);
}

std::complex<double> rescale_coefficient(std::complex<double> c, std::size_t n, ChaosParameter gamma) {
  if (n < 1) throw std::invalid_argument("rescale_coefficient: n must be >= 1");
  if (!(gamma.gamma_sq() < 1.0)) throw std::domain_error("rescale_coefficient: requires gamma^2 < 1");
  return std::pow(static_cast<double>(n), 0.5 * (1.0 - gamma.gamma_sq())) * c;
}

FourierSeries convolution_power(const FourierSeries& series, unsigned d) {
  if (d < 1) throw std::invalid_argument("convolution_power: d must be >= 1");
  std::vector<std::complex<double>> nonneg(series.nonnegative().begin(), series.nonnegative().end());
  if (d > 1)
    for (auto& c : nonneg) {
      const std::complex<double> base = c;
      for (unsigned k = 1; k < d; ++k) c *= base;
    }
  return FourierSeries(std::move(nonneg), series.grid(), series.gamma(), series.cutoff());
}

std::vector<double> fejer_density(const FourierSeries& series, std::size_t K) {
  if (K < 1) throw std::invalid_argument("fejer_density: K must be >= 1");
  if (K > series.n_max()) throw std::invalid_argument("fejer_density: K exceeds n_max");
  const GridSpec& grid = series.grid();
  const std::size_t m = grid.points();
  if (K > m / 2) throw std::invalid_argument("fejer_density: K exceeds points/2");
  // Frequencies are in cycles per domain length; on the unit interval the
  // density normalization is 1 instead of 1/(2 pi).
  const double norm = 1.0 / grid.length();
  const double denom = static_cast<double>(K + 1);
  std::vector<std::complex<double>> half(m / 2 + 1);
  // sum_n a_n e^{-i n theta} = a_0 + 2 Re sum_{n>0} conj(a_n) e^{+i n theta}; c2r supplies the 2 Re.
  half[0] = {series[0].real() * norm, 0.0};
  for (std::size_t n = 1; n <= K; ++n) {
    const double taper = 1.0 - static_cast<double>(n) / denom;
    const auto a = std::conj(series[static_cast<std::ptrdiff_t>(n)]) * (taper * norm);
    half[n] = n == m / 2 ? std::complex<double>(2.0 * a.real(), 0.0) : a;
  }
  std::vector<double> out(m);
  thread_real_fft(m).inverse(half, out);
  return out;
}

double capacity_sum(const FourierSeries& series, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("capacity_sum: s must lie in (0, 1)");
  double sum = 0.0;
  for (std::size_t n = 1; n <= series.n_max(); ++n)
    sum += std::pow(static_cast<double>(n), s - 1.0) * std::norm(series[static_cast<std::ptrdiff_t>(n)]);
  return 2.0 * sum;
}

double riesz_energy(const gmc::GmcMeasure& measure, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("riesz_energy: s must lie in (0, 1)");
  if (measure.grid.domain() != Domain::Circle)
    throw std::invalid_argument("riesz_energy: defined for measures on the circle");
  const std::size_t m = measure.grid.points();
  const double h = measure.grid.spacing();

  auto& fft = thread_real_fft(m);
  std::vector<std::complex<double>> half(m / 2 + 1);
  fft.forward(measure.weights, half);
  for (auto& z : half) z = {std::norm(z), 0.0};
  std::vector<double> autocorr(m);
  fft.inverse(half, autocorr);  // m * R_k

  double energy = 0.0;
  for (std::size_t k = 1; k < m; ++k) {
    const double chord = 2.0 * std::abs(std::sin(0.5 * static_cast<double>(k) * h));
    energy += autocorr[k] * std::pow(chord, -s);
  }
  energy /= static_cast<double>(m);

  double diagonal = 0.0;
  for (double w : measure.weights) diagonal += w * w;
  energy += diagonal * std::pow(h, -s) * 2.0 / ((1.0 - s) * (2.0 - s));
  return energy;
}

double s_star(ChaosParameter gamma) {
  if (gamma.gamma_sq() < 0.5) return 1.0 - gamma.gamma_sq();
  const double d = std::sqrt(2.0) - gamma.gamma();
  return d * d;
}

void write_series_csv(std::ostream& os, const FourierSeries& series) {
  os << "n,re,im\n" << std::setprecision(17);
  const auto n_max = static_cast<std::ptrdiff_t>(series.n_max());
  for (std::ptrdiff_t n = -n_max; n <= n_max; ++n)
    os << n << ',' << series[n].real() << ',' << series[n].imag() << '\n';
}

}  // namespace gmclab::spectrum
