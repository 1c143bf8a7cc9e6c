#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "gmclab/gmc.hpp"
#include "gmclab/grid.hpp"

namespace gmclab::spectrum {

/// Coefficients c_n = int e^{i n theta} mu(d theta) for |n| <= n_max of a real
/// measure. Negative frequencies are stored as exact conjugates.
class FourierSeries {
 public:
  /// `nonnegative` holds c_0 .. c_{n_max}; c_0 must be real.
  FourierSeries(std::vector<std::complex<double>> nonnegative, GridSpec grid, ChaosParameter gamma,
                double cutoff);

  std::size_t n_max() const noexcept { return n_max_; }
  std::complex<double> operator[](std::ptrdiff_t n) const {
    return coeffs_[static_cast<std::size_t>(n + static_cast<std::ptrdiff_t>(n_max_))];
  }
  std::span<const std::complex<double>> all() const noexcept { return coeffs_; }
  /// c_0 .. c_{n_max}.
  std::span<const std::complex<double>> nonnegative() const noexcept {
    return std::span(coeffs_).subspan(n_max_);
  }
  const GridSpec& grid() const noexcept { return grid_; }
  ChaosParameter gamma() const noexcept { return gamma_; }
  double cutoff() const noexcept { return cutoff_; }

 private:
  std::size_t n_max_;
  std::vector<std::complex<double>> coeffs_;
  GridSpec grid_;
  ChaosParameter gamma_;
  double cutoff_;
};

/// c_n = sum_j weight_j e^{i n x_j 2 pi / L}, one real FFT. n_max <= points/2.
FourierSeries fourier_coefficients(const gmc::GmcMeasure& measure, std::size_t n_max);
FourierSeries fourier_coefficients(std::span<const double> weights, const GridSpec& grid,
                                   std::size_t n_max);

/// n^{(1 - gamma^2)/2} c. Requires n >= 1 and gamma^2 < 1.
std::complex<double> rescale_coefficient(std::complex<double> c, std::size_t n, ChaosParameter gamma);

/// Coefficients of the d-fold self-convolution: c_n^d.
FourierSeries convolution_power(const FourierSeries& series, unsigned d);

/// Fejer (Cesaro) density on the series grid:
///   (1/2pi) sum_{|n|<=K} (1 - |n|/(K+1)) c_n e^{-i n theta_j}.
/// Nonnegative for the series of any nonnegative measure.
std::vector<double> fejer_density(const FourierSeries& series, std::size_t K);

/// sum_{n != 0, |n| <= n_max} |n|^{s-1} |c_n|^2, for s in (0, 1).
double capacity_sum(const FourierSeries& series, double s);

/// Discretized Riesz energy sum_{j,k} w_j w_k |e^{i theta_j} - e^{i theta_k}|^{-s}.
/// Off-diagonal pairs use the kernel at the node separation (cyclic
/// autocorrelation through one FFT); each diagonal cell contributes the
/// energy of its mass spread uniformly over the cell,
/// w_j^2 h^{-s} 2/((1-s)(2-s)).
double riesz_energy(const gmc::GmcMeasure& measure, double s);

/// Capacity threshold: 1 - gamma^2 below gamma = 1/sqrt(2), (sqrt 2 - gamma)^2 above.
double s_star(ChaosParameter gamma);

/// CSV with header `n,re,im`, one row per n in [-n_max, n_max], 17 significant digits.
void write_series_csv(std::ostream& os, const FourierSeries& series);

}  // namespace gmclab::spectrum
