#include "gmclab/fields.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gmclab/fft.hpp"

namespace gmclab::fields {

double circle_covariance(double gap) {
  const double chord = 2.0 * std::abs(std::sin(0.5 * gap));
  if (chord == 0.0 || std::remainder(gap, 2.0 * std::numbers::pi) == 0.0)
    throw std::domain_error("circle_covariance: covariance diverges at gap = 0 mod 2 pi");
  return -std::log(chord);
}

double truncated_circle_covariance(double gap, std::size_t modes) {
  double sum = 0.0;
  for (std::size_t n = modes; n >= 1; --n) {
    const double k = static_cast<double>(n);
    sum += std::cos(k * gap) / k;
  }
  return sum;
}

double harmonic_number(std::size_t n) { return truncated_circle_covariance(0.0, n); }

FieldSample sample_circle_field(std::size_t modes, const GridSpec& grid, Rng& rng) {
  if (grid.domain() != Domain::Circle)
    throw std::invalid_argument("sample_circle_field: grid must be on the circle");
  const std::size_t m = grid.points();
  if (modes < 1) throw std::invalid_argument("sample_circle_field: need at least one mode");
  if (modes > m / 2)
    throw std::invalid_argument("sample_circle_field: aliasing, modes " + std::to_string(modes) +
                                " exceed points/2 = " + std::to_string(m / 2));

  // c2r evaluates X_0 + 2 Re sum_k X_k e^{ik theta_j} + X_{m/2} (-1)^j, so
  // X_n = (A_n - i B_n) / (2 sqrt n) reproduces A_n cos + B_n sin.
  std::vector<std::complex<double>> half(m / 2 + 1);
  for (std::size_t n = 1; n <= modes; ++n) {
    const double a = rng.normal();
    const double b = rng.normal();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    if (n == m / 2) {
      // Nyquist mode: sin(n theta_j) vanishes on the grid.
      half[n] = {a * scale, 0.0};
    } else {
      half[n] = {0.5 * a * scale, -0.5 * b * scale};
    }
  }

  FieldSample out{grid, std::vector<double>(m), {}, static_cast<double>(modes)};
  thread_real_fft(m).inverse(half, out.values);
  out.variance.assign(m, harmonic_number(modes));
  return out;
}

}  // namespace gmclab::fields
