#pragma once

// Internal quadrature building blocks shared by integrals and toy_model.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gmclab::quad {

struct Integral {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

/// Tanh-sinh on [a, b]; tolerates integrable endpoint singularities.
Integral endpoint_singular(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-12);

/// Adaptive Gauss-Kronrod (31 points) on [a, b] for smooth integrands.
Integral smooth(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

/// Sum of tanh-sinh integrals over consecutive breakpoints (sorted, unique).
Integral piecewise(const std::function<double(double)>& f, std::span<const double> breakpoints,
                   double tol = 1e-12);

struct SeriesLimit {
  double value = 0.0;
  double error = 0.0;
};

/// Wynn epsilon extrapolation of a sequence of partial sums. The error is the
/// distance between the last two even-column estimates.
SeriesLimit wynn_epsilon(std::span<const double> partial_sums);

/// int_start^inf cos(2 pi u) g(u) du for smooth, slowly decaying g, summed over
/// the half-periods between zeros of the cosine and accelerated with Wynn's
/// epsilon algorithm.
struct OscillatoryTail {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};
OscillatoryTail cosine_tail(const std::function<double(double)>& g, double start,
                            std::size_t half_periods = 60);

}  // namespace gmclab::quad
