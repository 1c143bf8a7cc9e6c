#pragma once

#include <cstddef>
#include <vector>

#include "gmclab/grid.hpp"

namespace gmclab::integrals {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// kappa(gamma) = int_R e^{2 pi i v} |v|^{-gamma^2} dv, computed as
/// 2 int_0^inf cos(2 pi v) v^{-gamma^2} dv: tanh-sinh on [0, 1/4], then
/// half-period pieces between zeros of the cosine, summed with Wynn's epsilon
/// acceleration. Requires gamma^2 < 1. kappa(0) is 0 by convention (the
/// distributional transform of 1 at frequency 1, and the gamma -> 0 limit).
QuadratureResult kappa(ChaosParameter gamma, double tol = 1e-8);

/// 2 Gamma(1 - g2) sin(pi g2 / 2) (2 pi)^{g2 - 1}, the classical cosine
/// transform of |v|^{-g2}. Independent of the quadrature route.
double kappa_closed_form(ChaosParameter gamma);

/// int_R e^{iv} |v|^{-gamma^2} dv = (2 pi)^{1 - gamma^2} kappa(gamma): the
/// constant that governs coefficients taken against e^{i n theta} on the
/// circle, where n^{1-gamma^2} E|c_n|^2 -> 2 pi * circle_kappa.
double circle_kappa(ChaosParameter gamma);

/// E|c_n|^2 = 2 pi int_0^{2 pi} cos(n x) (2 |sin(x/2)|)^{-gamma^2} dx,
/// split at the zeros of cos(n x) with tanh-sinh on every piece.
/// Throws std::domain_error for gamma^2 >= 1 (non-integrable singularity).
QuadratureResult circle_second_moment(std::size_t n, ChaosParameter gamma);

struct TailConstant {
  double value = 0.0;                 // n^{1-gamma^2} E|c_n|^2 at the largest n
  std::vector<std::size_t> frequencies;
  std::vector<double> sequence;       // n^{1-gamma^2} E|c_n|^2 along frequencies
  double relative_change = 0.0;       // between the last two frequencies
};

/// Stabilization of n^{1-gamma^2} E|c_n|^2 over n = 64, 128, ..., 1024.
/// Requires gamma^2 < 1/2; throws NumericError if the last relative change
/// exceeds 5%.
TailConstant second_moment_tail_constant(ChaosParameter gamma);

/// int_{[-A,A]^{d-1}} prod_i |x_i|^{-u} |sum_i x_i|^{-u} dx with every
/// singular factor capped as max(|y|, cutoff)^{-u}. For d = 2, cutoff = 0
/// evaluates the uncut integral, finite only for u < 1/2 (NumericError
/// otherwise). Iterated one-dimensional tanh-sinh quadrature with breakpoints
/// on the singular hyperplanes. d must be 2, 3 or 4.
double singular_integral(int d, double u, double cutoff, double half_width);

}  // namespace gmclab::integrals
