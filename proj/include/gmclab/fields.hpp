#pragma once

#include <cstddef>

#include "gmclab/grid.hpp"
#include "gmclab/random.hpp"

namespace gmclab::fields {

/// E[phi(theta) phi(theta + gap)] = -ln(2 |sin(gap/2)|) for the circle GFF.
/// Throws std::domain_error when gap is a multiple of 2 pi.
double circle_covariance(double gap);

/// sum_{n=1}^{modes} cos(n gap) / n; the harmonic number H_N at gap = 0.
double truncated_circle_covariance(double gap, std::size_t modes);

/// Spectral synthesis of the circle field truncated at `modes`:
///   phi_N(theta) = sum_{n<=N} n^{-1/2} (A_n cos n theta + B_n sin n theta)
/// with A_n, B_n iid standard normal drawn in the order A_1, B_1, A_2, B_2, ...
/// One inverse real FFT of the zero-padded coefficient vector. The variance
/// vector is the constant H_N. Requires 1 <= modes <= points/2.
FieldSample sample_circle_field(std::size_t modes, const GridSpec& grid, Rng& rng);

/// H_N.
double harmonic_number(std::size_t n);

}  // namespace gmclab::fields
