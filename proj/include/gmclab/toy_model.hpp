#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "gmclab/grid.hpp"
#include "gmclab/random.hpp"

namespace gmclab::toy {

/// Bacry-Muzy covariance with integral scale 1 at resolution t > 1:
///   ln t + 1 - t r   for r <= 1/t,
///   ln(1/r)          for 1/t < r <= 1,
///   0                beyond.
double bm_covariance(double t, double r);

/// bm_covariance(T, r) - bm_covariance(t, r): covariance of the scales
/// between t and T. Vanishes for r >= 1/t. Throws std::invalid_argument
/// unless 1 < t < T.
double increment_covariance(double t, double T, double r);

/// Exact sampler of a stationary Gaussian vector on a unit-interval grid with
/// covariance kernel(|x_j - x_k|), by circulant embedding in a period-2 torus
/// (2M points). Eigenvalues above -1e-8 of the largest are clipped to zero;
/// anything more negative throws EmbeddingError. Const after construction and
/// safe to share between threads.
class StationaryGaussianSampler {
 public:
  StationaryGaussianSampler(const std::function<double(double)>& kernel, const GridSpec& grid);

  /// Draws 2 * (2M) normals in the order (xi_0, eta_0, xi_1, eta_1, ...).
  std::vector<double> sample(Rng& rng) const;

  const GridSpec& grid() const noexcept { return grid_; }
  double variance() const noexcept { return variance_; }
  /// Total magnitude of the clipped negative eigenvalues.
  double clipped_mass() const noexcept { return clipped_mass_; }

 private:
  GridSpec grid_;
  double variance_;
  double clipped_mass_ = 0.0;
  std::vector<double> amplitude_;  // sqrt(lambda_k / P)
};

/// Field of scale t on a unit-interval grid with covariance bm_covariance(t, .).
FieldSample sample_bm_field(double t, const GridSpec& grid, Rng& rng);

/// Coarse field at scale t and an independent increment carrying the scales
/// from t to T; their sum is a field at scale T.
struct BmFieldPair {
  GridSpec grid;
  FieldSample coarse;
  FieldSample increment;
  double t = 0.0;
  double T = 0.0;

  FieldSample fine() const;
};

/// Samplers for one (t, T, grid) triple, reusable across replicas.
class BmPairSampler {
 public:
  BmPairSampler(double t, double T, const GridSpec& grid);

  /// Coarse field from derive_stream(seed, 1), increment from derive_stream(seed, 2).
  BmFieldPair sample(std::uint64_t seed) const;
  FieldSample sample_coarse(Rng& rng) const;
  FieldSample sample_increment(Rng& rng) const;

  double t() const noexcept { return t_; }
  double T() const noexcept { return T_; }
  double clipped_mass() const noexcept { return coarse_.clipped_mass() + increment_.clipped_mass(); }

 private:
  double t_;
  double T_;
  StationaryGaussianSampler coarse_;
  StationaryGaussianSampler increment_;
};

/// sum_j exp(gamma X_j - gamma^2/2 Var_j) h e^{2 pi i n x_j} with exact
/// phases (n j mod M). Requires |n| <= M/2 and gamma^2 < 1.
std::complex<double> toy_Z_n(const FieldSample& fine, ChaosParameter gamma, long n);

/// E[Z_n | F_t]: the same sum over the coarse field (martingale property).
/// Requires coarse.cutoff > 1.
std::complex<double> conditional_projection(const FieldSample& coarse, ChaosParameter gamma, long n);

/// 2 int_0^A cos(2 pi u) (u^{-gamma^2} - e^{gamma^2} A^{-gamma^2} e^{-gamma^2 u/A}) du.
/// Tends to kappa(gamma) as A grows. Throws NumericError if the quadrature
/// error exceeds 1e-8.
double sigma_A_limit(ChaosParameter gamma, double A);

/// int_{-A}^{A} sin(2 pi u) (...) du for the sigma_A integrand, evaluated
/// numerically; zero up to rounding by symmetry.
double sigma_A_imaginary_residue(ChaosParameter gamma, double A);

/// Limit as n -> infinity of n^{1-gamma^2} E|E[Z_n | F_{n/A}]|^2:
///   A^{-gamma^2} int_{|u|<=A} e^{2 pi i u} e^{gamma^2 (1 - |u|/A)} du
///   + int_{|u|>A} e^{2 pi i u} |u|^{-gamma^2} du.
/// At gamma = 0 the tail is taken in the Abel sense, so the value is 0.
double projection_second_moment(ChaosParameter gamma, double A);

/// n^{1-gamma^2} E|E[Z_n | F_{n/A}]|^2 for the continuum field at finite n:
/// the same integrals weighted by (1 - |u|/n) on |u| <= n.
double projection_second_moment_at(ChaosParameter gamma, double A, long n);

/// Exact E|sum_j w_j e^{2 pi i n x_j}|^2 on a unit-interval grid for weights
/// w_j = exp(gamma X_j - gamma^2/2 Var) h with stationary covariance `cov`.
double discrete_second_moment(const std::function<double(double)>& cov, ChaosParameter gamma,
                              long n, const GridSpec& grid);

/// n^{1-gamma^2}-scaled conditional second moments of the real and imaginary
/// parts of Z_n - E[Z_n | F_t] and their cross moment, given the coarse field.
struct VarianceSplit {
  double re = 0.0;
  double im = 0.0;
  double cross = 0.0;
};

/// Inner Monte Carlo over `inner` independent increments at fixed coarse field.
VarianceSplit conditional_variance_split(const BmFieldPair& pair, const BmPairSampler& sampler,
                                         ChaosParameter gamma, long n, std::size_t inner, Rng& rng);

/// The same conditional moments in closed form: the quadratic form of the
/// coarse weights against e^{gamma^2 K} - 1, where K is the increment
/// covariance (supported on |x - y| < 1/t).
VarianceSplit conditional_variance_exact(const BmFieldPair& pair, ChaosParameter gamma, long n);

}  // namespace gmclab::toy
