#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "gmclab/integrals.hpp"
#include "gmclab/stats.hpp"
#include "gmclab/toy_model.hpp"

using namespace gmclab;
using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

struct Moments {
  double sum = 0, sq = 0;
  std::size_t n = 0;
  void add(double x) {
    sum += x;
    sq += x * x;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double se() const {
    const double m = mean();
    return std::sqrt((sq / static_cast<double>(n) - m * m) / static_cast<double>(n));
  }
  bool within(double target, double k) const { return std::abs(mean() - target) <= k * se(); }
};

// 2 int_0^1 (1 - r) cos(2 pi n r) exp(g2 Cov_T(r)) dr, integrated piecewise
// between zeros of the cosine with a break at 1/T.
double continuum_second_moment(double g2, double T, long n) {
  auto cov = [T](double r) { return r <= 1 / T ? std::log(T) + 1 - T * r : -std::log(r); };
  auto f = [&](double r) { return 2 * (1 - r) * std::cos(2 * pi * n * r) * std::exp(g2 * cov(r)); };
  std::vector<double> cuts{0.0, 1 / T};
  for (long k = 1; k <= 2 * n; ++k) cuts.push_back((2 * k - 1) / (4.0 * n));
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i])
      total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 5, 1e-13);
  return total;
}

}  // namespace

TEST_CASE("bm_covariance examples") {
  CHECK(toy::bm_covariance(std::numbers::e, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(toy::bm_covariance(4, 0.25) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(toy::bm_covariance(4, 0.25 - 1e-12) == doctest::Approx(std::log(4.0)).epsilon(1e-10));
  CHECK(toy::bm_covariance(10, 0.5) == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(toy::bm_covariance(10, 1.5) == 0.0);
  CHECK_THROWS_AS(toy::bm_covariance(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("increment_covariance examples") {
  CHECK(toy::increment_covariance(2, 4, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(toy::increment_covariance(2, 4, 0.5) == 0.0);
  CHECK(toy::increment_covariance(2, 1e6, 0.25) == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-12));
  CHECK(std::abs(toy::increment_covariance(2, 1e6, 0.25) - 0.193147) < 1e-6);
  for (double r = 0; r < 1; r += 0.01) CHECK(toy::increment_covariance(3, 50, r) >= 0.0);
  CHECK_THROWS_AS(toy::increment_covariance(4, 4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(toy::increment_covariance(4, 2, 0.1), std::invalid_argument);
}

TEST_CASE("Bacry-Muzy sampler") {
  const auto grid = GridSpec::unit_interval(1024);
  Rng a(5), b(5);
  CHECK(toy::sample_bm_field(8, grid, a).values == toy::sample_bm_field(8, grid, b).values);

  Rng r(6);
  toy::StationaryGaussianSampler s([](double x) { return toy::bm_covariance(8, x); }, grid);
  CHECK(s.variance() == doctest::Approx(std::log(8.0) + 1));
  CHECK(s.clipped_mass() < 1e-6);
  Moments v0, v500, lag;
  for (int k = 0; k < 20000; ++k) {
    const auto x = s.sample(r);
    v0.add(x[0] * x[0]);
    v500.add(x[500] * x[500]);
    lag.add(x[100] * x[164]);
  }
  CHECK(v0.within(std::log(8.0) + 1, 3));
  CHECK(v500.within(std::log(8.0) + 1, 3));
  CHECK(lag.within(toy::bm_covariance(8, 64.0 / 1024), 3));
  CHECK_THROWS_AS(toy::sample_bm_field(8, GridSpec::circle(64), r), std::invalid_argument);
}

TEST_CASE("coarse plus increment has the fine covariance") {
  const toy::BmPairSampler sampler(8, 64, GridSpec::unit_interval(512));
  const double h = 1.0 / 512;
  Moments c0, c4, c40;
  for (std::uint64_t k = 0; k < 20000; ++k) {
    const auto f = sampler.sample(seed_for_replica(99, k)).fine();
    c0.add(f.values[10] * f.values[10]);
    c4.add(f.values[10] * f.values[14]);
    c40.add(f.values[10] * f.values[50]);
  }
  CHECK(c0.within(toy::bm_covariance(64, 0), 3));
  CHECK(c4.within(toy::bm_covariance(64, 4 * h), 3));
  CHECK(c40.within(toy::bm_covariance(64, 40 * h), 3));
  const auto p = sampler.sample(7);
  CHECK(p.fine().cutoff == 64.0);
  CHECK(p.coarse.cutoff == 8.0);
  CHECK(p.fine().variance[0] == doctest::Approx(std::log(64.0) + 1));
}

TEST_CASE("Z_n basics") {
  const toy::BmPairSampler sampler(4, 256, GridSpec::unit_interval(256));
  const auto pair = sampler.sample(1);
  const auto zero = ChaosParameter::from_gamma(0.0);
  CHECK(std::abs(toy::toy_Z_n(pair.fine(), zero, 0) - cplx(1, 0)) < 1e-13);
  for (long n : {1L, 7L, 128L}) CHECK(std::abs(toy::toy_Z_n(pair.fine(), zero, n)) < 1e-13);
  CHECK(std::abs(toy::conditional_projection(pair.coarse, zero, 0) - cplx(1, 0)) < 1e-13);
  CHECK(std::abs(toy::conditional_projection(pair.coarse, zero, 5)) < 1e-13);
  const auto g = ChaosParameter::from_gamma_sq(0.25);
  const auto z0 = toy::toy_Z_n(pair.fine(), g, 0);
  CHECK(z0.real() > 0.0);
  CHECK(z0.imag() == 0.0);
  CHECK(toy::toy_Z_n(pair.fine(), g, -9) == std::conj(toy::toy_Z_n(pair.fine(), g, 9)));
  CHECK_THROWS_AS(toy::toy_Z_n(pair.fine(), g, 129), std::invalid_argument);
  CHECK_THROWS_AS(toy::toy_Z_n(pair.fine(), ChaosParameter::from_gamma_sq(1.0), 3), std::domain_error);
}

TEST_CASE("mean of Z_n, tower property, Pythagoras, orthogonality") {
  // n = 64, A = 8: coarse scale 8, fine scale M.
  const auto g = ChaosParameter::from_gamma_sq(0.25);
  const long n = 64;
  const toy::BmPairSampler sampler(8, 512, GridSpec::unit_interval(512));
  Moments zr, zi, pr, pi_, pyth, orth_re, orth_im;
  for (std::uint64_t k = 0; k < 100000; ++k) {
    const auto pair = sampler.sample(seed_for_replica(2024, k));
    const cplx z = toy::toy_Z_n(pair.fine(), g, n);
    const cplx p = toy::conditional_projection(pair.coarse, g, n);
    zr.add(z.real());
    zi.add(z.imag());
    pr.add(p.real());
    pi_.add(p.imag());
    pyth.add(std::norm(z) - std::norm(p) - std::norm(z - p));
    // g(coarse) = exp(gamma X_{n/A}(0.3)).
    const double weight = std::exp(g.gamma() * pair.coarse.values[static_cast<std::size_t>(0.3 * 512)]);
    const cplx o = (z - p) * weight;
    orth_re.add(o.real());
    orth_im.add(o.imag());
  }
  CHECK(zr.within(0, 3));
  CHECK(zi.within(0, 3));
  CHECK(pr.within(0, 3));
  CHECK(pi_.within(0, 3));
  CHECK(std::abs(zr.mean() - pr.mean()) < 3 * std::hypot(zr.se(), pr.se()));
  CHECK(pyth.within(0, 3));
  CHECK(orth_re.within(0, 4));
  CHECK(orth_im.within(0, 4));
}

TEST_CASE("E|Z_n|^2 against the one-dimensional oracle") {
  const auto g = ChaosParameter::from_gamma_sq(0.25);
  const long n = 128;
  const std::size_t m = 8192;
  const toy::BmPairSampler sampler(4, static_cast<double>(m), GridSpec::unit_interval(m));
  Moments z2;
  for (std::uint64_t k = 0; k < 4000; ++k) z2.add(std::norm(toy::toy_Z_n(sampler.sample(seed_for_replica(31, k)).fine(), g, n)));
  const double oracle = continuum_second_moment(0.25, static_cast<double>(m), n);
  MESSAGE("E|Z_n|^2 = " << z2.mean() << " +- " << z2.se() << ", oracle " << oracle);
  CHECK(z2.within(oracle, 3));
  // The grid sum tracks the same oracle.
  const double grid_sum = toy::discrete_second_moment(
      [m](double r) { return toy::bm_covariance(static_cast<double>(m), r); }, g, n, GridSpec::unit_interval(m));
  CHECK(z2.within(grid_sum, 3));
}

TEST_CASE("sigma_A_limit") {
  CHECK(toy::sigma_A_limit(ChaosParameter::from_gamma(0.0), 8) == 0.0);
  const auto g = ChaosParameter::from_gamma_sq(0.25);
  const double k = integrals::kappa(g).value;
  double prev = 1e300;
  for (double A : {8.0, 32.0, 128.0}) {
    const double gap = std::abs(toy::sigma_A_limit(g, A) - k);
    CHECK(gap < prev);
    prev = gap;
    CHECK(std::abs(toy::sigma_A_imaginary_residue(g, A)) < 1e-10);
  }
  CHECK(prev < 0.02);
}

TEST_CASE("projection_second_moment") {
  for (double A : {1.0, 8.0, 32.0}) CHECK(std::abs(toy::projection_second_moment(ChaosParameter::from_gamma(0.0), A)) < 1e-12);
  for (double a : {0.1, 0.25, 0.4}) {
    const auto g = ChaosParameter::from_gamma_sq(a);
    const double v8 = toy::projection_second_moment(g, 8), v32 = toy::projection_second_moment(g, 32),
                 v128 = toy::projection_second_moment(g, 128);
    CAPTURE(a);
    CHECK(v32 < v8);
    CHECK(v128 < v32);
    CHECK(std::abs(v128) < std::abs(v8));
  }
  // Finite-n version approaches the limit.
  const auto g = ChaosParameter::from_gamma_sq(0.25);
  const double lim = toy::projection_second_moment(g, 8);
  CHECK(std::abs(toy::projection_second_moment_at(g, 8, 4096) - lim) <
        std::abs(toy::projection_second_moment_at(g, 8, 256) - lim));
}

TEST_CASE("projection second moment: Monte Carlo against the grid sum") {
  const auto g = ChaosParameter::from_gamma_sq(0.25);
  const long n = 64;
  const std::size_t m = 512;
  const toy::BmPairSampler sampler(8, static_cast<double>(m), GridSpec::unit_interval(m));
  Moments p2;
  const double scale = std::pow(64.0, 0.75);
  for (std::uint64_t k = 0; k < 20000; ++k) {
    Rng rng(seed_for_replica(3, k));
    p2.add(scale * std::norm(toy::conditional_projection(sampler.sample_coarse(rng), g, n)));
  }
  const double oracle =
      scale * toy::discrete_second_moment([](double r) { return toy::bm_covariance(8, r); }, g, n,
                                          GridSpec::unit_interval(m));
  CHECK(p2.within(oracle, 3));
}

TEST_CASE("conditional variance split") {
  const long n = 64;
  const toy::BmPairSampler sampler(8, 512, GridSpec::unit_interval(512));
  const auto pair = sampler.sample(17);
  Rng rng(1);
  const auto flat = toy::conditional_variance_split(pair, sampler, ChaosParameter::from_gamma(0.0), n, 5, rng);
  CHECK(flat.re == 0.0);
  CHECK(flat.im == 0.0);

  const auto g = ChaosParameter::from_gamma_sq(0.25);
  const auto exact = toy::conditional_variance_exact(pair, g, n);
  const auto mc = toy::conditional_variance_split(pair, sampler, g, n, 4000, rng);
  CHECK(mc.re == doctest::Approx(exact.re).epsilon(0.1));
  CHECK(mc.im == doctest::Approx(exact.im).epsilon(0.1));
  CHECK(std::abs(mc.cross - exact.cross) < 0.1 * std::sqrt(exact.re * exact.im));

  // Expected split over the coarse field: a banded double sum of
  // h^2 e^{g2 K_t} (e^{g2 K_inc} - 1) against the products of trigonometric factors.
  const double h = 1.0 / 512, t = 8, T = 512, scale = std::pow(64.0, 0.75);
  double e_re = 0, e_im = 0, e_cross = 0;
  for (std::size_t j = 0; j < 512; ++j)
    for (std::size_t k = 0; k < 512; ++k) {
      const double r = std::abs(static_cast<double>(j) - static_cast<double>(k)) * h;
      if (r >= 1 / t) continue;
      const double w = h * h * std::exp(0.25 * toy::bm_covariance(t, r)) * std::expm1(0.25 * toy::increment_covariance(t, T, r));
      const double xj = 2 * pi * n * static_cast<double>(j) * h, xk = 2 * pi * n * static_cast<double>(k) * h;
      e_re += w * std::cos(xj) * std::cos(xk);
      e_im += w * std::sin(xj) * std::sin(xk);
      e_cross += w * std::cos(xj) * std::sin(xk);
    }
  Moments re, im, diff, cross;
  for (std::uint64_t k = 0; k < 2000; ++k) {
    const auto s = toy::conditional_variance_exact(sampler.sample(seed_for_replica(8, k)), g, n);
    re.add(s.re);
    im.add(s.im);
    diff.add(s.re - s.im);
    cross.add(s.cross);
  }
  CHECK(re.within(scale * e_re, 4));
  CHECK(im.within(scale * e_im, 4));
  CHECK(diff.within(scale * (e_re - e_im), 4));
  CHECK(cross.within(scale * e_cross, 4));
  // The boundary terms that separate the components are small against either.
  CHECK(std::abs(e_re - e_im) < 0.01 * e_re);
  CHECK(std::abs(e_cross) < 0.01 * e_re);
}
