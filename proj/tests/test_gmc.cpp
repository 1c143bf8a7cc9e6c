#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gmclab/fields.hpp"
#include "gmclab/gmc.hpp"
#include "gmclab/spectrum.hpp"
#include "gmclab/stats.hpp"

using namespace gmclab;
using std::numbers::pi;

namespace {
gmc::GmcMeasure sample(std::size_t m, std::size_t modes, double gamma_sq, Rng& rng) {
  auto f = fields::sample_circle_field(modes, GridSpec::circle(m), rng);
  return gmc::build_measure(f, ChaosParameter::from_gamma_sq(gamma_sq));
}
}  // namespace

TEST_CASE("gamma = 0 gives Lebesgue measure") {
  Rng r(1);
  const auto mu = sample(64, 8, 0.0, r);
  for (double w : mu.weights) CHECK(w == doctest::Approx(2 * pi / 64).epsilon(1e-15));
  CHECK(gmc::total_mass(mu) == doctest::Approx(2 * pi).epsilon(1e-14));
}

TEST_CASE("weight formula at N = 1, M = 8") {
  Rng r(5), copy(5);
  const auto mu = sample(8, 1, 0.25, r);
  const double a1 = copy.normal();
  CHECK(mu.weights[0] == doctest::Approx(std::exp(0.5 * a1 - 0.125) * (2 * pi / 8)).epsilon(1e-14));
}

TEST_CASE("parameter checks") {
  FieldSample f{GridSpec::circle(8), std::vector<double>(8, 0.0), std::vector<double>(8, 1.0), 1};
  CHECK_THROWS_AS(gmc::build_measure(f, ChaosParameter::from_gamma(std::sqrt(2.0))), std::domain_error);
  CHECK_THROWS_AS(ChaosParameter::from_gamma(-0.1), std::domain_error);
  FieldSample bare{GridSpec::circle(8), std::vector<double>(8, 0.0), {}, 1};
  CHECK_THROWS_AS(gmc::build_measure(bare, ChaosParameter::from_gamma(0.5)), std::invalid_argument);
  CHECK_THROWS(gmc::mass_moment_estimate({}, 1.0, ChaosParameter::from_gamma(0.5)));
}

TEST_CASE("total mass equals c_0") {
  Rng r(9);
  const auto mu = sample(1024, 256, 0.5, r);
  const auto c = spectrum::fourier_coefficients(mu, 16);
  CHECK(c[0].real() == doctest::Approx(gmc::total_mass(mu)).epsilon(1e-12));
  CHECK(c[0].imag() == 0.0);
  for (double w : mu.weights) CHECK(w > 0.0);
}

TEST_CASE("mean-one normalization") {
  for (double g2 : {0.25, 1.0, 1.8}) {
    Rng r(100 + static_cast<int>(10 * g2));
    std::vector<double> mass, w0;
    for (int k = 0; k < 10000; ++k) {
      const auto mu = sample(256, 64, g2, r);
      mass.push_back(gmc::total_mass(mu));
      w0.push_back(mu.weights[0]);
    }
    const auto m = stats::mean_estimate(mass);
    const auto w = stats::mean_estimate(w0);
    CHECK(std::abs(m.value - 2 * pi) < 3 * m.std_error);
    CHECK(std::abs(w.value - 2 * pi / 256) < 4 * w.std_error);
  }
}

TEST_CASE("moment estimates") {
  const auto g = ChaosParameter::from_gamma_sq(0.5);
  std::vector<double> masses{1.0, 2.0, 3.5};
  const auto q0 = gmc::mass_moment_estimate(masses, 0.0, g);
  CHECK(q0.report.value == 1.0);
  CHECK(q0.report.std_error == 0.0);
  CHECK_FALSE(gmc::mass_moment_estimate(masses, 3.0, g).heavy_tail);
  CHECK(gmc::mass_moment_estimate(masses, 4.0, g).heavy_tail);

  Rng r(46);
  std::vector<double> draws;
  for (int k = 0; k < 4000; ++k) draws.push_back(gmc::total_mass(sample(4096, 1024, 0.5, r)));
  const auto q1 = gmc::mass_moment_estimate(draws, 1.0, g);
  CHECK(std::abs(q1.report.value - 2 * pi) < 3 * q1.report.std_error);
  // 2 pi int_0^{2 pi} (2 sin(x/2))^{-1/2} dx = 46.598 (quadrature oracle).
  const auto q2 = gmc::mass_moment_estimate(draws, 2.0, g);
  CHECK(std::abs(q2.report.value - 46.598) < 3 * q2.report.std_error);
}

TEST_CASE("rotational invariance in law") {
  // Mass on [0, pi) against mass on a rotated half-circle.
  Rng r(12);
  std::vector<double> a, b;
  for (int k = 0; k < 3000; ++k) {
    const auto mu = sample(256, 64, 0.5, r);
    double s = 0;
    for (std::size_t j = 0; j < 128; ++j) s += mu.weights[j];
    a.push_back(s);
    const auto nu = sample(256, 64, 0.5, r);
    double t = 0;
    for (std::size_t j = 0; j < 128; ++j) t += nu.weights[(j + 77) % 256];
    b.push_back(t);
  }
  CHECK(stats::ks_test(a, b).p_value > 0.01);
}
