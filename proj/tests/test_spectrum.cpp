#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include "gmclab/fields.hpp"
#include "gmclab/gmc.hpp"
#include "gmclab/spectrum.hpp"
#include "gmclab/stats.hpp"

using namespace gmclab;
using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

gmc::GmcMeasure sample(std::size_t m, double gamma_sq, Rng& rng) {
  auto f = fields::sample_circle_field(m / 4, GridSpec::circle(m), rng);
  return gmc::build_measure(f, ChaosParameter::from_gamma_sq(gamma_sq));
}

gmc::GmcMeasure lebesgue(std::size_t m) {
  Rng r(0);
  return sample(m, 0.0, r);
}

}  // namespace

TEST_CASE("Lebesgue measure has a single mode") {
  const auto c = spectrum::fourier_coefficients(lebesgue(1024), 512);
  CHECK(std::abs(c[0] - cplx(2 * pi, 0)) < 1e-12);
  for (std::ptrdiff_t n = 1; n <= 512; ++n) {
    CHECK(std::abs(c[n]) < 1e-12);
    CHECK(std::abs(c[-n]) < 1e-12);
  }
}

TEST_CASE("density e^{cos} gives 2 pi I_n(1)") {
  const auto grid = GridSpec::circle(128);
  std::vector<double> w(128);
  for (std::size_t j = 0; j < 128; ++j) w[j] = std::exp(std::cos(grid.node(j))) * grid.spacing();
  const auto c = spectrum::fourier_coefficients(w, grid, 16);
  for (int n = 0; n <= 16; ++n) {
    const double oracle = 2 * pi * boost::math::cyl_bessel_i(n, 1.0);
    CHECK(std::abs(c[n].real() - oracle) < 1e-8);
    CHECK(std::abs(c[n].imag()) < 1e-8);
  }
}

TEST_CASE("conjugate symmetry and c_0") {
  Rng r(21);
  const auto mu = sample(2048, 0.5, r);
  const auto c = spectrum::fourier_coefficients(mu, 256);
  CHECK(c[-3] == std::conj(c[3]));
  for (std::ptrdiff_t n = 1; n <= 256; ++n) CHECK(c[-n] == std::conj(c[n]));
  CHECK(c[0].imag() == 0.0);
  CHECK(c[0].real() == doctest::Approx(gmc::total_mass(mu)).epsilon(1e-12));
  CHECK_THROWS_AS(spectrum::fourier_coefficients(mu, 1025), std::invalid_argument);
}

TEST_CASE("rescale_coefficient") {
  const auto g = ChaosParameter::from_gamma_sq(0.5);
  CHECK(std::abs(spectrum::rescale_coefficient({1, 0}, 4, g) - cplx(std::sqrt(2.0), 0)) < 1e-15);
  CHECK(spectrum::rescale_coefficient({0, 0}, 17, g) == cplx(0, 0));
  CHECK(spectrum::rescale_coefficient({0, 1}, 1, ChaosParameter::from_gamma_sq(0.3)) == cplx(0, 1));
  CHECK_THROWS(spectrum::rescale_coefficient({1, 0}, 0, g));
  CHECK_THROWS(spectrum::rescale_coefficient({1, 0}, 2, ChaosParameter::from_gamma_sq(1.0)));
}

TEST_CASE("convolution_power") {
  Rng r(4);
  const auto c = spectrum::fourier_coefficients(sample(512, 0.25, r), 64);
  const auto one = spectrum::convolution_power(c, 1);
  for (std::ptrdiff_t n = -64; n <= 64; ++n) CHECK(one[n] == c[n]);
  const auto three = spectrum::convolution_power(c, 3);
  for (std::ptrdiff_t n = -64; n <= 64; ++n) {
    CHECK(std::abs(three[n]) == doctest::Approx(std::pow(std::abs(c[n]), 3)).epsilon(1e-12));
    CHECK(three[-n] == std::conj(three[n]));
  }
  const auto flat = spectrum::convolution_power(spectrum::fourier_coefficients(lebesgue(256), 32), 2);
  CHECK(std::abs(flat[0] - cplx(4 * pi * pi, 0)) < 1e-10);
  for (std::ptrdiff_t n = 1; n <= 32; ++n) CHECK(std::abs(flat[n]) < 1e-12);
}

TEST_CASE("Fejer density") {
  SUBCASE("constant for Lebesgue powers") {
    const auto c = spectrum::convolution_power(spectrum::fourier_coefficients(lebesgue(512), 128), 2);
    for (std::size_t K : {1u, 17u, 128u})
      for (double v : spectrum::fejer_density(c, K)) CHECK(v == doctest::Approx(2 * pi).epsilon(1e-12));
  }
  SUBCASE("trigonometric polynomial") {
    const auto grid = GridSpec::circle(256);
    auto f = [](double th) { return 1.0 + 0.5 * std::cos(2 * th) + 0.3 * std::sin(3 * th); };
    std::vector<double> w(256);
    for (std::size_t j = 0; j < 256; ++j) w[j] = f(grid.node(j)) * grid.spacing();
    const auto c = spectrum::fourier_coefficients(w, grid, 64);
    for (std::size_t K : {3u, 10u, 64u}) {
      const auto d = spectrum::fejer_density(c, K);
      const double t2 = 1.0 - 2.0 / (K + 1), t3 = 1.0 - 3.0 / (K + 1);
      for (std::size_t j = 0; j < 256; ++j) {
        const double th = grid.node(j);
        CHECK(std::abs(d[j] - (1.0 + t2 * 0.5 * std::cos(2 * th) + t3 * 0.3 * std::sin(3 * th))) < 1e-10);
      }
    }
  }
  SUBCASE("nonnegative for a chaos measure") {
    Rng r(8);
    const auto c = spectrum::fourier_coefficients(sample(1024, 0.5, r), 256);
    const auto d = spectrum::fejer_density(c, 256);
    double hi = 0;
    for (double v : d) hi = std::max(hi, v);
    for (double v : d) CHECK(v >= -1e-10 * hi);
  }
}

TEST_CASE("capacity_sum") {
  const auto grid = GridSpec::circle(16);
  const auto g = ChaosParameter::from_gamma(0.0);
  spectrum::FourierSeries single({{0, 0}, {1, 0}}, grid, g, 1);
  CHECK(spectrum::capacity_sum(single, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(spectrum::capacity_sum(spectrum::fourier_coefficients(lebesgue(256), 64), 0.5) < 1e-20);
  CHECK_THROWS(spectrum::capacity_sum(single, 1.0));

  Rng r(512);
  const auto c = spectrum::fourier_coefficients(sample(8192, 0.25, r), 1024);
  const auto nn = c.nonnegative();
  const spectrum::FourierSeries half({nn.begin(), nn.begin() + 513}, c.grid(), c.gamma(), c.cutoff());
  const double full = spectrum::capacity_sum(c, 0.5), part = spectrum::capacity_sum(half, 0.5);
  CHECK(part <= full);
  CHECK(full / part < 1.10);
}

TEST_CASE("riesz_energy") {
  // 2 pi int_0^{2 pi} (2 sin(x/2))^{-1/2} dx by quadrature, 46.5979790...
  const double oracle = 46.59797908;
  CHECK(std::abs(spectrum::riesz_energy(lebesgue(4096), 0.5) / oracle - 1.0) < 0.01);
  Rng r(2);
  const auto mu = sample(4096, 0.25, r);
  const double mass = gmc::total_mass(mu);
  CHECK(std::abs(spectrum::riesz_energy(mu, 1e-4) / (mass * mass) - 1.0) < 0.01);
  CHECK_THROWS(spectrum::riesz_energy(mu, 0.0));

  // Two-sided equivalence with the capacity sum.
  double lo = 1e300, hi = 0;
  for (int k = 0; k < 8; ++k) {
    const auto m = sample(4096, 0.25, r);
    const double ratio = spectrum::riesz_energy(m, 0.5) /
                         spectrum::capacity_sum(spectrum::fourier_coefficients(m, 2048), 0.5);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo < 50.0);
}

TEST_CASE("s_star") {
  CHECK(spectrum::s_star(ChaosParameter::from_gamma_sq(0.25)) == doctest::Approx(0.75));
  CHECK(spectrum::s_star(ChaosParameter::from_gamma(1.0)) == doctest::Approx(std::pow(std::sqrt(2.0) - 1, 2)));
  // Both branches meet at gamma = 1/sqrt(2).
  CHECK(spectrum::s_star(ChaosParameter::from_gamma_sq(0.5)) == doctest::Approx(0.5));
}

TEST_CASE("phase of c_64 is uniform") {
  Rng r(64);
  std::vector<cplx> z;
  for (int k = 0; k < 2000; ++k) z.push_back(spectrum::fourier_coefficients(sample(1024, 0.25, r), 64)[64]);
  CHECK(stats::phase_uniformity_test(z, 16).p_value > 0.01);
}

TEST_CASE("series CSV") {
  const auto grid = GridSpec::circle(8);
  spectrum::FourierSeries s({{2, 0}, {1.0 / 3, -2.0 / 7}}, grid, ChaosParameter::from_gamma(0.0), 1);
  std::ostringstream os;
  spectrum::write_series_csv(os, s);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "n,re,im");
  std::getline(is, line);
  CHECK(line.rfind("-1,", 0) == 0);
  double re = 0, im = 0;
  char comma = 0;
  std::istringstream row(line.substr(3));
  row >> re >> comma >> im;
  CHECK(re == 1.0 / 3);
  CHECK(im == 2.0 / 7);
  int rows = 1;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);
}
