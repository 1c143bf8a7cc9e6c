#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gmclab/fields.hpp"

using namespace gmclab;
using std::numbers::pi;

TEST_CASE("circle_covariance examples") {
  CHECK(fields::circle_covariance(pi) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  CHECK(std::abs(fields::circle_covariance(pi / 3)) < 1e-15);
  // 2 sin(x/2) = x (1 - x^2/24 + ...), so the covariance is -ln x + x^2/24 + O(x^4).
  const double x = 0.01;
  CHECK(fields::circle_covariance(x) == doctest::Approx(-std::log(x) + x * x / 24).epsilon(1e-12));
  CHECK(std::abs(fields::circle_covariance(0.01) - 4.60517) < 1e-4);
  CHECK_THROWS_AS(fields::circle_covariance(0.0), std::domain_error);
  CHECK_THROWS_AS(fields::circle_covariance(2 * pi), std::domain_error);
}

TEST_CASE("truncated_circle_covariance examples") {
  CHECK(fields::truncated_circle_covariance(0.0, 1) == 1.0);
  CHECK(fields::truncated_circle_covariance(0.0, 4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
  CHECK(std::abs(fields::truncated_circle_covariance(pi, 10000) + std::log(2.0)) < 1e-4);
  CHECK(fields::harmonic_number(4) == doctest::Approx(25.0 / 12.0));
}

TEST_CASE("partial sums converge to the log kernel") {
  for (double gap : {pi / 7, 1.0, 3.0})
    CHECK(std::abs(fields::truncated_circle_covariance(gap, 100000) - fields::circle_covariance(gap)) < 1e-3);
}

TEST_CASE("sampler contract") {
  const auto grid = GridSpec::circle(64);
  Rng r1(11), r2(11);
  const auto a = fields::sample_circle_field(8, grid, r1);
  const auto b = fields::sample_circle_field(8, grid, r2);
  CHECK(a.values == b.values);
  CHECK(a.values.size() == 64);
  for (double v : a.variance) CHECK(v == doctest::Approx(fields::harmonic_number(8)));
  CHECK(a.cutoff == 8.0);
  Rng r(1);
  CHECK_THROWS_AS(fields::sample_circle_field(33, grid, r), std::invalid_argument);
  CHECK_THROWS_AS(fields::sample_circle_field(0, grid, r), std::invalid_argument);
  CHECK_THROWS_AS(fields::sample_circle_field(4, GridSpec::unit_interval(64), r), std::invalid_argument);
}

TEST_CASE("single mode: values are A_1 cos + B_1 sin in draw order") {
  const auto grid = GridSpec::circle(8);
  Rng r(77), copy(77);
  const auto f = fields::sample_circle_field(1, grid, r);
  const double a1 = copy.normal();
  const double b1 = copy.normal();
  for (std::size_t j = 0; j < 8; ++j) {
    const double th = grid.node(j);
    CHECK(f.values[j] == doctest::Approx(a1 * std::cos(th) + b1 * std::sin(th)).epsilon(1e-13));
  }
}

TEST_CASE("N = 1: unit variance at every node") {
  const auto grid = GridSpec::circle(16);
  Rng r(3);
  const int reps = 20000;
  std::vector<double> s2(16, 0.0);
  for (int k = 0; k < reps; ++k) {
    const auto f = fields::sample_circle_field(1, grid, r);
    for (std::size_t j = 0; j < 16; ++j) s2[j] += f.values[j] * f.values[j];
  }
  // Var of x^2 for N(0,1) is 2.
  for (double s : s2) CHECK(std::abs(s / reps - 1.0) < 4.0 * std::sqrt(2.0 / reps));
}

TEST_CASE("covariance, stationarity and Gaussianity") {
  const std::size_t m = 256, modes = 32;
  const auto grid = GridSpec::circle(m);
  Rng r(8);
  const int reps = 20000;
  const std::size_t lag = 40;
  const double target = fields::truncated_circle_covariance(grid.node(lag), modes);
  const double var = fields::harmonic_number(modes);
  double prod0 = 0, prod0_sq = 0, prod1 = 0, prod1_sq = 0, m3 = 0, m4 = 0;
  for (int k = 0; k < reps; ++k) {
    const auto f = fields::sample_circle_field(modes, grid, r);
    const double p0 = f.values[0] * f.values[lag];
    const double p1 = f.values[100] * f.values[100 + lag];
    prod0 += p0;
    prod0_sq += p0 * p0;
    prod1 += p1;
    prod1_sq += p1 * p1;
    const double z = f.values[17] / std::sqrt(var);
    m3 += z * z * z;
    m4 += z * z * z * z;
  }
  auto se = [&](double s, double sq) { return std::sqrt((sq / reps - (s / reps) * (s / reps)) / reps); };
  CHECK(std::abs(prod0 / reps - target) < 3 * se(prod0, prod0_sq));
  CHECK(std::abs(prod1 / reps - target) < 3 * se(prod1, prod1_sq));
  CHECK(std::abs(m3 / reps) < 4 * std::sqrt(15.0 / reps));
  CHECK(std::abs(m4 / reps - 3.0) < 4 * std::sqrt(96.0 / reps));
}
