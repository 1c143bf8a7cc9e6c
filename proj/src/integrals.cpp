#include "gmclab/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gmclab/errors.hpp"
#include "quadrature.hpp"

namespace gmclab::integrals {

using std::numbers::pi;

QuadratureResult kappa(ChaosParameter gamma, double tol) {
  const double a = gamma.gamma_sq();
  if (!(a < 1.0)) throw std::domain_error("kappa: requires gamma^2 < 1");
  if (a == 0.0) return {0.0, 0.0, 0, true};

  auto power = [a](double v) { return std::pow(v, -a); };
  auto head = quad::endpoint_singular(
      [a](double v) { return std::cos(2.0 * pi * v) * std::pow(v, -a); }, 0.0, 0.25, 1e-14);
  auto tail = quad::cosine_tail(power, 0.25, 80);

  QuadratureResult out;
  out.value = 2.0 * (head.value + tail.value);
  out.abs_error_estimate = 2.0 * (head.error + tail.error);
  out.evaluations = head.evaluations + tail.evaluations;
  out.converged = out.abs_error_estimate < tol;
  return out;
}

double kappa_closed_form(ChaosParameter gamma) {
  const double a = gamma.gamma_sq();
  if (!(a < 1.0)) throw std::domain_error("kappa_closed_form: requires gamma^2 < 1");
  return 2.0 * std::tgamma(1.0 - a) * std::sin(0.5 * pi * a) * std::pow(2.0 * pi, a - 1.0);
}

double circle_kappa(ChaosParameter gamma) {
  const auto k = kappa(gamma);
  if (!k.converged) throw NumericError("circle_kappa: kappa quadrature did not converge");
  return std::pow(2.0 * pi, 1.0 - gamma.gamma_sq()) * k.value;
}

QuadratureResult circle_second_moment(std::size_t n, ChaosParameter gamma) {
  const double a = gamma.gamma_sq();
  if (!(a < 1.0))
    throw std::domain_error("circle_second_moment: gamma^2 >= 1 gives a non-integrable singularity");
  const double freq = static_cast<double>(n);
  if (a == 0.0) {
    const double v = n == 0 ? 4.0 * pi * pi : 0.0;
    return {v, 0.0, 0, true};
  }
  auto f = [a, freq](double x) {
    return std::cos(freq * x) * std::pow(2.0 * std::sin(0.5 * x), -a);
  };
  std::vector<double> cuts{0.0};
  if (n > 0)
    for (std::size_t k = 0; (static_cast<double>(k) + 0.5) * pi / freq < pi; ++k)
      cuts.push_back((static_cast<double>(k) + 0.5) * pi / freq);
  cuts.push_back(pi);
  auto r = quad::piecewise(f, cuts, 1e-13);
  QuadratureResult out;
  // 2 pi * int_0^{2 pi} = 4 pi * int_0^pi by symmetry about pi.
  out.value = 4.0 * pi * r.value;
  out.abs_error_estimate = 4.0 * pi * r.error;
  out.evaluations = r.evaluations;
  out.converged = out.abs_error_estimate < 1e-8;
  return out;
}

TailConstant second_moment_tail_constant(ChaosParameter gamma) {
  const double a = gamma.gamma_sq();
  if (!(a < 0.5)) throw std::domain_error("second_moment_tail_constant: requires gamma^2 < 1/2");
  TailConstant out;
  for (std::size_t n = 64; n <= 1024; n *= 2) {
    const auto m = circle_second_moment(n, gamma);
    if (!m.converged) throw NumericError("second_moment_tail_constant: quadrature failed at n = " +
                                         std::to_string(n));
    out.frequencies.push_back(n);
    out.sequence.push_back(std::pow(static_cast<double>(n), 1.0 - a) * m.value);
  }
  const double last = out.sequence.back();
  const double prev = out.sequence[out.sequence.size() - 2];
  out.value = last;
  out.relative_change = last == 0.0 && prev == 0.0 ? 0.0 : std::abs(last / prev - 1.0);
  if (out.relative_change > 0.05)
    throw NumericError("second_moment_tail_constant: no stabilization, relative change " +
                       std::to_string(out.relative_change));
  return out;
}

namespace {

std::vector<double> sorted_cuts(std::vector<double> pts, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (double p : pts)
    if (p > lo && p < hi) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

double singular_integral(int d, double u, double cutoff, double half_width) {
  if (d < 2) throw std::invalid_argument("singular_integral: d must be at least 2");
  if (d > 4) throw std::invalid_argument("singular_integral: d > 4 refused (quadrature cost)");
  if (!(u >= 0.0)) throw std::domain_error("singular_integral: u must be >= 0");
  if (!(cutoff >= 0.0) || !(half_width > 0.0))
    throw std::domain_error("singular_integral: need cutoff >= 0 and A > 0");
  if (cutoff == 0.0 && d > 2)
    throw std::invalid_argument("singular_integral: an uncut evaluation is available for d = 2 only");
  const double critical = static_cast<double>(d - 1) / static_cast<double>(d);
  if (cutoff == 0.0 && u >= critical)
    throw NumericError("singular_integral: uncut integral diverges for u >= (d-1)/d");

  const double delta = cutoff;
  const double A = half_width;
  // Uncut (d = 2): tanh-sinh never samples the endpoint, but keep it finite.
  const double floor_at = delta > 0.0 ? delta : std::numeric_limits<double>::denorm_min();
  auto g = [u, floor_at](double y) { return std::pow(std::max(std::abs(y), floor_at), -u); };
  const double tol = d == 4 ? 1e-7 : 1e-11;

  // Innermost variable x_{d-1}: singular at 0 and at -s, where s is the sum
  // of the outer coordinates.
  auto innermost = [&](double s) {
    auto cuts = sorted_cuts({-delta, 0.0, delta, -s - delta, -s, -s + delta}, -A, A);
    return quad::piecewise([&](double x) { return g(x) * g(x + s); }, cuts, tol).value;
  };

  if (d == 2) {
    // Single variable: |x|^{-u} * |x|^{-u}; even in x.
    auto cuts = sorted_cuts({delta}, 0.0, A);
    return 2.0 * quad::piecewise([&](double x) { return g(x) * g(x); }, cuts, tol).value;
  }
  if (d == 3) {
    // Invariant under (x, y) -> (-x, -y): integrate x over [0, A] and double.
    auto cuts = sorted_cuts({delta}, 0.0, A);
    return 2.0 * quad::piecewise([&](double x) { return g(x) * innermost(x); }, cuts, tol).value;
  }
  auto middle = [&](double x1) {
    auto cuts = sorted_cuts({-delta, 0.0, delta, -x1 - delta, -x1, -x1 + delta}, -A, A);
    return quad::piecewise([&](double x2) { return g(x2) * innermost(x1 + x2); }, cuts, tol).value;
  };
  auto cuts = sorted_cuts({delta}, 0.0, A);
  return 2.0 * quad::piecewise([&](double x1) { return g(x1) * middle(x1); }, cuts, tol).value;
}

}  // namespace gmclab::integrals
