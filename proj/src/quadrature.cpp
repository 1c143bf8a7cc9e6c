#include "quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

namespace gmclab::quad {

Integral endpoint_singular(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return {};
  // Nested integrals reenter this function; the integrator extends its
  // abscissa tables lazily, so each nesting depth gets its own instance.
  using Integrator = boost::math::quadrature::tanh_sinh<double>;
  thread_local std::vector<std::unique_ptr<Integrator>> pool;
  thread_local std::size_t depth = 0;
  if (pool.size() <= depth) pool.push_back(std::make_unique<Integrator>(15));
  Integrator& integrator = *pool[depth];
  struct DepthGuard {
    std::size_t& d;
    explicit DepthGuard(std::size_t& x) : d(x) { ++d; }
    ~DepthGuard() { --d; }
  } guard(depth);
  std::size_t calls = 0;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  auto counted = [&](double x) {
    ++calls;
    return f(x);
  };
  const double value = integrator.integrate(counted, a, b, tol, &error, &l1, &levels);
  return {value, error, calls};
}

Integral smooth(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return {};
  std::size_t calls = 0;
  auto counted = [&](double x) {
    ++calls;
    return f(x);
  };
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(counted, a, b, 15, tol, &error);
  return {value, error, calls};
}

Integral piecewise(const std::function<double(double)>& f, std::span<const double> breakpoints,
                   double tol) {
  Integral out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    auto part = endpoint_singular(f, breakpoints[i], breakpoints[i + 1], tol);
    out.value += part.value;
    out.error += part.error;
    out.evaluations += part.evaluations;
  }
  return out;
}

SeriesLimit wynn_epsilon(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n == 0) return {};
  if (n < 3) return {s.back(), n == 2 ? std::abs(s[1] - s[0]) : 0.0};
  // prev = column k-1, cur = column k; even columns carry the estimates.
  std::vector<double> prev(n + 1, 0.0);
  std::vector<double> cur(s.begin(), s.end());
  std::vector<double> estimates{s.back()};
  for (std::size_t k = 1; cur.size() > 1; ++k) {
    std::vector<double> next(cur.size() - 1);
    bool broken = false;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double diff = cur[i + 1] - cur[i];
      if (diff == 0.0) {
        broken = true;
        break;
      }
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    if (broken) {
      // Exact convergence in this column.
      if (k % 2 == 1) estimates.push_back(cur.back());
      break;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) estimates.push_back(cur.back());
  }
  const std::size_t m = estimates.size();
  if (m == 1) return {estimates[0], std::abs(s[n - 1] - s[n - 2])};
  return {estimates[m - 1], std::abs(estimates[m - 1] - estimates[m - 2])};
}

OscillatoryTail cosine_tail(const std::function<double(double)>& g, double start,
                            std::size_t half_periods) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  auto integrand = [&](double u) { return std::cos(two_pi * u) * g(u); };
  // Zeros of cos(2 pi u) sit at 1/4 + k/2.
  double zero = std::ceil((start - 0.25) * 2.0) / 2.0 + 0.25;
  if (zero < start) zero += 0.5;
  OscillatoryTail out;
  std::vector<double> partial;
  double sum = 0.0;
  if (zero > start) {
    auto lead = smooth(integrand, start, zero);
    sum += lead.value;
    out.evaluations += lead.evaluations;
  }
  partial.push_back(sum);
  for (std::size_t k = 0; k < half_periods; ++k) {
    const double a = zero + 0.5 * static_cast<double>(k);
    auto piece = smooth(integrand, a, a + 0.5);
    sum += piece.value;
    out.evaluations += piece.evaluations;
    partial.push_back(sum);
  }
  auto limit = wynn_epsilon(partial);
  out.value = limit.value;
  out.error = limit.error;
  return out;
}

}  // namespace gmclab::quad
