#include "gmclab/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gmclab/errors.hpp"
#include "gmclab/fft.hpp"
#include "quadrature.hpp"

namespace gmclab::toy {

using std::numbers::pi;

double bm_covariance(double t, double r) {
  if (!(t > 1.0)) throw std::invalid_argument("bm_covariance: t must exceed 1");
  if (!(r >= 0.0)) throw std::invalid_argument("bm_covariance: r must be >= 0");
  if (r <= 1.0 / t) return std::log(t) + 1.0 - t * r;
  if (r <= 1.0) return -std::log(r);
  return 0.0;
}

double increment_covariance(double t, double T, double r) {
  if (!(t > 1.0)) throw std::invalid_argument("increment_covariance: t must exceed 1");
  if (!(t < T)) throw std::invalid_argument("increment_covariance: need t < T");
  if (r >= 1.0 / t) return 0.0;
  return bm_covariance(T, r) - bm_covariance(t, r);
}

StationaryGaussianSampler::StationaryGaussianSampler(const std::function<double(double)>& kernel,
                                                     const GridSpec& grid)
    : grid_(grid), variance_(kernel(0.0)) {
  if (grid.domain() != Domain::UnitInterval)
    throw std::invalid_argument("StationaryGaussianSampler: grid must be on the unit interval");
  const std::size_t m = grid.points();
  const std::size_t p = 2 * m;
  const double h = grid.spacing();
  std::vector<double> row(p);
  for (std::size_t k = 0; k < p; ++k) row[k] = kernel(static_cast<double>(std::min(k, p - k)) * h);

  std::vector<std::complex<double>> half(p / 2 + 1);
  RealFft fft(p);
  fft.forward(row, half);
  std::vector<double> lambda(p);
  for (std::size_t k = 0; k <= p / 2; ++k) lambda[k] = half[k].real();
  for (std::size_t k = p / 2 + 1; k < p; ++k) lambda[k] = lambda[p - k];

  const double top = *std::max_element(lambda.begin(), lambda.end());
  double negative = 0.0;
  bool fatal = false;
  for (double l : lambda)
    if (l < 0.0) {
      negative += -l;
      if (l < -1e-8 * top) fatal = true;
    }
  if (fatal)
    throw EmbeddingError("circulant embedding has negative eigenvalues, mass " + std::to_string(negative),
                         negative);
  clipped_mass_ = negative;
  amplitude_.resize(p);
  for (std::size_t k = 0; k < p; ++k)
    amplitude_[k] = std::sqrt(std::max(lambda[k], 0.0) / static_cast<double>(p));
}

std::vector<double> StationaryGaussianSampler::sample(Rng& rng) const {
  const std::size_t p = amplitude_.size();
  std::vector<std::complex<double>> z(p);
  for (std::size_t k = 0; k < p; ++k) {
    const double xi = rng.normal();
    const double eta = rng.normal();
    z[k] = {amplitude_[k] * xi, amplitude_[k] * eta};
  }
  std::vector<std::complex<double>> y(p);
  thread_complex_fft(p, -1).execute(z, y);
  std::vector<double> out(grid_.points());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = y[j].real();
  return out;
}

namespace {

void require_interval(const GridSpec& grid, const char* who) {
  if (grid.domain() != Domain::UnitInterval)
    throw std::invalid_argument(std::string(who) + ": grid must be on the unit interval");
}

FieldSample make_sample(const StationaryGaussianSampler& s, double cutoff, Rng& rng) {
  FieldSample f{s.grid(), s.sample(rng), {}, cutoff};
  f.variance.assign(f.values.size(), s.variance());
  return f;
}

}  // namespace

FieldSample sample_bm_field(double t, const GridSpec& grid, Rng& rng) {
  require_interval(grid, "sample_bm_field");
  if (!(t > 1.0)) throw std::invalid_argument("sample_bm_field: t must exceed 1");
  StationaryGaussianSampler s([t](double r) { return bm_covariance(t, r); }, grid);
  return make_sample(s, t, rng);
}

FieldSample BmFieldPair::fine() const {
  FieldSample f{grid, coarse.values, coarse.variance, T};
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    f.values[j] += increment.values[j];
    f.variance[j] += increment.variance[j];
  }
  return f;
}

BmPairSampler::BmPairSampler(double t, double T, const GridSpec& grid)
    : t_(t),
      T_(T),
      coarse_([t](double r) { return bm_covariance(t, r); }, grid),
      increment_([t, T](double r) { return increment_covariance(t, T, r); }, grid) {}

FieldSample BmPairSampler::sample_coarse(Rng& rng) const { return make_sample(coarse_, t_, rng); }

FieldSample BmPairSampler::sample_increment(Rng& rng) const {
  return make_sample(increment_, T_, rng);
}

BmFieldPair BmPairSampler::sample(std::uint64_t seed) const {
  Rng coarse_rng(derive_stream(seed, 1));
  Rng increment_rng(derive_stream(seed, 2));
  return {coarse_.grid(), sample_coarse(coarse_rng), sample_increment(increment_rng), t_, T_};
}

namespace {

std::vector<double> chaos_weights(const FieldSample& f, double gamma) {
  const double g2 = gamma * gamma;
  const double h = f.grid.spacing();
  std::vector<double> w(f.values.size());
  for (std::size_t j = 0; j < w.size(); ++j)
    w[j] = std::exp(gamma * f.values[j] - 0.5 * g2 * f.variance[j]) * h;
  return w;
}

/// e^{2 pi i (n j mod M) / M} for j = 0..M-1.
std::vector<std::complex<double>> phases(long n, std::size_t m) {
  const auto mm = static_cast<long long>(m);
  long long step = static_cast<long long>(n) % mm;
  if (step < 0) step += mm;
  std::vector<std::complex<double>> out(m);
  long long k = 0;
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = std::polar(1.0, 2.0 * pi * static_cast<double>(k) / static_cast<double>(m));
    k = (k + step) % mm;
  }
  return out;
}

std::complex<double> weighted_coefficient(const FieldSample& f, ChaosParameter gamma, long n,
                                          const char* who) {
  require_interval(f.grid, who);
  const std::size_t m = f.grid.points();
  if (static_cast<std::size_t>(std::labs(n)) > m / 2)
    throw std::invalid_argument(std::string(who) + ": |n| exceeds points/2 (Nyquist)");
  if (!(gamma.gamma_sq() < 1.0)) throw std::domain_error(std::string(who) + ": requires gamma^2 < 1");
  const auto w = chaos_weights(f, gamma.gamma());
  // Negative frequencies are exact conjugates of the positive ones.
  const auto e = phases(std::labs(n), m);
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    re += w[j] * e[j].real();
    im += w[j] * e[j].imag();
  }
  if (n == 0) im = 0.0;
  return {re, n < 0 ? -im : im};
}

/// int_lo^hi cos(2 pi u) g(u) du, split at the zeros of the cosine and any
/// extra breakpoints. The first piece uses tanh-sinh when g is singular at lo.
double cosine_integral(const std::function<double(double)>& g, double lo, double hi,
                       bool singular_at_lo, std::vector<double> extra, double* error) {
  std::vector<double> cuts{lo, hi};
  for (double z = std::ceil((lo - 0.25) * 2.0) / 2.0 + 0.25; z < hi; z += 0.5)
    if (z > lo) cuts.push_back(z);
  for (double x : extra)
    if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto f = [&g](double u) { return std::cos(2.0 * pi * u) * g(u); };
  double sum = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto part = i == 0 && singular_at_lo ? quad::endpoint_singular(f, cuts[0], cuts[1], 1e-14)
                                         : quad::smooth(f, cuts[i], cuts[i + 1]);
    sum += part.value;
    err += part.error;
  }
  if (error) *error += err;
  return sum;
}

/// int_0^A cos(2 pi u) e^{-c u} du.
double damped_cosine(double c, double A) {
  const double b = 2.0 * pi;
  return (std::exp(-c * A) * (-c * std::cos(b * A) + b * std::sin(b * A)) + c) / (b * b + c * c);
}

void check_A(double A, const char* who) {
  if (!(A > 0.0) || !std::isfinite(A)) throw std::domain_error(std::string(who) + ": A must be positive");
}

}  // namespace

std::complex<double> toy_Z_n(const FieldSample& fine, ChaosParameter gamma, long n) {
  return weighted_coefficient(fine, gamma, n, "toy_Z_n");
}

std::complex<double> conditional_projection(const FieldSample& coarse, ChaosParameter gamma, long n) {
  if (!(coarse.cutoff > 1.0))
    throw std::invalid_argument("conditional_projection: coarse scale must exceed 1");
  return weighted_coefficient(coarse, gamma, n, "conditional_projection");
}

double sigma_A_limit(ChaosParameter gamma, double A) {
  check_A(A, "sigma_A_limit");
  const double a = gamma.gamma_sq();
  if (!(a < 1.0)) throw std::domain_error("sigma_A_limit: requires gamma^2 < 1");
  if (a == 0.0) return 0.0;
  double err = 0.0;
  const double power = cosine_integral([a](double u) { return std::pow(u, -a); }, 0.0, A, true, {}, &err);
  const double damped = std::exp(a) * std::pow(A, -a) * damped_cosine(a / A, A);
  if (err > 1e-8) throw NumericError("sigma_A_limit: quadrature error " + std::to_string(err));
  return 2.0 * (power - damped);
}

double sigma_A_imaginary_residue(ChaosParameter gamma, double A) {
  check_A(A, "sigma_A_imaginary_residue");
  const double a = gamma.gamma_sq();
  auto f = [a, A](double u) {
    const double v = std::abs(u);
    const double g = a == 0.0 ? 0.0 : std::pow(v, -a) - std::exp(a) * std::pow(A, -a) * std::exp(-a * v / A);
    return std::sin(2.0 * pi * u) * g;
  };
  std::vector<double> cuts{-A};
  for (double z = -std::floor(2.0 * A) / 2.0; z < A; z += 0.5)
    if (z > -A) cuts.push_back(z);
  cuts.push_back(A);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return quad::piecewise(f, cuts, 1e-14).value;
}

double projection_second_moment(ChaosParameter gamma, double A) {
  check_A(A, "projection_second_moment");
  const double a = gamma.gamma_sq();
  if (!(a < 1.0)) throw std::domain_error("projection_second_moment: requires gamma^2 < 1");
  const double head = 2.0 * std::exp(a) * std::pow(A, -a) * damped_cosine(a / A, A);
  if (a == 0.0) return 0.0;  // head sin(2 pi A)/pi cancels the Abel tail -sin(2 pi A)/pi
  auto tail = quad::cosine_tail([a](double u) { return std::pow(u, -a); }, A, 80);
  if (tail.error > 1e-8)
    throw NumericError("projection_second_moment: tail not converged, error " +
                       std::to_string(tail.error));
  return head + 2.0 * tail.value;
}

double projection_second_moment_at(ChaosParameter gamma, double A, long n) {
  check_A(A, "projection_second_moment_at");
  const double a = gamma.gamma_sq();
  if (!(a < 1.0)) throw std::domain_error("projection_second_moment_at: requires gamma^2 < 1");
  const double nn = static_cast<double>(n);
  if (!(nn / A > 1.0)) throw std::invalid_argument("projection_second_moment_at: need n/A > 1");
  auto g = [a, A, nn](double u) {
    const double taper = 1.0 - u / nn;
    if (u <= A) return taper * std::pow(A, -a) * std::exp(a * (1.0 - u / A));
    return taper * std::pow(u, -a);
  };
  return 2.0 * cosine_integral(g, 0.0, nn, false, {A}, nullptr);
}

double discrete_second_moment(const std::function<double(double)>& cov, ChaosParameter gamma, long n,
                              const GridSpec& grid) {
  require_interval(grid, "discrete_second_moment");
  const std::size_t m = grid.points();
  const double h = grid.spacing();
  const double a = gamma.gamma_sq();
  const auto e = phases(n, m);
  double sum = static_cast<double>(m) * std::exp(a * cov(0.0));
  for (std::size_t d = 1; d < m; ++d)
    sum += 2.0 * static_cast<double>(m - d) * std::exp(a * cov(static_cast<double>(d) * h)) * e[d].real();
  return h * h * sum;
}

VarianceSplit conditional_variance_split(const BmFieldPair& pair, const BmPairSampler& sampler,
                                         ChaosParameter gamma, long n, std::size_t inner, Rng& rng) {
  if (inner < 1) throw std::invalid_argument("conditional_variance_split: inner must be >= 1");
  VarianceSplit out;
  if (gamma.gamma() == 0.0) return out;
  const std::size_t m = pair.grid.points();
  const auto a = chaos_weights(pair.coarse, gamma.gamma());
  const auto e = phases(n, m);
  const double g = gamma.gamma();
  for (std::size_t r = 0; r < inner; ++r) {
    const auto inc = sampler.sample_increment(rng);
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = a[j] * std::expm1(g * inc.values[j] - 0.5 * g * g * inc.variance[j]);
      re += d * e[j].real();
      im += d * e[j].imag();
    }
    out.re += re * re;
    out.im += im * im;
    out.cross += re * im;
  }
  const double scale = std::pow(static_cast<double>(n), 1.0 - gamma.gamma_sq()) / static_cast<double>(inner);
  out.re *= scale;
  out.im *= scale;
  out.cross *= scale;
  return out;
}

VarianceSplit conditional_variance_exact(const BmFieldPair& pair, ChaosParameter gamma, long n) {
  VarianceSplit out;
  if (gamma.gamma() == 0.0) return out;
  const std::size_t m = pair.grid.points();
  const double h = pair.grid.spacing();
  const double a2 = gamma.gamma_sq();
  const auto a = chaos_weights(pair.coarse, gamma.gamma());
  const auto e = phases(n, m);
  // Lags with nonzero increment covariance: d h < 1/t.
  const auto support = static_cast<std::size_t>(std::ceil(1.0 / (pair.t * h)));
  std::vector<double> g(std::min(support, m));
  for (std::size_t d = 0; d < g.size(); ++d)
    g[d] = std::expm1(a2 * increment_covariance(pair.t, pair.T, static_cast<double>(d) * h));
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t lo = j + 1 > g.size() ? j + 1 - g.size() : 0;
    const std::size_t hi = std::min(m - 1, j + g.size() - 1);
    double re = 0.0, im = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
      const double w = a[k] * g[k > j ? k - j : j - k];
      re += w * e[k].real();
      im += w * e[k].imag();
    }
    out.re += a[j] * e[j].real() * re;
    out.im += a[j] * e[j].imag() * im;
    out.cross += a[j] * e[j].real() * im;
  }
  const double scale = std::pow(static_cast<double>(n), 1.0 - a2);
  out.re *= scale;
  out.im *= scale;
  out.cross *= scale;
  return out;
}

}  // namespace gmclab::toy
