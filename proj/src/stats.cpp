#include "gmclab/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "gmclab/integrals.hpp"

namespace gmclab::stats {

EstimateReport EstimateReport::make(double value, double std_error, std::size_t n) {
  return {value, std_error, n, value - 1.96 * std_error, value + 1.96 * std_error};
}

bool EstimateReport::within(double target, double k) const noexcept {
  return std::abs(value - target) <= k * std_error;
}

std::string to_string(TestMethod m) {
  switch (m) {
    case TestMethod::Energy: return "energy";
    case TestMethod::Ks: return "ks";
    case TestMethod::Chi2Phase: return "chi2_phase";
  }
  return "unknown";
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

EstimateReport mean_estimate(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean_estimate: empty sample");
  const double n = static_cast<double>(xs.size());
  const double mean = pairwise_sum(xs) / n;
  if (xs.size() == 1) return EstimateReport::make(mean, 0.0, 1);
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  return EstimateReport::make(mean, std::sqrt(var / n), xs.size());
}

EstimateReport jackknife_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("jackknife_mean: empty sample");
  const std::size_t n = xs.size();
  const double total = pairwise_sum(xs);
  const double mean = total / static_cast<double>(n);
  if (n == 1) return EstimateReport::make(mean, 0.0, 1);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double loo = (total - xs[i]) / static_cast<double>(n - 1);
    dev[i] = (loo - mean) * (loo - mean);
  }
  const double var = static_cast<double>(n - 1) / static_cast<double>(n) * pairwise_sum(dev);
  return EstimateReport::make(mean, std::sqrt(var), n);
}

SlopeFit loglog_slope(std::span<const double> n, std::span<const double> value) {
  if (n.size() != value.size()) throw std::invalid_argument("loglog_slope: size mismatch");
  if (n.size() < 3) throw std::invalid_argument("loglog_slope: need at least 3 points");
  const std::size_t k = n.size();
  std::vector<double> x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(value[i] > 0.0) || !(n[i] > 0.0))
      throw std::domain_error("loglog_slope: values and abscissae must be positive");
    x[i] = std::log(n[i]);
    y[i] = std::log(value[i]);
  }
  const double xm = pairwise_sum(x) / static_cast<double>(k);
  const double ym = pairwise_sum(y) / static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: abscissae must be distinct");
  const double slope = sxy / sxx;
  const double intercept = ym - slope * xm;
  double meat = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = y[i] - intercept - slope * x[i];
    meat += (x[i] - xm) * (x[i] - xm) * e * e;
  }
  return {EstimateReport::make(slope, std::sqrt(meat) / sxx, k), intercept};
}

FourthMomentCurve fourth_moment_curve(std::span<const double> frequencies,
                                      const std::vector<std::vector<double>>& moduli,
                                      ChaosParameter gamma) {
  if (!(gamma.gamma_sq() < 0.5))
    throw std::domain_error("fourth_moment_curve: the L4 bound needs gamma^2 < 1/2");
  if (frequencies.size() != moduli.size())
    throw std::invalid_argument("fourth_moment_curve: one sample per frequency required");
  FourthMomentCurve out;
  out.frequencies.assign(frequencies.begin(), frequencies.end());
  bool all_positive = true;
  for (const auto& sample : moduli) {
    std::vector<double> fourth(sample.size());
    std::transform(sample.begin(), sample.end(), fourth.begin(),
                   [](double r) { return (r * r) * (r * r); });
    auto est = mean_estimate(fourth);
    if (est.value > 0.0 && est.std_error > 0.3 * est.value) out.insufficient = true;
    if (!(est.value > 0.0)) all_positive = false;
    out.moments.push_back(est);
  }
  if (all_positive && frequencies.size() >= 3) {
    std::vector<double> values;
    for (const auto& m : out.moments) values.push_back(m.value);
    out.fit = loglog_slope(frequencies, values);
  }
  return out;
}

std::vector<double> dyadic_block_maxima(std::span<const double> moduli, double beta,
                                        std::span<const std::size_t> block_starts) {
  std::vector<double> maxima;
  for (std::size_t start : block_starts) {
    if (start == 0 || 2 * start > moduli.size())
      throw std::invalid_argument("envelope_decay_check: block exceeds the series");
    double best = 0.0;
    for (std::size_t n = start; n < 2 * start; ++n)
      best = std::max(best, moduli[n] * std::pow(static_cast<double>(n), beta));
    maxima.push_back(best);
  }
  return maxima;
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t r = xs.size();
  return r % 2 ? xs[r / 2] : 0.5 * (xs[r / 2 - 1] + xs[r / 2]);
}

EnvelopeCheck summarize_envelope(std::vector<std::vector<double>> block_maxima,
                                 std::span<const std::size_t> block_starts) {
  if (block_starts.empty()) throw std::invalid_argument("envelope_decay_check: no blocks");
  EnvelopeCheck out;
  out.block_starts.assign(block_starts.begin(), block_starts.end());
  out.block_maxima = std::move(block_maxima);
  const std::size_t blocks = block_starts.size();
  for (const auto& row : out.block_maxima)
    if (row.size() != blocks) throw std::invalid_argument("summarize_envelope: ragged block maxima");
  for (std::size_t b = 0; b < blocks; ++b) {
    std::vector<double> column;
    for (const auto& row : out.block_maxima) column.push_back(row[b]);
    out.median_block_max.push_back(median(std::move(column)));
  }
  if (blocks >= 2 && !out.block_maxima.empty()) {
    std::size_t ok = 0;
    for (const auto& row : out.block_maxima) ok += row[blocks - 1] <= row[blocks - 2] ? 1 : 0;
    out.fraction_non_increasing =
        static_cast<double>(ok) / static_cast<double>(out.block_maxima.size());
  }
  out.medians_decreasing = blocks >= 2;
  for (std::size_t b = 1; b < blocks; ++b)
    if (!(out.median_block_max[b] < out.median_block_max[b - 1])) out.medians_decreasing = false;
  return out;
}

EnvelopeCheck envelope_decay_check(const std::vector<std::vector<double>>& moduli, double beta,
                                   std::span<const std::size_t> block_starts) {
  std::vector<std::vector<double>> maxima;
  for (const auto& series : moduli) maxima.push_back(dyadic_block_maxima(series, beta, block_starts));
  return summarize_envelope(std::move(maxima), block_starts);
}

std::complex<double> limit_law_reference_sample(double mass, double variance_constant, Rng& rng) {
  if (!(mass >= 0.0)) throw std::domain_error("limit_law_reference_sample: negative mass");
  const double sd = std::sqrt(0.5 * variance_constant * mass);
  const double re = rng.normal();
  const double im = rng.normal();
  return {sd * re, sd * im};
}

namespace {
void require_limit_regime(ChaosParameter gamma) {
  if (!(gamma.gamma_sq() < 0.5))
    throw std::domain_error("limit law reference: gamma must be below 1/sqrt(2)");
}
}  // namespace

LimitLawReference::LimitLawReference(ChaosParameter gamma)
    : constant_(integrals::kappa(gamma).value) {
  require_limit_regime(gamma);
}

LimitLawReference::LimitLawReference(ChaosParameter gamma, double variance_constant)
    : constant_(variance_constant) {
  require_limit_regime(gamma);
}

TestReport energy_distance_test(std::span<const std::complex<double>> a,
                                std::span<const std::complex<double>> b,
                                std::size_t permutations, std::uint64_t seed) {
  if (a.empty() || b.empty()) throw std::invalid_argument("energy_distance_test: empty sample");
  const std::size_t na = a.size(), nb = b.size(), total = na + b.size();
  std::vector<std::complex<double>> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());

  // Full symmetric distance matrix in single precision; sums accumulate in double.
  std::vector<float> dist(total * total);
  std::vector<double> row_total(total, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      const float d = i == j ? 0.0f : static_cast<float>(std::abs(pooled[i] - pooled[j]));
      dist[i * total + j] = d;
    }
  }
  for (std::size_t i = 0; i < total; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < total; ++j) s += dist[i * total + j];
    row_total[i] = s;
  }
  const double grand = std::accumulate(row_total.begin(), row_total.end(), 0.0);

  const double dna = static_cast<double>(na), dnb = static_cast<double>(nb);
  auto statistic = [&](const std::vector<float>& in_a) {
    // Ordered-pair sums: aa = sum over a x a, bb = sum over b x b.
    double aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      const float* row = &dist[i * total];
      double to_a = 0.0;
      for (std::size_t j = 0; j < total; ++j) to_a += static_cast<double>(row[j] * in_a[j]);
      if (in_a[i] != 0.0f)
        aa += to_a;
      else
        bb += row_total[i] - to_a;
    }
    const double ab = 0.5 * (grand - aa - bb);
    const double e = 2.0 * ab / (dna * dnb) - aa / (dna * dna) - bb / (dnb * dnb);
    return dna * dnb / (dna + dnb) * e;
  };

  std::vector<float> labels(total, 0.0f);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(na), 1.0f);
  const double observed = statistic(labels);

  std::size_t at_least = 0;
  for (std::size_t k = 0; k < permutations; ++k) {
    Rng rng(seed_for_replica(seed, k));
    std::vector<float> perm = labels;
    for (std::size_t i = total - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    if (statistic(perm) >= observed) ++at_least;
  }
  TestReport out;
  out.statistic = observed;
  out.method = TestMethod::Energy;
  out.n_permutations = permutations;
  out.p_value = static_cast<double>(1 + at_least) / static_cast<double>(1 + permutations);
  return out;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // series converges poorly; Q is 1 to double precision
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestReport ks_test(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_test: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  const double ne = std::sqrt(nx * ny / (nx + ny));
  TestReport out;
  out.statistic = d;
  out.method = TestMethod::Ks;
  out.p_value = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
  return out;
}

TestReport phase_uniformity_test(std::span<const std::complex<double>> sample, std::size_t bins) {
  if (bins < 4) throw std::invalid_argument("phase_uniformity_test: need at least 4 bins");
  std::vector<double> counts(bins, 0.0);
  std::size_t used = 0, excluded = 0;
  for (const auto& z : sample) {
    if (z == std::complex<double>(0.0, 0.0)) {
      ++excluded;
      continue;
    }
    const double u = (std::arg(z) + std::numbers::pi) / (2.0 * std::numbers::pi);
    auto bin = static_cast<std::size_t>(u * static_cast<double>(bins));
    counts[std::min(bin, bins - 1)] += 1.0;
    ++used;
  }
  if (used == 0) throw std::invalid_argument("phase_uniformity_test: no nonzero values");
  const double expected = static_cast<double>(used) / static_cast<double>(bins);
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(bins - 1));
  TestReport out;
  out.statistic = chi2;
  out.method = TestMethod::Chi2Phase;
  out.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  out.excluded = excluded;
  return out;
}

}  // namespace gmclab::stats
