#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmclab/grid.hpp"
#include "gmclab/random.hpp"

namespace gmclab::stats {

/// A statistic with its standard error and a normal-approximation 95% interval.
struct EstimateReport {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_replicas = 0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;

  static EstimateReport make(double value, double std_error, std::size_t n);
  /// |value - target| <= k * std_error.
  bool within(double target, double k) const noexcept;
};

enum class TestMethod { Energy, Ks, Chi2Phase };
std::string to_string(TestMethod m);

struct TestReport {
  double statistic = 0.0;
  double p_value = 1.0;
  TestMethod method = TestMethod::Energy;
  std::size_t n_permutations = 0;  // 0 for analytic p-values
  std::size_t excluded = 0;        // zero-modulus points dropped by the phase test
};

/// Fixed-tree pairwise summation: the result depends only on the order of
/// the inputs, never on how the work producing them was scheduled.
double pairwise_sum(std::span<const double> xs);

EstimateReport mean_estimate(std::span<const double> xs);

/// Mean with leave-one-out jackknife standard error.
EstimateReport jackknife_mean(std::span<const double> xs);

struct SlopeFit {
  EstimateReport slope;
  double intercept = 0.0;
};

/// OLS slope of log(value) against log(n) with HC0 (White) standard error.
/// Needs >= 3 points with distinct n and positive values.
SlopeFit loglog_slope(std::span<const double> n, std::span<const double> value);

struct FourthMomentCurve {
  std::vector<double> frequencies;
  std::vector<EstimateReport> moments;  // E|c_n|^4 per frequency
  std::optional<SlopeFit> fit;          // absent when every estimate is 0
  bool insufficient = false;            // some SE exceeds 30% of its estimate
};

/// `moduli[i][r]` is |c_n| at frequencies[i] for replica r.
FourthMomentCurve fourth_moment_curve(std::span<const double> frequencies,
                                      const std::vector<std::vector<double>>& moduli,
                                      ChaosParameter gamma);

struct EnvelopeCheck {
  std::vector<std::size_t> block_starts;
  std::vector<std::vector<double>> block_maxima;  // [replica][block] of |c_n| n^beta
  std::vector<double> median_block_max;           // per block
  double fraction_non_increasing = 0.0;           // last block max <= previous block max
  bool medians_decreasing = false;                // strictly, over all blocks
};

/// max_{n in [b, 2b)} |c_n| n^beta for each block start b; moduli[n] = |c_n|.
std::vector<double> dyadic_block_maxima(std::span<const double> moduli, double beta,
                                        std::span<const std::size_t> block_starts);

/// Medians and fractions over per-replica block maxima ([replica][block]).
EnvelopeCheck summarize_envelope(std::vector<std::vector<double>> block_maxima,
                                 std::span<const std::size_t> block_starts);

double median(std::vector<double> xs);

/// Dyadic blocks [b, 2b) starting at each entry of `block_starts`;
/// `moduli[r][n]` holds |c_n| of replica r for n = 0..n_max.
EnvelopeCheck envelope_decay_check(const std::vector<std::vector<double>>& moduli, double beta,
                                   std::span<const std::size_t> block_starts);

/// Draws sqrt(constant/2) * W_m: independent real and imaginary parts, each
/// Normal(0, constant * m / 2), with E|W_m|^2 = 2m.
std::complex<double> limit_law_reference_sample(double mass, double variance_constant, Rng& rng);

/// Reference law of the rescaled coefficients for a fixed gamma < 1/sqrt(2).
class LimitLawReference {
 public:
  /// Uses kappa(gamma) as the variance constant.
  explicit LimitLawReference(ChaosParameter gamma);
  LimitLawReference(ChaosParameter gamma, double variance_constant);

  double variance_constant() const noexcept { return constant_; }
  std::complex<double> draw(double mass, Rng& rng) const {
    return limit_law_reference_sample(mass, constant_, rng);
  }

 private:
  double constant_;
};

/// Two-sample energy distance with a permutation p-value,
/// p = (1 + #{perm >= observed}) / (1 + permutations). Permutation k uses the
/// stream seed_for_replica(seed, k), so the result is deterministic.
TestReport energy_distance_test(std::span<const std::complex<double>> a,
                                std::span<const std::complex<double>> b,
                                std::size_t permutations, std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov with the asymptotic Kolmogorov p-value.
TestReport ks_test(std::span<const double> a, std::span<const double> b);

/// Chi-square test of uniformity of arg(z) over `bins` equal sectors.
TestReport phase_uniformity_test(std::span<const std::complex<double>> sample, std::size_t bins);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

}  // namespace gmclab::stats
