#include "gmclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>

#include "gmclab/errors.hpp"
#include "gmclab/fields.hpp"
#include "gmclab/gmc.hpp"
#include "gmclab/integrals.hpp"
#include "gmclab/spectrum.hpp"
#include "gmclab/stats.hpp"
#include "gmclab/toy_model.hpp"

namespace gmclab::harness {

using nlohmann::json;

namespace {

json est_json(const stats::EstimateReport& e) {
  return {{"value", e.value},
          {"std_error", e.std_error},
          {"n_replicas", e.n_replicas},
          {"ci95", json::array({e.ci95_low, e.ci95_high})}};
}

json test_json(const stats::TestReport& t) {
  json j{{"statistic", t.statistic},
         {"p_value", t.p_value},
         {"method", stats::to_string(t.method)},
         {"n_permutations", t.n_permutations}};
  if (t.method == stats::TestMethod::Chi2Phase) j["excluded"] = t.excluded;
  return j;
}

/// Standard errors between an estimate and a deterministic target.
double z_score(const stats::EstimateReport& e, double target) {
  if (e.std_error == 0.0) return e.value == target ? 0.0 : std::numeric_limits<double>::infinity();
  return (e.value - target) / e.std_error;
}

std::vector<double> column(const std::vector<ResultRecord>& records, const std::string& key) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    auto it = r.payload.reals.find(key);
    if (it == r.payload.reals.end())
      throw NumericError("replica " + std::to_string(r.replica_index) + " lacks '" + key + "'");
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::complex<double>> complex_column(const std::vector<ResultRecord>& records,
                                                 const std::string& key) {
  std::vector<std::complex<double>> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    auto it = r.payload.complexes.find(key);
    if (it == r.payload.complexes.end())
      throw NumericError("replica " + std::to_string(r.replica_index) + " lacks '" + key + "'");
    out.push_back(it->second);
  }
  return out;
}

std::vector<double> real_parts(const std::vector<std::complex<double>>& z) {
  std::vector<double> out;
  for (auto v : z) out.push_back(v.real());
  return out;
}
std::vector<double> imag_parts(const std::vector<std::complex<double>>& z) {
  std::vector<double> out;
  for (auto v : z) out.push_back(v.imag());
  return out;
}
std::vector<double> moduli(const std::vector<std::complex<double>>& z) {
  std::vector<double> out;
  for (auto v : z) out.push_back(std::abs(v));
  return out;
}

std::string indexed(const std::string& name, std::size_t n) { return name + "[" + std::to_string(n) + "]"; }

/// Measure and coefficients of one circle replica, field drawn from Rng(seed).
struct CircleSample {
  gmc::GmcMeasure measure;
  spectrum::FourierSeries series;
};

CircleSample circle_sample(const RunConfig& cfg, ChaosParameter gamma, std::uint64_t seed) {
  Rng rng(seed);
  auto field = fields::sample_circle_field(cfg.modes(), GridSpec::circle(cfg.grid_m), rng);
  auto measure = gmc::build_measure(field, gamma);
  auto series = spectrum::fourier_coefficients(measure, cfg.n_max);
  return {std::move(measure), std::move(series)};
}

std::vector<std::size_t> dyadic(std::size_t from, std::size_t to) {
  std::vector<std::size_t> out;
  for (std::size_t n = from; n <= to; n *= 2) out.push_back(n);
  return out;
}

// ---------------------------------------------------------------- decay

class DecayPlan final : public ExperimentPlan {
 public:
  explicit DecayPlan(const RunConfig& c)
      : cfg_(c), gamma_(ChaosParameter::from_gamma_sq(c.gamma_sq)), beta_(c.extra("beta", 0.1)) {
    for (std::size_t s = static_cast<std::size_t>(c.extra("block_min", 128)); 2 * s - 1 <= c.n_max; s *= 2)
      starts_.push_back(s);
  }

  Payload replica(std::size_t, std::uint64_t seed) const override {
    auto sample = circle_sample(cfg_, gamma_, seed);
    std::vector<double> mod(cfg_.n_max + 1);
    for (std::size_t n = 0; n <= cfg_.n_max; ++n) mod[n] = std::abs(sample.series[static_cast<std::ptrdiff_t>(n)]);
    const auto plain = stats::dyadic_block_maxima(mod, 0.0, starts_);
    const auto weighted = stats::dyadic_block_maxima(mod, beta_, starts_);
    Payload p;
    p.reals["mass"] = gmc::total_mass(sample.measure);
    for (std::size_t b = 0; b < starts_.size(); ++b) {
      p.reals[indexed("block_max", starts_[b])] = plain[b];
      p.reals[indexed("block_max_beta", starts_[b])] = weighted[b];
    }
    return p;
  }

  json aggregate(const std::vector<ResultRecord>& records) const override {
    std::vector<std::vector<double>> plain(records.size()), weighted(records.size());
    for (std::size_t b = 0; b < starts_.size(); ++b) {
      const auto a = column(records, indexed("block_max", starts_[b]));
      const auto w = column(records, indexed("block_max_beta", starts_[b]));
      for (std::size_t r = 0; r < records.size(); ++r) {
        plain[r].push_back(a[r]);
        weighted[r].push_back(w[r]);
      }
    }
    const auto e0 = stats::summarize_envelope(std::move(plain), starts_);
    const auto eb = stats::summarize_envelope(std::move(weighted), starts_);
    json j;
    j["estimates"]["mass"] = est_json(stats::mean_estimate(column(records, "mass")));
    j["checks"] = {{"block_starts", starts_},
                   {"beta", beta_},
                   {"median_block_max", e0.median_block_max},
                   {"median_block_max_beta", eb.median_block_max},
                   {"medians_decreasing", e0.medians_decreasing},
                   {"medians_decreasing_beta", eb.medians_decreasing},
                   {"fraction_non_increasing_last_blocks", e0.fraction_non_increasing},
                   {"fraction_non_increasing_last_blocks_beta", eb.fraction_non_increasing}};
    return j;
  }

 private:
  RunConfig cfg_;
  ChaosParameter gamma_;
  double beta_;
  std::vector<std::size_t> starts_;
};

// -------------------------------------------------------- fourth_moment

class FourthMomentPlan final : public ExperimentPlan {
 public:
  explicit FourthMomentPlan(const RunConfig& c)
      : cfg_(c),
        gamma_(ChaosParameter::from_gamma_sq(c.gamma_sq)),
        freqs_(dyadic(static_cast<std::size_t>(c.extra("n_min", 16)), c.n_max)) {}

  Payload replica(std::size_t, std::uint64_t seed) const override {
    auto sample = circle_sample(cfg_, gamma_, seed);
    Payload p;
    for (auto n : freqs_) p.complexes[indexed("c", n)] = sample.series[static_cast<std::ptrdiff_t>(n)];
    return p;
  }

  json aggregate(const std::vector<ResultRecord>& records) const override {
    std::vector<std::vector<double>> mods;
    std::vector<double> fr;
    json j;
    for (auto n : freqs_) {
      mods.push_back(moduli(complex_column(records, indexed("c", n))));
      fr.push_back(static_cast<double>(n));
      std::vector<double> sq;
      for (double m : mods.back()) sq.push_back(m * m);
      const auto second = stats::mean_estimate(sq);
      const auto oracle = integrals::circle_second_moment(n, gamma_);
      j["estimates"][indexed("E|c_n|^2", n)] = est_json(second);
      j["checks"]["second_moment_z"][std::to_string(n)] = z_score(second, oracle.value);
      j["checks"]["second_moment_oracle"][std::to_string(n)] = oracle.value;
    }
    const auto curve = stats::fourth_moment_curve(fr, mods, gamma_);
    for (std::size_t i = 0; i < freqs_.size(); ++i)
      j["estimates"][indexed("E|c_n|^4", freqs_[i])] = est_json(curve.moments[i]);
    const double bound = -2.0 * (1.0 - cfg_.gamma_sq) + 0.15;
    j["checks"]["insufficient_replicas"] = curve.insufficient;
    j["checks"]["slope_bound"] = bound;
    if (curve.fit) {
      j["estimates"]["loglog_slope"] = est_json(curve.fit->slope);
      j["checks"]["slope_within_bound"] = curve.fit->slope.value <= bound;
    }
    json ratios = json::array();
    for (std::size_t i = 0; i + 1 < curve.moments.size(); ++i)
      ratios.push_back(curve.moments[i + 1].value > 0 ? curve.moments[i].value / curve.moments[i + 1].value
                                                      : std::numeric_limits<double>::infinity());
    j["checks"]["dyadic_ratios"] = ratios;
    j["checks"]["dyadic_ratio_target"] = std::pow(2.0, 2.0 * (1.0 - cfg_.gamma_sq));
    return j;
  }

 private:
  RunConfig cfg_;
  ChaosParameter gamma_;
  std::vector<std::size_t> freqs_;
};

// ------------------------------------------------------------ limit_law

class LimitLawPlan final : public ExperimentPlan {
 public:
  explicit LimitLawPlan(const RunConfig& c)
      : cfg_(c),
        gamma_(ChaosParameter::from_gamma_sq(c.gamma_sq)),
        n_(static_cast<std::size_t>(c.extra("n", 512))),
        reference_(gamma_),
        circle_constant_(integrals::circle_kappa(gamma_)) {}

  Payload replica(std::size_t, std::uint64_t seed) const override {
    auto sample = circle_sample(cfg_, gamma_, seed);
    const auto c = sample.series[static_cast<std::ptrdiff_t>(n_)];
    Rng mass_rng(derive_stream(seed, 1));
    auto field = fields::sample_circle_field(cfg_.modes(), GridSpec::circle(cfg_.grid_m), mass_rng);
    const double mass = gmc::total_mass(gmc::build_measure(field, gamma_.doubled()));
    Rng draw_rng(derive_stream(seed, 2));
    const auto ref = reference_.draw(mass, draw_rng);
    Payload p;
    p.complexes["rescaled"] = spectrum::rescale_coefficient(c, n_, gamma_);
    p.complexes["reference"] = ref;
    p.complexes["reference_circle"] = ref * std::sqrt(circle_constant_ / reference_.variance_constant());
    p.reals["mass_2gamma"] = mass;
    return p;
  }

  json aggregate(const std::vector<ResultRecord>& records) const override {
    const auto x = complex_column(records, "rescaled");
    const auto y = complex_column(records, "reference");
    const auto yc = complex_column(records, "reference_circle");
    const auto perms = static_cast<std::size_t>(cfg_.extra("permutations", 1000));
    const auto bins = static_cast<std::size_t>(cfg_.extra("bins", 16));
    const std::uint64_t test_seed = derive_stream(cfg_.master_seed, 0x7E57);
    json j;
    j["tests"]["energy"] = test_json(stats::energy_distance_test(x, y, perms, test_seed));
    j["tests"]["ks_modulus"] = test_json(stats::ks_test(moduli(x), moduli(y)));
    j["tests"]["phase"] = test_json(stats::phase_uniformity_test(x, bins));
    j["tests"]["energy_circle_constant"] = test_json(stats::energy_distance_test(x, yc, perms, test_seed));
    j["tests"]["ks_modulus_circle_constant"] = test_json(stats::ks_test(moduli(x), moduli(yc)));
    std::vector<double> sq;
    for (auto z : x) sq.push_back(std::norm(z));
    const auto second = stats::mean_estimate(sq);
    const double two_pi = 2.0 * std::numbers::pi;
    j["estimates"]["E|rescaled|^2"] = est_json(second);
    j["estimates"]["mass_2gamma"] = est_json(stats::mean_estimate(column(records, "mass_2gamma")));
    j["checks"]["kappa"] = reference_.variance_constant();
    j["checks"]["second_moment_target"] = two_pi * reference_.variance_constant();
    j["checks"]["second_moment_z"] = z_score(second, two_pi * reference_.variance_constant());
    j["checks"]["circle_constant"] = circle_constant_;
    j["checks"]["second_moment_z_circle_constant"] = z_score(second, two_pi * circle_constant_);
    return j;
  }

 private:
  RunConfig cfg_;
  ChaosParameter gamma_;
  std::size_t n_;
  stats::LimitLawReference reference_;
  double circle_constant_;
};

// ------------------------------------------------------------- capacity

class CapacityPlan final : public ExperimentPlan {
 public:
  explicit CapacityPlan(const RunConfig& c)
      : cfg_(c), gamma_(ChaosParameter::from_gamma_sq(c.gamma_sq)), s_(c.extra("s", 0.5)) {}

  Payload replica(std::size_t, std::uint64_t seed) const override {
    auto sample = circle_sample(cfg_, gamma_, seed);
    const double full = spectrum::capacity_sum(sample.series, s_);
    std::vector<std::complex<double>> head(sample.series.nonnegative().begin(),
                                           sample.series.nonnegative().begin() + cfg_.n_max / 2 + 1);
    const double half = spectrum::capacity_sum(
        spectrum::FourierSeries(std::move(head), sample.series.grid(), gamma_, sample.series.cutoff()), s_);
    const double energy = spectrum::riesz_energy(sample.measure, s_);
    Payload p;
    p.reals["capacity_sum"] = full;
    p.reals["capacity_sum_half"] = half;
    p.reals["riesz_energy"] = energy;
    p.reals["ratio"] = energy / full;
    return p;
  }

  json aggregate(const std::vector<ResultRecord>& records) const override {
    const auto ratio = column(records, "ratio");
    const auto full = column(records, "capacity_sum");
    const auto half = column(records, "capacity_sum_half");
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    std::size_t stable = 0;
    for (std::size_t i = 0; i < full.size(); ++i) stable += std::abs(full[i] / half[i] - 1.0) <= 0.1 ? 1 : 0;
    json j;
    j["estimates"]["capacity_sum"] = est_json(stats::mean_estimate(full));
    j["estimates"]["riesz_energy"] = est_json(stats::mean_estimate(column(records, "riesz_energy")));
    j["estimates"]["ratio"] = est_json(stats::mean_estimate(ratio));
    j["checks"] = {{"s", s_},
                   {"s_star", spectrum::s_star(gamma_)},
                   {"ratio_min", *lo},
                   {"ratio_max", *hi},
                   {"ratio_spread", *hi / *lo},
                   {"fraction_stable_half_to_full", static_cast<double>(stable) / static_cast<double>(full.size())}};
    return j;
  }

 private:
  RunConfig cfg_;
  ChaosParameter gamma_;
  double s_;
};

// ------------------------------------------------------------- convolve

class ConvolvePlan final : public ExperimentPlan {
 public:
  explicit ConvolvePlan(const RunConfig& c)
      : cfg_(c),
        gamma_(ChaosParameter::from_gamma_sq(c.gamma_sq)),
        d_(static_cast<unsigned>(c.extra("d", 2))),
        cutoffs_(dyadic(static_cast<std::size_t>(c.extra("K", 64)), 4 * static_cast<std::size_t>(c.extra("K", 64)))) {}

  Payload replica(std::size_t, std::uint64_t seed) const override {
    auto sample = circle_sample(cfg_, gamma_, seed);
    const auto power = spectrum::convolution_power(sample.series, d_);
    const double h = power.grid().spacing();
    std::vector<std::vector<double>> dens;
    for (auto K : cutoffs_) dens.push_back(spectrum::fejer_density(power, K));
    Payload p;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dens.size(); ++i) {
      const auto [mn, mx] = std::minmax_element(dens[i].begin(), dens[i].end());
      worst = std::min(worst, *mn / *mx);
      if (i + 1 < dens.size()) {
        std::vector<double> diff(dens[i].size());
        for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = std::abs(dens[i + 1][k] - dens[i][k]);
        p.reals[indexed("l1_diff", cutoffs_[i])] = h * stats::pairwise_sum(diff);
      }
    }
    p.reals["min_over_max"] = worst;
    return p;
  }

  json aggregate(const std::vector<ResultRecord>& records) const override {
    std::vector<std::vector<double>> diffs;
    for (std::size_t i = 0; i + 1 < cutoffs_.size(); ++i)
      diffs.push_back(column(records, indexed("l1_diff", cutoffs_[i])));
    std::size_t decreasing = 0;
    for (std::size_t r = 0; r < records.size(); ++r) {
      bool ok = true;
      for (std::size_t i = 1; i < diffs.size(); ++i) ok = ok && diffs[i][r] < diffs[i - 1][r];
      decreasing += ok ? 1 : 0;
    }
    json medians = json::array();
    for (const auto& d : diffs) medians.push_back(stats::median(d));
    const auto mom = column(records, "min_over_max");
    json j;
    for (std::size_t i = 0; i < diffs.size(); ++i)
      j["estimates"][indexed("l1_diff", cutoffs_[i])] = est_json(stats::mean_estimate(diffs[i]));
    j["checks"] = {{"cutoffs", cutoffs_},
                   {"d", d_},
                   {"median_l1_diff", medians},
                   {"fraction_decreasing", static_cast<double>(decreasing) / static_cast<double>(records.size())},
                   {"worst_min_over_max", *std::min_element(mom.begin(), mom.end())}};
    return j;
  }

 private:
  RunConfig cfg_;
  ChaosParameter gamma_;
  unsigned d_;
  std::vector<std::size_t> cutoffs_;
};

// ------------------------------------------------------------ toy_model

class ToyModelPlan final : public ExperimentPlan {
 public:
  explicit ToyModelPlan(const RunConfig& c)
      : cfg_(c),
        gamma_(ChaosParameter::from_gamma_sq(c.gamma_sq)),
        A_(c.extra("A", 8)),
        n_(static_cast<long>(c.extra("n", 256))),
        inner_(static_cast<std::size_t>(c.extra("inner", 20))),
        grid_(GridSpec::unit_interval(c.grid_m)),
        sampler_(static_cast<double>(n_) / A_, static_cast<double>(c.grid_m), grid_) {}

  Payload replica(std::size_t, std::uint64_t seed) const override {
    const auto pair = sampler_.sample(seed);
    const auto z = toy::toy_Z_n(pair.fine(), gamma_, n_);
    const auto proj = toy::conditional_projection(pair.coarse, gamma_, n_);
    const double scale = std::pow(static_cast<double>(n_), 0.5 * (1.0 - gamma_.gamma_sq()));
    const auto exact = toy::conditional_variance_exact(pair, gamma_, n_);
    Payload p;
    p.complexes["Z"] = z;
    p.complexes["projection"] = proj;
    p.complexes["increment"] = scale * (z - proj);
    // Martingale orthogonality against g = exp(gamma X_t(0.3)).
    const auto node = static_cast<std::size_t>(std::lround(0.3 * static_cast<double>(cfg_.grid_m)));
    p.complexes["martingale_product"] = (z - proj) * std::exp(gamma_.gamma() * pair.coarse.values[node]);
    Rng draw(derive_stream(seed, 4));
    const double sd = std::sqrt(0.5 * std::max(exact.re + exact.im, 0.0));
    const double xi = draw.normal();
    const double eta = draw.normal();
    p.complexes["reference"] = {sd * xi, sd * eta};
    p.reals["proj_sq_scaled"] = scale * scale * std::norm(proj);
    p.reals["z_sq_scaled"] = scale * scale * std::norm(z);
    p.reals["exact_re"] = exact.re;
    p.reals["exact_im"] = exact.im;
    p.reals["exact_cross"] = exact.cross;
    if (inner_ > 0) {
      Rng rng(derive_stream(seed, 3));
      const auto split = toy::conditional_variance_split(pair, sampler_, gamma_, n_, inner_, rng);
      p.reals["split_re"] = split.re;
      p.reals["split_im"] = split.im;
      p.reals["split_cross"] = split.cross;
      p.reals["split_diff"] = split.re - split.im;
    }
    return p;
  }

  json aggregate(const std::vector<ResultRecord>& records) const override {
    json j;
    const auto proj_sq = stats::mean_estimate(column(records, "proj_sq_scaled"));
    const double closed = toy::projection_second_moment(gamma_, A_);
    const double at_n = toy::projection_second_moment_at(gamma_, A_, n_);
    const double t = static_cast<double>(n_) / A_;
    const double discrete =
        std::pow(static_cast<double>(n_), 1.0 - gamma_.gamma_sq()) *
        toy::discrete_second_moment([t](double r) { return toy::bm_covariance(t, r); }, gamma_, n_, grid_);
    j["estimates"]["proj_sq_scaled"] = est_json(proj_sq);
    j["estimates"]["z_sq_scaled"] = est_json(stats::mean_estimate(column(records, "z_sq_scaled")));
    const auto z = complex_column(records, "Z");
    const auto proj = complex_column(records, "projection");
    const auto mart = complex_column(records, "martingale_product");
    j["estimates"]["Z_re"] = est_json(stats::mean_estimate(real_parts(z)));
    j["estimates"]["Z_im"] = est_json(stats::mean_estimate(imag_parts(z)));
    j["estimates"]["projection_re"] = est_json(stats::mean_estimate(real_parts(proj)));
    j["estimates"]["projection_im"] = est_json(stats::mean_estimate(imag_parts(proj)));
    j["estimates"]["martingale_product_re"] = est_json(stats::mean_estimate(real_parts(mart)));
    j["estimates"]["martingale_product_im"] = est_json(stats::mean_estimate(imag_parts(mart)));
    j["estimates"]["exact_re"] = est_json(stats::mean_estimate(column(records, "exact_re")));
    j["estimates"]["exact_im"] = est_json(stats::mean_estimate(column(records, "exact_im")));
    j["estimates"]["exact_cross"] = est_json(stats::mean_estimate(column(records, "exact_cross")));
    if (inner_ > 0) {
      const auto diff = stats::mean_estimate(column(records, "split_diff"));
      const auto cross = stats::mean_estimate(column(records, "split_cross"));
      j["estimates"]["split_re"] = est_json(stats::mean_estimate(column(records, "split_re")));
      j["estimates"]["split_im"] = est_json(stats::mean_estimate(column(records, "split_im")));
      j["estimates"]["split_diff"] = est_json(diff);
      j["estimates"]["split_cross"] = est_json(cross);
      j["checks"]["split_diff_z"] = z_score(diff, 0.0);
      j["checks"]["split_cross_z"] = z_score(cross, 0.0);
    }
    const auto perms = static_cast<std::size_t>(cfg_.extra("permutations", 1000));
    j["tests"]["energy_increment"] =
        test_json(stats::energy_distance_test(complex_column(records, "increment"),
                                              complex_column(records, "reference"), perms,
                                              derive_stream(cfg_.master_seed, 0x7E57)));
    j["checks"]["projection_second_moment"] = closed;
    j["checks"]["projection_second_moment_at_n"] = at_n;
    j["checks"]["projection_second_moment_discrete"] = discrete;
    j["checks"]["proj_sq_z_closed"] = z_score(proj_sq, closed);
    j["checks"]["proj_sq_z_discrete"] = z_score(proj_sq, discrete);
    j["checks"]["sigma_A_limit"] = toy::sigma_A_limit(gamma_, A_);
    j["checks"]["embedding_clipped_mass"] = sampler_.clipped_mass();
    return j;
  }

 private:
  RunConfig cfg_;
  ChaosParameter gamma_;
  double A_;
  long n_;
  std::size_t inner_;
  GridSpec grid_;
  toy::BmPairSampler sampler_;
};

// ---------------------------------------------------------------- kappa

class KappaPlan final : public ExperimentPlan {
 public:
  explicit KappaPlan(const RunConfig& c) : gamma_(ChaosParameter::from_gamma_sq(c.gamma_sq)) {}
  Payload replica(std::size_t, std::uint64_t) const override { return {}; }
  bool replicated() const override { return false; }

  json aggregate(const std::vector<ResultRecord>&) const override {
    const auto k = integrals::kappa(gamma_);
    if (!k.converged)
      throw NumericError("kappa quadrature did not converge, error " + std::to_string(k.abs_error_estimate));
    json j;
    j["estimates"]["kappa"] = {{"value", k.value},
                               {"abs_error_estimate", k.abs_error_estimate},
                               {"evaluations", k.evaluations},
                               {"converged", k.converged}};
    j["checks"]["closed_form"] = integrals::kappa_closed_form(gamma_);
    j["checks"]["circle_kappa"] = integrals::circle_kappa(gamma_);
    return j;
  }

 private:
  ChaosParameter gamma_;
};

}  // namespace

std::unique_ptr<ExperimentPlan> make_plan(const RunConfig& config) {
  config.validate();
  switch (config.experiment) {
    case Experiment::Decay: return std::make_unique<DecayPlan>(config);
    case Experiment::FourthMoment: return std::make_unique<FourthMomentPlan>(config);
    case Experiment::LimitLaw: return std::make_unique<LimitLawPlan>(config);
    case Experiment::Capacity: return std::make_unique<CapacityPlan>(config);
    case Experiment::Convolve: return std::make_unique<ConvolvePlan>(config);
    case Experiment::ToyModel: return std::make_unique<ToyModelPlan>(config);
    case Experiment::Kappa: return std::make_unique<KappaPlan>(config);
  }
  throw ConfigError("unknown experiment");
}

json config_echo(const RunConfig& c) {
  json extras = json::object();
  for (const auto& [k, v] : c.extras) extras[k] = v;
  return {{"experiment", to_string(c.experiment)},
          {"gamma_sq", c.gamma_sq},
          {"grid_m", c.grid_m},
          {"n_modes", c.modes()},
          {"n_max", c.n_max},
          {"replicas", c.replicas},
          {"master_seed", c.master_seed},
          {"extras", extras}};
}

json run_experiment(const RunConfig& config, std::ostream* sink, RunOutput* raw) {
  auto plan = make_plan(config);
  RunOutput out;
  if (sink) write_header(*sink);
  if (plan->replicated())
    out = run_replicas(
        config.replicas, config.master_seed, config.workers,
        [&plan](std::size_t i, std::uint64_t seed) { return plan->replica(i, seed); }, sink);
  json report{{"version", kVersion}, {"experiment", config_echo(config)}};
  report["replicas"] = {{"completed", out.records.size()}, {"failed", out.failures.size()}};
  json failures = json::array();
  for (const auto& f : out.failures)
    failures.push_back({{"replica_index", f.replica_index}, {"seed", f.seed}, {"message", f.message}});
  report["failures"] = failures;
  if (!plan->replicated() || !out.records.empty()) {
    auto body = plan->aggregate(out.records);
    for (const char* section : {"estimates", "tests", "checks"})
      report[section] = body.contains(section) ? body[section] : json::object();
  }
  if (raw) *raw = std::move(out);
  return report;
}

json summarize_results(const ResultsFile& file) {
  std::set<std::string> reals, complexes;
  for (const auto& r : file.records) {
    for (const auto& [k, v] : r.payload.reals) reals.insert(k);
    for (const auto& [k, v] : r.payload.complexes) complexes.insert(k);
  }
  json j{{"records", file.records.size()}, {"failures", file.failures.size()}};
  j["means"] = json::object();
  for (const auto& k : reals) {
    std::vector<double> xs;
    for (const auto& r : file.records)
      if (auto it = r.payload.reals.find(k); it != r.payload.reals.end()) xs.push_back(it->second);
    j["means"][k] = est_json(stats::mean_estimate(xs));
  }
  for (const auto& k : complexes) {
    std::vector<double> xs;
    for (const auto& r : file.records)
      if (auto it = r.payload.complexes.find(k); it != r.payload.complexes.end()) xs.push_back(std::norm(it->second));
    j["means"]["|" + k + "|^2"] = est_json(stats::mean_estimate(xs));
  }
  return j;
}

void write_results_csv(std::ostream& os, const ResultsFile& file) {
  std::set<std::string> reals, complexes;
  for (const auto& r : file.records) {
    for (const auto& [k, v] : r.payload.reals) reals.insert(k);
    for (const auto& [k, v] : r.payload.complexes) complexes.insert(k);
  }
  os << "replica_index,seed,wall_time_ms";
  for (const auto& k : reals) os << ',' << k;
  for (const auto& k : complexes) os << ',' << k << "_re," << k << "_im";
  os << '\n';
  os.precision(17);
  for (const auto& r : file.records) {
    os << r.replica_index << ',' << r.seed << ',' << r.wall_time_ms;
    for (const auto& k : reals) {
      os << ',';
      if (auto it = r.payload.reals.find(k); it != r.payload.reals.end()) os << it->second;
    }
    for (const auto& k : complexes) {
      os << ',';
      if (auto it = r.payload.complexes.find(k); it != r.payload.complexes.end())
        os << it->second.real() << ',' << it->second.imag();
      else
        os << ',';
    }
    os << '\n';
  }
}

}  // namespace gmclab::harness
