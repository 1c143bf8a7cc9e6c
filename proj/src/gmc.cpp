#include "gmclab/gmc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gmclab::gmc {

GmcMeasure build_measure(const FieldSample& field, ChaosParameter gamma) {
  if (!(gamma.gamma_sq() < 2.0))
    throw std::domain_error("build_measure: gamma must be below sqrt(2) (supercritical)");
  if (field.variance.size() != field.values.size() || field.values.size() != field.grid.points())
    throw std::invalid_argument("build_measure: field variance vector not populated");

  const double g = gamma.gamma();
  const double half_g2 = 0.5 * gamma.gamma_sq();
  const double h = field.grid.spacing();
  GmcMeasure out{field.grid, std::vector<double>(field.values.size()), gamma, field.cutoff};
  for (std::size_t j = 0; j < field.values.size(); ++j)
    out.weights[j] = std::exp(g * field.values[j] - half_g2 * field.variance[j]) * h;
  return out;
}

double total_mass(const GmcMeasure& measure) { return stats::pairwise_sum(measure.weights); }

MomentEstimate mass_moment_estimate(std::span<const double> masses, double q, ChaosParameter gamma) {
  if (masses.empty()) throw std::invalid_argument("mass_moment_estimate: no replicas");
  if (!(q >= 0.0)) throw std::domain_error("mass_moment_estimate: q must be >= 0");
  std::vector<double> powered(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i)
    powered[i] = q == 0.0 ? 1.0 : std::pow(masses[i], q);
  MomentEstimate out;
  out.report = stats::jackknife_mean(powered);
  out.heavy_tail = gamma.gamma_sq() > 0.0 && q >= 2.0 / gamma.gamma_sq();
  return out;
}

}  // namespace gmclab::gmc
