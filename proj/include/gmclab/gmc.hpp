#pragma once

#include <span>
#include <vector>

#include "gmclab/grid.hpp"
#include "gmclab/stats.hpp"

namespace gmclab::gmc {

/// Discretized chaos measure: one nonnegative mass per grid cell.
struct GmcMeasure {
  GridSpec grid;
  std::vector<double> weights;
  ChaosParameter gamma;
  double cutoff = 0.0;
};

/// weight_j = exp(gamma * value_j - gamma^2/2 * variance_j) * spacing.
/// Riemann-cell discretization; each weight has mean exactly `spacing`.
/// Throws std::domain_error for gamma >= sqrt(2) (supercritical).
GmcMeasure build_measure(const FieldSample& field, ChaosParameter gamma);

/// Pairwise (fixed-tree) sum of the weights.
double total_mass(const GmcMeasure& measure);

struct MomentEstimate {
  stats::EstimateReport report;
  /// q >= 2/gamma^2: the continuum moment is infinite and the estimate is
  /// dominated by the largest replicas.
  bool heavy_tail = false;
};

/// Mean of mass^q over replicas with jackknife standard error.
MomentEstimate mass_moment_estimate(std::span<const double> masses, double q, ChaosParameter gamma);

}  // namespace gmclab::gmc
