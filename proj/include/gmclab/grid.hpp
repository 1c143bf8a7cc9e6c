#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmclab {

enum class Domain { Circle, UnitInterval };

inline double domain_length(Domain d) noexcept {
  return d == Domain::Circle ? 2.0 * std::numbers::pi : 1.0;
}

/// Uniform grid of `points` nodes x_j = j * spacing on [0, length).
class GridSpec {
 public:
  GridSpec(std::size_t points, Domain domain) : points_(points), domain_(domain) {
    if (points < 2 || (points & (points - 1)) != 0)
      throw std::invalid_argument("GridSpec: points must be a power of two >= 2, got " +
                                  std::to_string(points));
  }

  static GridSpec circle(std::size_t points) { return {points, Domain::Circle}; }
  static GridSpec unit_interval(std::size_t points) { return {points, Domain::UnitInterval}; }

  std::size_t points() const noexcept { return points_; }
  Domain domain() const noexcept { return domain_; }
  double length() const noexcept { return domain_length(domain_); }
  double spacing() const noexcept { return length() / static_cast<double>(points_); }
  double node(std::size_t j) const noexcept { return static_cast<double>(j) * spacing(); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::size_t points_;
  Domain domain_;
};

/// The chaos parameter gamma. Formulas mostly use gamma^2, so the type keeps
/// both forms and callers never confuse them.
class ChaosParameter {
 public:
  static ChaosParameter from_gamma(double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
      throw std::domain_error("chaos parameter must be a finite gamma >= 0");
    return ChaosParameter(gamma);
  }
  static ChaosParameter from_gamma_sq(double gamma_sq) {
    if (!(gamma_sq >= 0.0) || !std::isfinite(gamma_sq))
      throw std::domain_error("chaos parameter must be a finite gamma^2 >= 0");
    return ChaosParameter(std::sqrt(gamma_sq), gamma_sq);
  }

  double gamma() const noexcept { return gamma_; }
  double gamma_sq() const noexcept { return gamma_sq_; }
  ChaosParameter doubled() const noexcept { return ChaosParameter(2.0 * gamma_, 4.0 * gamma_sq_); }

 private:
  explicit ChaosParameter(double g) : gamma_(g), gamma_sq_(g * g) {}
  ChaosParameter(double g, double g2) : gamma_(g), gamma_sq_(g2) {}
  double gamma_;
  double gamma_sq_;
};

/// A Gaussian field sampled on a grid with its pointwise variance.
/// `cutoff` is the number of spectral modes (circle) or the scale t (interval).
struct FieldSample {
  GridSpec grid;
  std::vector<double> values;
  std::vector<double> variance;
  double cutoff = 0.0;
};

}  // namespace gmclab
