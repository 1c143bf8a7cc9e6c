#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace gmclab::harness {

enum class Experiment { Decay, FourthMoment, LimitLaw, Capacity, Convolve, ToyModel, Kappa };

std::string to_string(Experiment e);
/// Throws ConfigError for unknown names.
Experiment parse_experiment(const std::string& name);

struct RunConfig {
  Experiment experiment = Experiment::Decay;
  double gamma_sq = 0.25;
  std::size_t grid_m = 1 << 14;
  /// 0 selects grid_m / 4.
  std::size_t n_modes = 0;
  std::size_t n_max = 1024;
  std::size_t replicas = 100;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  std::string output_path;
  /// Experiment-specific parameters: A, n, inner, d, K, s, beta, n_min,
  /// block_min, permutations, bins.
  std::map<std::string, double> extras;

  double extra(const std::string& key, double fallback) const;
  std::size_t modes() const noexcept { return n_modes == 0 ? grid_m / 4 : n_modes; }

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// Reads `key = value` lines. Keys before any section apply to every
/// experiment; a `[name]` section applies to experiment `name` only and
/// overrides the shared keys. `#` and `;` start comments. Unknown keys,
/// unknown sections and malformed values are rejected with their line number.
/// The result is validated.
RunConfig parse_config(std::istream& in, Experiment experiment);
RunConfig load_config(const std::string& path, Experiment experiment);

}  // namespace gmclab::harness
