#pragma once

#include <cstdint>
#include <random>

namespace gmclab {

/// Seed of replica `index` under `master`: splitmix64 avalanche of
/// master ^ (index * golden-ratio constant). Bijective in `index` for a fixed
/// master, identical on every platform.
std::uint64_t seed_for_replica(std::uint64_t master, std::uint64_t index) noexcept;

/// Independent sub-stream of a replica seed (coarse/increment fields,
/// auxiliary measures, reference draws). Streams are numbered from 1.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) noexcept {
  return seed_for_replica(seed, stream);
}

/// 64-bit Mersenne twister with platform-independent uniform and normal
/// variates. std::normal_distribution is implementation-defined, so normals
/// come from an explicit Box-Muller transform, consumed in pairs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open() noexcept { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  double normal() noexcept;

  std::uint64_t next_u64() noexcept { return engine_(); }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gmclab
