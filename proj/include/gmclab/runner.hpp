#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "gmclab/results.hpp"

namespace gmclab::harness {

/// Computes the payload of one replica from its index and seed.
using ReplicaFn = std::function<Payload(std::size_t index, std::uint64_t seed)>;

struct RunOutput {
  std::vector<ResultRecord> records;  // successful replicas, by index
  std::vector<ReplicaFailure> failures;
};

/// Runs replicas 0..count-1 on `workers` threads, replica i with seed
/// seed_for_replica(master, i). Records are streamed to `sink` (if given) in
/// index order as soon as every lower index has finished, so a crash never
/// leaves a gap before flushed lines. A throwing replica becomes a failure
/// line; the others still run.
RunOutput run_replicas(std::size_t count, std::uint64_t master, std::size_t workers, const ReplicaFn& fn,
                       std::ostream* sink = nullptr);

}  // namespace gmclab::harness
