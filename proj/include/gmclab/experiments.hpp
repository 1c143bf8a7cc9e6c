#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <memory>

#include "gmclab/config.hpp"
#include "gmclab/runner.hpp"

namespace gmclab::harness {

inline constexpr const char* kVersion = "gmclab 1.0.0";

/// One configured experiment: a pure per-replica computation and an
/// aggregation over the records in index order. Shared state built at
/// construction is read-only, so replica() may run on many threads.
class ExperimentPlan {
 public:
  virtual ~ExperimentPlan() = default;
  virtual Payload replica(std::size_t index, std::uint64_t seed) const = 0;
  /// estimates / tests / checks sections of the report.
  virtual nlohmann::json aggregate(const std::vector<ResultRecord>& records) const = 0;
  /// false for experiments without replicas (kappa).
  virtual bool replicated() const { return true; }
};

/// Validates the config and builds the plan. Throws ConfigError.
std::unique_ptr<ExperimentPlan> make_plan(const RunConfig& config);

/// The config fields that determine the results (worker count and output
/// path excluded).
nlohmann::json config_echo(const RunConfig& config);

/// Runs every replica, streams records to `sink` (header first) and returns
/// the aggregate report: version, experiment echo, replica counts, estimates,
/// tests, checks and the failure manifest. Identical for any worker count.
nlohmann::json run_experiment(const RunConfig& config, std::ostream* sink = nullptr,
                              RunOutput* raw = nullptr);

/// Generic summary of a results file: per-key mean estimates of every real
/// payload entry and of |z|^2 for complex entries.
nlohmann::json summarize_results(const ResultsFile& file);

/// CSV with columns replica_index, seed, wall_time_ms and one column per
/// payload entry (complex entries split into _re and _im).
void write_results_csv(std::ostream& os, const ResultsFile& file);

}  // namespace gmclab::harness
