#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gmclab::harness {

struct Payload {
  std::map<std::string, double> reals;
  std::map<std::string, std::complex<double>> complexes;

  friend bool operator==(const Payload&, const Payload&) = default;
};

struct ResultRecord {
  std::size_t replica_index = 0;
  std::uint64_t seed = 0;
  Payload payload;
  std::int64_t wall_time_ms = 0;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

struct ReplicaFailure {
  std::size_t replica_index = 0;
  std::uint64_t seed = 0;
  std::string message;

  friend bool operator==(const ReplicaFailure&, const ReplicaFailure&) = default;
};

struct ResultsFile {
  std::vector<ResultRecord> records;
  std::vector<ReplicaFailure> failures;
};

/// JSON lines: a header {"format":"gmclab-results","version":1}, then one
/// object per record or failure. Doubles are written in shortest round-trip
/// form (non-finite values as the strings "nan", "inf", "-inf"), complex
/// values as [re, im], so reading back is bit-exact.
void write_header(std::ostream& os);
void write_record(std::ostream& os, const ResultRecord& record);
void write_failure(std::ostream& os, const ReplicaFailure& failure);

void write_results(const std::string& path, std::span<const ResultRecord> records);

/// Throws ParseError with the 1-based line number of the first bad line.
ResultsFile read_results(std::istream& in);
ResultsFile read_results(const std::string& path);

}  // namespace gmclab::harness
