#include "gmclab/results.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <limits>
#include <ostream>

#include "gmclab/errors.hpp"

namespace gmclab::harness {

using nlohmann::json;

namespace {

constexpr int kVersion = 1;

json encode(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double decode(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw std::invalid_argument("expected a number");
}

}  // namespace

void write_header(std::ostream& os) {
  os << json{{"format", "gmclab-results"}, {"version", kVersion}}.dump() << '\n';
}

void write_record(std::ostream& os, const ResultRecord& r) {
  json reals = json::object();
  for (const auto& [k, v] : r.payload.reals) reals[k] = encode(v);
  json complexes = json::object();
  for (const auto& [k, v] : r.payload.complexes) complexes[k] = json::array({encode(v.real()), encode(v.imag())});
  json j{{"replica_index", r.replica_index},
         {"seed", r.seed},
         {"payload", {{"reals", reals}, {"complex", complexes}}},
         {"wall_time_ms", r.wall_time_ms}};
  os << j.dump() << '\n';
}

void write_failure(std::ostream& os, const ReplicaFailure& f) {
  json j{{"failure", {{"replica_index", f.replica_index}, {"seed", f.seed}, {"message", f.message}}}};
  os << j.dump() << '\n';
}

void write_results(const std::string& path, std::span<const ResultRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_header(out);
  for (const auto& r : records) write_record(out, r);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ResultsFile read_results(std::istream& in) {
  ResultsFile out;
  std::string text;
  std::size_t line = 0;
  bool header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line);
    }
    try {
      if (!header) {
        if (j.value("format", "") != "gmclab-results") throw ParseError("missing results header", line);
        if (j.at("version").get<int>() != kVersion) throw ParseError("unsupported results version", line);
        header = true;
        continue;
      }
      if (j.contains("failure")) {
        const auto& f = j.at("failure");
        out.failures.push_back({f.at("replica_index").get<std::size_t>(), f.at("seed").get<std::uint64_t>(),
                                f.at("message").get<std::string>()});
        continue;
      }
      ResultRecord r;
      r.replica_index = j.at("replica_index").get<std::size_t>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
      const auto& p = j.at("payload");
      for (const auto& [k, v] : p.at("reals").items()) r.payload.reals[k] = decode(v);
      for (const auto& [k, v] : p.at("complex").items()) {
        if (!v.is_array() || v.size() != 2) throw std::invalid_argument("complex value must be [re, im]");
        r.payload.complexes[k] = {decode(v[0]), decode(v[1])};
      }
      out.records.push_back(std::move(r));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad record: ") + e.what(), line);
    }
  }
  if (!header) throw ParseError("missing results header", line + 1);
  return out;
}

ResultsFile read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_results(in);
}

}  // namespace gmclab::harness
