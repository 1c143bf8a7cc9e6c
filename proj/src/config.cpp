#include "gmclab/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <string_view>

#include "gmclab/errors.hpp"

namespace gmclab::harness {

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 7> kNames{{
    {Experiment::Decay, "decay"},
    {Experiment::FourthMoment, "fourth_moment"},
    {Experiment::LimitLaw, "limit_law"},
    {Experiment::Capacity, "capacity"},
    {Experiment::Convolve, "convolve"},
    {Experiment::ToyModel, "toy_model"},
    {Experiment::Kappa, "kappa"},
}};

const std::set<std::string, std::less<>> kExtras{"A",     "n",     "inner", "d",       "K",           "s",
                                                 "beta",  "n_min", "block_min", "permutations", "bins"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& v, std::size_t line, const std::string& key) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    fail(line, "'" + key + "' expects a real number, got '" + v + "'");
  return out;
}

std::uint64_t parse_unsigned(const std::string& v, std::size_t line, const std::string& key) {
  std::uint64_t out = 0;
  int base = 10;
  std::string_view digits = v;
  if (digits.starts_with("0x") || digits.starts_with("0X")) {
    base = 16;
    digits.remove_prefix(2);
  }
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out, base);
  if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size())
    fail(line, "'" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

bool power_of_two(std::size_t m) { return m >= 2 && (m & (m - 1)) == 0; }

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, name] : kNames)
    if (k == e) return std::string(name);
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  throw ConfigError("unknown experiment '" + name + "'");
}

double RunConfig::extra(const std::string& key, double fallback) const {
  auto it = extras.find(key);
  return it == extras.end() ? fallback : it->second;
}

void RunConfig::validate() const {
  auto bad = [](const std::string& m) { throw ConfigError(m); };
  if (!(gamma_sq >= 0.0 && gamma_sq < 2.0)) bad("gamma_sq must lie in [0, 2)");
  if (!power_of_two(grid_m)) bad("grid_m must be a power of two >= 2");
  if (grid_m > (std::size_t{1} << 24)) bad("grid_m above 2^24 is not supported");
  if (modes() < 1 || modes() > grid_m / 2) bad("n_modes must lie in [1, grid_m/2]");
  if (n_max < 1 || n_max > grid_m / 2) bad("n_max must lie in [1, grid_m/2]");
  if (replicas < 1) bad("replicas must be >= 1");
  if (workers < 1) bad("workers must be >= 1");
  auto is_int = [](double x) { return x == std::floor(x); };

  switch (experiment) {
    case Experiment::Decay: {
      const double b = extra("block_min", 128);
      if (!(b >= 1) || !is_int(b) || !power_of_two(static_cast<std::size_t>(b)) ||
          2 * static_cast<std::size_t>(b) - 1 > n_max)
        bad("block_min must be a power of two with 2*block_min - 1 <= n_max");
      if (!(extra("beta", 0.1) >= 0.0)) bad("beta must be >= 0");
      break;
    }
    case Experiment::FourthMoment: {
      if (!(gamma_sq < 0.5)) bad("fourth_moment requires gamma_sq < 1/2");
      const double n0 = extra("n_min", 16);
      if (!(n0 >= 1) || !is_int(n0) || 4 * static_cast<std::size_t>(n0) > n_max)
        bad("n_min must be an integer with at least three dyadic frequencies up to n_max");
      break;
    }
    case Experiment::LimitLaw: {
      if (!(gamma_sq < 0.5)) bad("limit_law requires gamma_sq < 1/2");
      if (4 * gamma_sq >= 2.0) bad("limit_law needs the doubled parameter below sqrt(2)");
      const double n = extra("n", 512);
      if (!(n >= 1) || !is_int(n) || n > static_cast<double>(n_max)) bad("n must be an integer in [1, n_max]");
      if (!(extra("permutations", 1000) >= 1)) bad("permutations must be >= 1");
      if (!(extra("bins", 16) >= 4)) bad("bins must be >= 4");
      break;
    }
    case Experiment::Capacity: {
      const double s = extra("s", 0.5);
      if (!(s > 0.0 && s < 1.0)) bad("s must lie in (0, 1)");
      if (n_max < 2) bad("capacity needs n_max >= 2");
      break;
    }
    case Experiment::Convolve: {
      const double d = extra("d", 2);
      if (!(d >= 1) || !is_int(d)) bad("d must be a positive integer");
      const double k = extra("K", 64);
      if (!(k >= 1) || !is_int(k) || 4 * k > static_cast<double>(n_max)) bad("K must be an integer with 4K <= n_max");
      break;
    }
    case Experiment::ToyModel: {
      if (!(gamma_sq < 1.0)) bad("toy_model requires gamma_sq < 1");
      const double A = extra("A", 8);
      const double n = extra("n", 256);
      if (!(A > 0.0)) bad("A must be positive");
      if (!(n >= 1) || !is_int(n) || n > static_cast<double>(grid_m / 2)) bad("n must be an integer in [1, grid_m/2]");
      if (!(n / A > 1.0)) bad("the coarse scale n/A must exceed 1");
      if (!(n / A < static_cast<double>(grid_m))) bad("the coarse scale n/A must be below grid_m");
      if (!(extra("inner", 20) >= 0) || !is_int(extra("inner", 20))) bad("inner must be a non-negative integer");
      if (!(extra("permutations", 1000) >= 1)) bad("permutations must be >= 1");
      break;
    }
    case Experiment::Kappa:
      if (!(gamma_sq < 1.0)) bad("kappa requires gamma_sq < 1");
      break;
  }
}

RunConfig parse_config(std::istream& in, Experiment experiment) {
  RunConfig cfg;
  cfg.experiment = experiment;
  std::map<std::string, std::pair<std::string, std::size_t>> shared, specific;
  std::map<std::string, std::pair<std::string, std::size_t>>* target = &shared;
  bool skipping = false;
  std::string raw;
  std::size_t line = 0;
  static const std::set<std::string, std::less<>> kCore{"experiment", "gamma_sq", "grid_m", "n_modes", "n_max",
                                                        "replicas",   "master_seed", "workers", "output_path"};
  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw;
    if (auto c = text.find_first_of("#;"); c != std::string::npos) text.erase(c);
    text = trim(text);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') fail(line, "unterminated section header");
      const std::string name = trim(std::string_view(text).substr(1, text.size() - 2));
      Experiment e;
      try {
        e = parse_experiment(name);
      } catch (const ConfigError&) {
        fail(line, "unknown section [" + name + "]");
      }
      skipping = e != experiment;
      target = &specific;
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (!kCore.contains(key) && !kExtras.contains(key)) fail(line, "unknown key '" + key + "'");
    if (value.empty()) fail(line, "missing value for '" + key + "'");
    if (skipping) continue;
    if (target->contains(key)) fail(line, "duplicate key '" + key + "'");
    (*target)[key] = {value, line};
  }

  for (auto& [k, v] : specific) shared[k] = v;
  for (const auto& [key, entry] : shared) {
    const auto& [value, at] = entry;
    if (key == "experiment") {
      Experiment named;
      try {
        named = parse_experiment(value);
      } catch (const ConfigError&) {
        fail(at, "unknown experiment '" + value + "'");
      }
      if (named != experiment)
        fail(at, "file is for experiment '" + value + "', not '" + to_string(experiment) + "'");
    } else if (key == "gamma_sq") {
      cfg.gamma_sq = parse_real(value, at, key);
    } else if (key == "grid_m") {
      cfg.grid_m = parse_unsigned(value, at, key);
    } else if (key == "n_modes") {
      cfg.n_modes = parse_unsigned(value, at, key);
    } else if (key == "n_max") {
      cfg.n_max = parse_unsigned(value, at, key);
    } else if (key == "replicas") {
      cfg.replicas = parse_unsigned(value, at, key);
    } else if (key == "master_seed") {
      cfg.master_seed = parse_unsigned(value, at, key);
    } else if (key == "workers") {
      cfg.workers = parse_unsigned(value, at, key);
    } else if (key == "output_path") {
      cfg.output_path = value;
    } else {
      cfg.extras[key] = parse_real(value, at, key);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path, Experiment experiment) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, experiment);
}

}  // namespace gmclab::harness
