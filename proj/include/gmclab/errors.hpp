#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmclab {

/// Raised when a numerical procedure fails to meet its contract
/// (quadrature non-convergence, embedding failure, no stabilization).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Circulant embedding produced eigenvalues below the clipping threshold.
class EmbeddingError : public NumericError {
 public:
  EmbeddingError(const std::string& what, double negative_mass)
      : NumericError(what), negative_mass_(negative_mass) {}
  double negative_mass() const noexcept { return negative_mass_; }

 private:
  double negative_mass_;
};

/// Invalid experiment configuration. Raised before any work starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed results file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gmclab
