#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rentire {

/// Invalid user input: malformed configs, out-of-range parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not produce a trustworthy number.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a series cannot be truncated within the hard cap, or when the
/// scanned coefficients grow fast enough to rule out convergence at the
/// requested radius.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, std::size_t index)
      : NumericalError(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Σ P(|X| ≥ ρ_k) diverges for the requested distribution and sequence.
class NotSummableError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rentire
