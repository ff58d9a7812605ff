#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace volterra {

/// Argument outside the mathematical domain of an operation (x <= 0 for
/// log_gamma, f(0) = 0 for the tangent kernel, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller misuse: mismatched grids, n = 0, an unparseable spec string.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested computation has no implementation for this input
/// (e.g. Monte Carlo for a density without a sampler).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure in one of the spec mini-languages; `position` is the
/// zero-based offset into the input where parsing stopped.
class SpecParseError : public UsageError {
 public:
  SpecParseError(const std::string& message, std::size_t position)
      : UsageError(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace volterra
