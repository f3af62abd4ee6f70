#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curvhom {

/// Malformed field expression. `position()` is a 0-based byte offset into the source.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation outside the domain of the field (log of a non-positive value,
/// division by zero, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A mathematical precondition of the construction fails at the requested
/// point, e.g. the second fundamental form is not positive definite.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A least-squares recovery finished with a residual above its acceptance threshold.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace curvhom
