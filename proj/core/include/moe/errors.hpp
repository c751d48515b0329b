#pragma once

#include <stdexcept>
#include <string>

namespace moe {

/// Raised when a quadrature sample is non-finite; the message names the node.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a divergence integrand hits m = 0 where f > 0.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a stated precondition fails; the message carries a witness.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a requested object exceeds the configured size budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace moe
