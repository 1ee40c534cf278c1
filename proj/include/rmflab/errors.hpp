#pragma once

#include <stdexcept>
#include <string>

namespace rmflab {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Request exceeds a sieve, memory or enumeration cap.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Random model not covered by an experiment (e.g. Rademacher upper bound).
class UnsupportedModelError : public std::invalid_argument {
 public:
  explicit UnsupportedModelError(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace rmflab
