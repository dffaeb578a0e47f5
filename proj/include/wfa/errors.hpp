#pragma once

#include <stdexcept>
#include <string>

namespace wfa {

// Invalid inputs: mismatched dimensions, unknown symbols, malformed files.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A computation was refused because it would exceed an enumeration or
// memory guard; the message names the guard so the caller can raise it.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Conditioning failures, overflow, or non-convergence inside a solver.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wfa
