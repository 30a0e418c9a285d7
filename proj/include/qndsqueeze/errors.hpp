#pragma once

#include <stdexcept>
#include <string>

namespace qnd {

// Input outside the mathematical domain of a formula (negative counts,
// eta >= 1, evaluation on a resonance, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operation applied to the wrong kind of object.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Requested problem exceeds the sizes an exact computation is allowed to take.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical procedure failed (bracket failure, underflow, broken linearization).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qnd
