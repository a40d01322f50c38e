#pragma once

#include <stdexcept>
#include <string>

namespace chebsurf {

/// Bad caller input: dimension mismatch, out-of-range parameter, empty data.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds a fixed implementation limit.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Arguments are well formed but lie outside the domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// File could not be read, written, or decoded.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural invariant does not hold (e.g. an imported decomposition
/// whose surfaces overlap).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chebsurf
