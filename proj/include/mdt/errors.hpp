#pragma once

#include <stdexcept>
#include <string>

namespace mdt {

// Bad input: malformed graphs, out-of-range parameters, incompatible modes.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A desk-scale guard (vertex count, width, enumeration size) was exceeded.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Floating-point evaluation would overflow.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// An iterative eigensolver did not converge; carries the last relative residual.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace mdt
