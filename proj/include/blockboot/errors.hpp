#pragma once

#include <stdexcept>

namespace blockboot {

// Bad call-site input: out-of-range parameters, mismatched sizes, unknown names.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Degenerate numeric condition: zero-variance resample, undefined H, non-positive
// long-run variance estimate.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Study configuration violates the schema.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blockboot
