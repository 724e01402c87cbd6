#pragma once

#include <stdexcept>
#include <string>

namespace cramer {

/// Bad caller input: dimension mismatch, invalid parameter, malformed descriptor.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to converge or left its documented range.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The model kind does not provide the requested evaluator.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A scan grid did not bracket the quantity being extracted.
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cramer
