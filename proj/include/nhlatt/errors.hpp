#pragma once

#include <stdexcept>

namespace nhlatt {

// Bad inputs: out-of-range parameters, mismatched sizes, malformed configs.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A solver failed to meet its contract: no convergence, lost roots,
// no usable observation window, and the like.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace nhlatt
