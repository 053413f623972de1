#pragma once

#include <stdexcept>
#include <string>

namespace gmt {

// Bad arguments to a library call (dimension mismatch, malformed region, ...).
struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rejection sampling exhausted its candidate budget before collecting n free samples.
struct InfeasibleSamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No free sample could be placed inside the goal region.
struct GoalBlockedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gmt
