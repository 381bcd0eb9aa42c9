#pragma once

#include <stdexcept>
#include <string>

namespace thetafock {

// Requested series tolerance cannot be certified (term cap or precision floor).
struct UnreachableToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tail-bound ratio test failed: the truncation index is too small for the
// dominating geometric series to contract.
struct TailBoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A value left the representable range; the message names the log-space
// companion to use instead.
struct OverflowError : std::range_error {
  using std::range_error::range_error;
};

// Closed-form kernel disagrees with the series beyond the probe contract.
struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quadrature sample came back non-finite; the message names the node.
struct NonFiniteSampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation on an input that is degenerate for it (e.g. all-zero expansion).
struct DegenerateInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace thetafock
