#pragma once

#include <stdexcept>
#include <string>

namespace sparseal {

// Caller passed an out-of-range or inconsistent parameter. CLI maps this to
// exit code 1.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input is degenerate for the requested operation, e.g. normalizing an
// all-zero vector.
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejection sampling hit its attempt cap before collecting the batch.
struct SamplingStarvationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unrecoverable failure mid-run (e.g. thresholding still yields the zero
// vector after the retry). CLI maps this to exit code 3.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sparseal
