#pragma once

#include <stdexcept>
#include <string>

namespace pstomo {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad dimension, mismatched sizes, out-of-range node index.
class DimensionError : public Error {
  public:
    using Error::Error;
};

// Invalid numeric input (non-normalized vectors, bad parameters, NaN probabilities).
class ValueError : public Error {
  public:
    using Error::Error;
};

// The requested construction cannot be realized for this tree/basis combination.
class InfeasibleError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace pstomo
