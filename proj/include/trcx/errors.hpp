#pragma once

#include <stdexcept>
#include <string>

namespace trcx {

// Base class for everything the library throws. The CLI maps the concrete
// type onto its exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Gradient branch entered with g = 0.
class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

// Eigen branch entered with a non-negative leftmost eigenvalue.
class InvalidBranch : public Error {
 public:
  using Error::Error;
};

// Predicted decrease <= 0 where a positive one is required.
class DegenerateModel : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Non-finite f, g or H returned by an objective.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace trcx
