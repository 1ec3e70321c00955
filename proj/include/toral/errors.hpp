#pragma once

#include <stdexcept>
#include <string>

namespace toral {

// Bad input or a violated precondition. The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that could not complete. The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceLimitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PreconditionViolated : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class MismatchedFrame : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateInput : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class FlatSurface : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CapNotFound : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NewtonDivergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BumpOverlapsStationarySet : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateFit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GaussMapNotInjective : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BaseCaseFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace toral
