#pragma once

#include <stdexcept>
#include <string>

namespace toda {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected input. `field()` names the offending entry, e.g. "gamma[2]" or "c[2,1]".
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Evaluation outside the domain of a function (z = 0, a stencil reaching the origin, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// z lies on the branch cut of a multivalued power.
class CutError : public DomainError {
 public:
  using DomainError::DomainError;
};

// An index outside its documented range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// The parameters do not define a solution (nonpositive or non-real determinant).
class InvalidSolutionError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure was configured so that it cannot produce a meaningful answer.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace toda
