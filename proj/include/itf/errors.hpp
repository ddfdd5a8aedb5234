#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace itf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the domain of an operation (point off the interval, X not
// inside a tower node, neighbourhood escaping [0,1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// orbit landed on a smooth critical point
class CriticalOrbitError : public Error {
 public:
  CriticalOrbitError(std::size_t hit, double point)
      : Error("orbit hits critical point " + std::to_string(point) + " at time " +
              std::to_string(hit)),
        hit_(hit) {}
  std::size_t hitting_time() const { return hit_; }

 private:
  std::size_t hit_;
};

// orbit landed on a branch boundary and no side flag was given
class AmbiguityError : public Error {
 public:
  AmbiguityError(std::size_t hit, double point)
      : Error("orbit hits branch boundary " + std::to_string(point) + " at time " +
              std::to_string(hit) + " and no side flag was supplied"),
        hit_(hit) {}
  std::size_t hitting_time() const { return hit_; }

 private:
  std::size_t hit_;
};

class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t reached)
      : Error(what + " (count reached " + std::to_string(reached) + ")"), reached_(reached) {}
  std::size_t reached() const { return reached_; }

 private:
  std::size_t reached_;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class DegenerateBranchError : public NumericError {
 public:
  using NumericError::NumericError;
};

class InfinitePressureError : public NumericError {
 public:
  using NumericError::NumericError;
};

// tau not integrable, so there is no projected measure
class NonCompatibleError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotApplicableError : public Error {
 public:
  using Error::Error;
};

}  // namespace itf
