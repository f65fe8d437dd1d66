#pragma once

#include <stdexcept>
#include <string>

namespace stoprule {

// Base for every failure raised by the library. The CLI maps these to exit
// code 1; flag/argument problems are reported separately with exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (negative box area,
// nonpositive theta, T below beta*, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class StateOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidPolicy : public Error {
 public:
  using Error::Error;
};

class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, long long required = 0)
      : Error(what), required_(required) {}

  // Parameter value (e.g. series length) that would satisfy the request, or
  // 0 when no such hint exists.
  long long required() const noexcept { return required_; }

 private:
  long long required_;
};

}  // namespace stoprule
