#pragma once

#include <stdexcept>
#include <string>

namespace pmbm {

// Base of every error the library throws. The CLI maps subclasses onto exit
// codes: ComputeError and its children exit with 1, everything else with 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ComputeError : public Error {
 public:
  using Error::Error;
};

class SingularError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

class DivergenceError : public ComputeError {
 public:
  DivergenceError(const std::string& what, int iteration)
      : ComputeError(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace pmbm
