#pragma once

#include <stdexcept>
#include <string>

namespace hormander {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can separate library diagnostics from programming bugs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class UnsupportedParameterError : public Error {
 public:
  using Error::Error;
};

class StructuralError : public Error {
 public:
  using Error::Error;
};

class DegenerateFrameError : public Error {
 public:
  using Error::Error;
};

class CoveringPreconditionError : public Error {
 public:
  CoveringPreconditionError(const std::string& what, int n_plus, int n_minus)
      : Error(what), n_plus_(n_plus), n_minus_(n_minus) {}
  int n_plus() const { return n_plus_; }
  int n_minus() const { return n_minus_; }

 private:
  int n_plus_;
  int n_minus_;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hormander
