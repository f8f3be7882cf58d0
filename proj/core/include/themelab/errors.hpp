#pragma once

#include <stdexcept>
#include <string>

namespace themelab {

// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input could not be parsed or violates a documented precondition.
class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotAUnit : public Error {
 public:
  using Error::Error;
};

class PrecisionExceeded : public Error {
 public:
  using Error::Error;
};

// Working precision is too small to certify a needed non-vanishing.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class FactorizationFailed : public Error {
 public:
  using Error::Error;
};

class NotSolvable : public Error {
 public:
  using Error::Error;
};

class InvalidCanonicalPoint : public Error {
 public:
  using Error::Error;
};

class NotThematic : public Error {
 public:
  using Error::Error;
};

class WrongInvariants : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

}  // namespace themelab
