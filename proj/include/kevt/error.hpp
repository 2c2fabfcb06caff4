#pragma once

#include <stdexcept>
#include <string>

namespace kevt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed arguments that violate a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// The requested (map, target, functional) combination has no known result.
class Unsupported : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// A Frechet-only routine got a Weibull shape or the other way round.
class WrongTail : public Error {
 public:
  using Error::Error;
};

// The observable was evaluated exactly on its target set (d = 0).
class OnTarget : public Error {
 public:
  using Error::Error;
};

// Malformed input files.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace kevt
