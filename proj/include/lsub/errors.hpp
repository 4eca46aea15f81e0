#pragma once

#include <stdexcept>
#include <string>

namespace lsub {

// Base class for every failure raised by the engine. Each subclass names one
// contract violation so callers (and the CLI) can tell them apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PointOutsideChart : public Error {
 public:
  using Error::Error;
};

class RankDeficientJet : public Error {
 public:
  using Error::Error;
};

class DegenerateFrame : public Error {
 public:
  using Error::Error;
};

class StencilOutsideChart : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

class InvalidFamilyParams : public Error {
 public:
  using Error::Error;
};

class NotALambdaSurface : public Error {
 public:
  using Error::Error;
};

class InvalidK : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace lsub
