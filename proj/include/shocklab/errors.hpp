#pragma once

#include <stdexcept>
#include <string>

namespace shocklab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument is outside the operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// foliation
class MonotonicityViolation : public Error {
 public:
  MonotonicityViolation(double alpha, double q, double derivative);
  double alpha;
  double q;
  double derivative;
};

class CoverageGap : public Error {
 public:
  using Error::Error;
};

class FoliationBroken : public Error {
 public:
  using Error::Error;
};

class NonUniformGrid : public Error {
 public:
  using Error::Error;
};

// backward construction
class BoundViolated : public Error {
 public:
  using Error::Error;
};

class NotCompactlySupported : public Error {
 public:
  using Error::Error;
};

class FoliationFailed : public Error {
 public:
  using Error::Error;
};

class ForwardShockFound : public Error {
 public:
  ForwardShockFound(double alpha, double beta, double t);
  double alpha;
  double beta;
  double t;
};

class NoBackwardShockWithinHorizon : public Error {
 public:
  using Error::Error;
};

// conservation
class NotElliptic : public Error {
 public:
  using Error::Error;
};

class LevelOutOfRange : public Error {
 public:
  LevelOutOfRange(double level, double q);
  double level;
  double q;
};


/// The concavity functional was asked for a state outside the n = 2 elliptic domain.
class EllipticityViolated : public NotElliptic {
 public:
  using NotElliptic::NotElliptic;
};

}  // namespace shocklab
