#include "shocklab/errors.hpp"

#include <cstdio>

namespace shocklab {
namespace {

std::string describe(const char* fmt, double a, double b, double c) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

}  // namespace

MonotonicityViolation::MonotonicityViolation(double alpha_, double q_, double derivative_)
    : Error(describe("foliation is not monotone in alpha: dphi/dalpha = %.6g at alpha = %.6g, q = %.6g",
                     derivative_, alpha_, q_)),
      alpha(alpha_),
      q(q_),
      derivative(derivative_) {}

ForwardShockFound::ForwardShockFound(double alpha_, double beta_, double t_)
    : Error(describe("forward shock at alpha = %.6g, beta = %.6g, t = %.10g", alpha_, beta_, t_)),
      alpha(alpha_),
      beta(beta_),
      t(t_) {}

LevelOutOfRange::LevelOutOfRange(double level_, double q_)
    : Error(describe("no real branch for level %.10g at q = %.6g", level_, q_, 0.0)),
      level(level_),
      q(q_) {}

}  // namespace shocklab
