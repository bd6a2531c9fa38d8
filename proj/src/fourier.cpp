#include "shocklab/fourier.hpp"

#include <cmath>

namespace shocklab {

Jet FourierSeries::jet(double q) const {
  Jet out{mean, 0.0, 0.0};
  for (const auto& m : modes) {
    const double w = kTwoPi * m.k;
    const double c = std::cos(w * q);
    const double s = std::sin(w * q);
    const double v = m.cos * c + m.sin * s;
    out.value += v;
    out.d1 += w * (m.sin * c - m.cos * s);
    out.d2 -= w * w * v;
  }
  return out;
}

double FourierSeries::value(double q) const { return jet(q).value; }

double FourierSeries::oscillation_bound() const {
  double b = 0.0;
  for (const auto& m : modes) b += std::hypot(m.cos, m.sin);
  return b;
}

bool FourierSeries::is_zero() const {
  if (mean != 0.0) return false;
  for (const auto& m : modes)
    if (m.cos != 0.0 || m.sin != 0.0) return false;
  return true;
}

}  // namespace shocklab
