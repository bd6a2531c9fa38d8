#pragma once

#include <numbers>
#include <vector>

namespace shocklab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// One term a*cos(2 pi k q) + b*sin(2 pi k q).
struct FourierMode {
  int k = 1;
  double cos = 0.0;
  double sin = 0.0;
};

/// Value and first two q-derivatives of a periodic function.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Finite 1-periodic Fourier sum `mean + sum_k (a_k cos 2 pi k q + b_k sin 2 pi k q)`.
/// Derivatives in q are exact.
struct FourierSeries {
  double mean = 0.0;
  std::vector<FourierMode> modes;

  [[nodiscard]] Jet jet(double q) const;
  [[nodiscard]] double value(double q) const;
  /// Upper bound on sup_q |value - mean| from the coefficients.
  [[nodiscard]] double oscillation_bound() const;
  [[nodiscard]] bool is_zero() const;
};

}  // namespace shocklab
