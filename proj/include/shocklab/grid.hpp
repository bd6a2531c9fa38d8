#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace shocklab {

/// Uniform 1-D grid `min + i * step`, i = 0..count-1.
struct UniformGrid {
  double min = 0.0;
  double step = 1.0;
  int count = 1;

  [[nodiscard]] double at(int i) const { return min + step * i; }
  [[nodiscard]] double max() const { return at(count - 1); }
  [[nodiscard]] std::vector<double> points() const;

  /// `count` points from lo to hi inclusive.
  static UniformGrid linspace(double lo, double hi, int count);
  /// Throws NonUniformGrid unless the points are equally spaced to 1e-9 relative.
  static UniformGrid from_points(std::span<const double> pts);
};

/// Periodic grid j / n on [0, 1).
[[nodiscard]] std::vector<double> periodic_unit_grid(int n);

/// Composite Simpson over one period from samples at j/n, j = 0..n-1 (n even).
[[nodiscard]] double simpson_periodic(std::span<const double> samples);

/// Composite Simpson over [a, b] from n+1 samples (n even).
[[nodiscard]] double simpson(std::span<const double> samples, double a, double b);

}  // namespace shocklab
