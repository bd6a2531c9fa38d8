#include "shocklab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "shocklab/errors.hpp"

namespace shocklab {

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = at(i);
  return out;
}

UniformGrid UniformGrid::linspace(double lo, double hi, int count) {
  if (count < 1) throw InvalidArgument("grid needs at least one point");
  if (count == 1) return {lo, 1.0, 1};
  if (!(hi > lo)) throw InvalidArgument("grid needs max > min");
  return {lo, (hi - lo) / (count - 1), count};
}

UniformGrid UniformGrid::from_points(std::span<const double> pts) {
  if (pts.empty()) throw InvalidArgument("grid is empty");
  if (pts.size() == 1) return {pts[0], 1.0, 1};
  const double step = (pts.back() - pts.front()) / static_cast<double>(pts.size() - 1);
  if (!(step > 0.0)) throw NonUniformGrid("grid must be strictly increasing");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double expect = pts.front() + step * static_cast<double>(i);
    if (std::abs(pts[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
      throw NonUniformGrid("grid is not uniform near point " + std::to_string(i));
  }
  return {pts.front(), step, static_cast<int>(pts.size())};
}

std::vector<double> periodic_unit_grid(int n) {
  if (n < 1) throw InvalidArgument("periodic grid needs at least one point");
  std::vector<double> q(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) q[static_cast<std::size_t>(j)] = static_cast<double>(j) / n;
  return q;
}

double simpson_periodic(std::span<const double> f) {
  const std::size_t n = f.size();
  if (n < 2 || n % 2 != 0) throw InvalidArgument("periodic Simpson needs an even number of samples");
  double sum = 2.0 * f[0];  // endpoint q = 1 repeats q = 0
  for (std::size_t j = 1; j < n; ++j) sum += (j % 2 ? 4.0 : 2.0) * f[j];
  return sum / (3.0 * static_cast<double>(n));
}

double simpson(std::span<const double> f, double a, double b) {
  const std::size_t n = f.size() - 1;
  if (f.size() < 3 || n % 2 != 0) throw InvalidArgument("Simpson needs an odd number (>= 3) of samples");
  double sum = f.front() + f.back();
  for (std::size_t j = 1; j < n; ++j) sum += (j % 2 ? 4.0 : 2.0) * f[j];
  return sum * (b - a) / (3.0 * static_cast<double>(n));
}

}  // namespace shocklab
