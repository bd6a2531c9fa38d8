#include "shocklab/characteristics.hpp"

namespace shocklab {

std::optional<double> first_xi_zero(const Trajectory& traj) {
  for (const auto& e : traj.events)
    if (e.kind == EventKind::xi_zero) return e.t;
  return std::nullopt;
}

OmegaSeries omega_along(const Trajectory& traj) {
  OmegaSeries out;
  out.values.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    if (std::abs(s.xi) > 1e-12)
      out.values.emplace_back(s.t, s.eta / s.xi);
    else
      out.omitted.push_back(s.t);
  }
  return out;
}

double wrap_unit(double q) {
  double r = q - std::floor(q);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace shocklab
