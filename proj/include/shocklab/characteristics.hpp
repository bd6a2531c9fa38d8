#pragma once

// Newton characteristics q' = p, p' = -u_q(q,t) together with the Jacobi
// (variational) pair xi' = eta, eta' = -u_qq(q,t) xi. A zero of xi marks the
// focusing of neighbouring characteristics, i.e. a shock of the leaf.

#include <cmath>
#include <concepts>
#include <optional>
#include <utility>
#include <vector>

#include "shocklab/errors.hpp"
#include "shocklab/potential.hpp"

namespace shocklab {

/// q is kept unwrapped; reduce mod 1 only when reporting.
struct CharPoint {
  double q = 0.0;
  double p = 0.0;
  double xi = 1.0;
  double eta = 0.0;
  double t = 0.0;
};

enum class EventKind { xi_zero };

struct FlowEvent {
  double t = 0.0;
  EventKind kind = EventKind::xi_zero;
};

struct Trajectory {
  std::vector<CharPoint> samples;  // monotone in t, in integration order
  double dt = 0.0;
  std::vector<FlowEvent> events;   // in integration order
};

struct FlowOptions {
  bool stop_at_first_event = false;
  /// When false only the first and last samples are kept.
  bool record_samples = true;
};

template <class M>
concept ForceModel = requires(const M& m, double q, double t) {
  { sample_force(m, q, t) } -> std::same_as<ForceSample>;
};

namespace detail {

template <ForceModel M>
CharPoint rk4_step(const M& model, const CharPoint& s, double h) {
  struct D {
    double q, p, xi, eta;
  };
  auto rhs = [&](double q, double p, double xi, double eta, double t) {
    const ForceSample f = sample_force(model, q, t);
    return D{p, -f.force, eta, -f.curvature * xi};
  };
  const double hh = 0.5 * h;
  const D k1 = rhs(s.q, s.p, s.xi, s.eta, s.t);
  const D k2 = rhs(s.q + hh * k1.q, s.p + hh * k1.p, s.xi + hh * k1.xi, s.eta + hh * k1.eta, s.t + hh);
  const D k3 = rhs(s.q + hh * k2.q, s.p + hh * k2.p, s.xi + hh * k2.xi, s.eta + hh * k2.eta, s.t + hh);
  const D k4 = rhs(s.q + h * k3.q, s.p + h * k3.p, s.xi + h * k3.xi, s.eta + h * k3.eta, s.t + h);
  const double w = h / 6.0;
  return {s.q + w * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
          s.p + w * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
          s.xi + w * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi),
          s.eta + w * (k1.eta + 2.0 * k2.eta + 2.0 * k3.eta + k4.eta),
          s.t + h};
}

inline constexpr double kEventBracket = 1e-10;

/// Locates the xi zero inside the step from `a` (signed length h) by bisection
/// on a single shortened RK4 step from `a`, finishing with one secant update.
template <ForceModel M>
double refine_xi_zero(const M& model, const CharPoint& a, double h) {
  double lo = 0.0, hi = std::abs(h);
  const double dir = h > 0 ? 1.0 : -1.0;
  double g_lo = a.xi;
  double g_hi = rk4_step(model, a, h).xi;
  if (g_hi == 0.0) return a.t + h;
  while (hi - lo > kEventBracket) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = rk4_step(model, a, dir * mid).xi;
    if (g_mid == 0.0) return a.t + dir * mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }
  const double s = lo + (hi - lo) * g_lo / (g_lo - g_hi);
  return a.t + dir * s;
}

inline bool is_finite(const CharPoint& s) {
  return std::isfinite(s.q) && std::isfinite(s.p) && std::isfinite(s.xi) && std::isfinite(s.eta) &&
         std::isfinite(s.t);
}

}  // namespace detail

/// Classical fixed-step RK4 from `start.t` to `t_end` (backward when t_end < start.t).
/// The last step is shortened so the final sample sits exactly at t_end.
template <ForceModel M>
Trajectory flow(const M& model, const CharPoint& start, double t_end, double dt, FlowOptions opts = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("flow: dt must be positive and finite");
  if (!detail::is_finite(start) || !std::isfinite(t_end)) throw InvalidArgument("flow: non-finite start state");
  if (t_end == start.t) throw InvalidArgument("flow: t_end equals the start time");

  const double span = t_end - start.t;
  const double dir = span > 0 ? 1.0 : -1.0;
  const auto steps = static_cast<long>(std::ceil(std::abs(span) / dt * (1.0 - 1e-12)));

  Trajectory traj;
  traj.dt = dt;
  if (opts.record_samples) traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  traj.samples.push_back(start);

  CharPoint cur = start;
  for (long k = 1; k <= steps; ++k) {
    const double t_next = (k == steps) ? t_end : start.t + dir * static_cast<double>(k) * dt;
    const double h = t_next - cur.t;
    CharPoint next = detail::rk4_step(model, cur, h);
    next.t = t_next;

    const bool crossed = cur.xi != 0.0 && (next.xi == 0.0 || ((next.xi > 0.0) != (cur.xi > 0.0)));
    if (crossed) traj.events.push_back({detail::refine_xi_zero(model, cur, h), EventKind::xi_zero});

    cur = next;
    if (opts.record_samples) traj.samples.push_back(cur);
    if (crossed && opts.stop_at_first_event) break;
  }
  if (!opts.record_samples) traj.samples.push_back(cur);
  return traj;
}

/// Time of the first sign change of xi along the trajectory, if any.
[[nodiscard]] std::optional<double> first_xi_zero(const Trajectory& traj);

/// omega = eta / xi at every sample where |xi| > 1e-12.
struct OmegaSeries {
  std::vector<std::pair<double, double>> values;  // (t, omega)
  std::vector<double> omitted;                    // sample times dropped because xi ~ 0
};

[[nodiscard]] OmegaSeries omega_along(const Trajectory& traj);

/// q reduced to [0, 1).
[[nodiscard]] double wrap_unit(double q);

}  // namespace shocklab
