#include "shocklab/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shocklab/characteristics.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/parallel.hpp"

namespace shocklab {

LeafJet initial_leaf(const FoliationSpec& spec, double alpha, double q) {
  const Jet psi = spec.base_shift.jet(q);
  LeafJet out{alpha + psi.value, 1.0, psi.d1};
  if (spec.coupling != 0.0) {
    const Jet chi = spec.alpha_coupling.jet(q);
    const double s = std::sin(alpha), c = std::cos(alpha);
    out.value += spec.coupling * s * chi.value;
    out.d_alpha += spec.coupling * c * chi.value;
    out.d_q += spec.coupling * s * chi.d1;
  }
  return out;
}

double solve_alpha(const FoliationSpec& spec, double q, double p) {
  const double shift = spec.base_shift.value(q);
  const double wobble = spec.coupling == 0.0 ? 0.0 : std::abs(spec.coupling * spec.alpha_coupling.value(q));
  double lo = p - shift - wobble;
  double hi = p - shift + wobble;
  if (wobble == 0.0) return lo;

  double alpha = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const LeafJet j = initial_leaf(spec, alpha, q);
    const double g = j.value - p;
    if (g == 0.0) return alpha;
    (g > 0.0 ? hi : lo) = alpha;
    double next = alpha - g / j.d_alpha;
    if (!(j.d_alpha > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - alpha) <= 1e-15 * std::max(1.0, std::abs(alpha))) return next;
    alpha = next;
  }
  return alpha;
}

FoliationValidation validate(const FoliationSpec& spec) {
  if (spec.alpha_grid.empty() || spec.q_grid_size < 1) throw InvalidArgument("foliation grids must be nonempty");
  FoliationValidation out{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (double alpha : spec.alpha_grid) {
    for (double q : periodic_unit_grid(spec.q_grid_size)) {
      const double d = initial_leaf(spec, alpha, q).d_alpha;
      if (d < out.min_d_alpha) out = {d, alpha, q};
    }
  }
  if (!(out.min_d_alpha > 0.0)) throw MonotonicityViolation(out.at_alpha, out.at_q, out.min_d_alpha);
  return out;
}

std::vector<LeafSeed> leaf_seeds(const FoliationSpec& spec, double alpha) {
  std::vector<LeafSeed> seeds;
  seeds.reserve(static_cast<std::size_t>(spec.q_grid_size));
  for (double q : periodic_unit_grid(spec.q_grid_size)) {
    const LeafJet j = initial_leaf(spec, alpha, q);
    seeds.push_back({q, j.value, j.d_q});
  }
  return seeds;
}

const char* to_string(ShockStatus s) {
  switch (s) {
    case ShockStatus::no_shock_within_horizon: return "no_shock_within_horizon";
    case ShockStatus::forward: return "forward";
    case ShockStatus::backward: return "backward";
    case ShockStatus::both: return "both";
  }
  return "?";
}

ShockReport scan_leaf(const PotentialSpec& pot, double alpha, std::span<const LeafSeed> seeds, double horizon,
                      double dt, ScanDirections dirs) {
  if (!(horizon > 0.0)) throw InvalidArgument("shock scan horizon must be positive");
  const FlowOptions opts{.stop_at_first_event = true, .record_samples = false};
  ShockReport rep;
  rep.alpha = alpha;
  std::optional<double> fwd_seed, bwd_seed;
  for (const auto& s : seeds) {
    const CharPoint start{s.q0, s.p0, 1.0, s.slope, 0.0};
    if (dirs.forward) {
      if (auto tz = first_xi_zero(flow(pot, start, horizon, dt, opts));
          tz && *tz > 0.0 && (!rep.forward_shock_time || *tz < *rep.forward_shock_time)) {
        rep.forward_shock_time = tz;
        fwd_seed = s.q0;
      }
    }
    if (dirs.backward) {
      if (auto tz = first_xi_zero(flow(pot, start, -horizon, dt, opts));
          tz && *tz < 0.0 && (!rep.backward_shock_time || *tz > *rep.backward_shock_time)) {
        rep.backward_shock_time = tz;
        bwd_seed = s.q0;
      }
    }
  }
  if (rep.forward_shock_time && rep.backward_shock_time) {
    rep.status = ShockStatus::both;
    rep.shock_seed_q = *rep.forward_shock_time <= -*rep.backward_shock_time ? fwd_seed : bwd_seed;
  } else if (rep.forward_shock_time) {
    rep.status = ShockStatus::forward;
    rep.shock_seed_q = fwd_seed;
  } else if (rep.backward_shock_time) {
    rep.status = ShockStatus::backward;
    rep.shock_seed_q = bwd_seed;
  }
  return rep;
}

std::vector<ShockReport> shock_scan(const FoliationSpec& spec, const PotentialSpec& pot, double horizon, double dt,
                                    ScanDirections dirs) {
  validate(spec);
  std::vector<ShockReport> reports(spec.alpha_grid.size());
  parallel_for(reports.size(), [&](std::size_t i) {
    const double alpha = spec.alpha_grid[i];
    const auto seeds = leaf_seeds(spec, alpha);
    reports[i] = scan_leaf(pot, alpha, seeds, horizon, dt, dirs);
  });
  return reports;
}

std::optional<std::size_t> earliest_shock(std::span<const ShockReport> reports) {
  std::optional<std::size_t> best;
  double best_time = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    double t = std::numeric_limits<double>::infinity();
    if (reports[i].forward_shock_time) t = *reports[i].forward_shock_time;
    if (reports[i].backward_shock_time) t = std::min(t, -*reports[i].backward_shock_time);
    if (t < best_time - 1e-9) {
      best_time = t;
      best = i;
    }
  }
  return best;
}

namespace {

std::pair<double, double> alpha_range(const FoliationSpec& spec) {
  if (spec.alpha_grid.empty()) throw InvalidArgument("foliation alpha grid is empty");
  const auto [lo, hi] = std::minmax_element(spec.alpha_grid.begin(), spec.alpha_grid.end());
  return {*lo, *hi};
}

// No sampled leaf may focus anywhere in [t_min, t_max] (which contains 0).
void require_shock_free(const FoliationSpec& spec, const PotentialSpec& pot, double t_min, double t_max, double dt) {
  const auto check = [&](double horizon, bool forward) {
    if (!(horizon > 0.0)) return;
    for (const auto& r : shock_scan(spec, pot, horizon, dt, {forward, !forward})) {
      if (r.status != ShockStatus::no_shock_within_horizon) {
        const double ts = forward ? *r.forward_shock_time : *r.backward_shock_time;
        throw FoliationBroken("leaf alpha = " + std::to_string(r.alpha) + " shocks at t = " + std::to_string(ts) +
                              " inside the requested time window");
      }
    }
  };
  check(t_max, true);
  check(-t_min, false);
}

}  // namespace

OmegaSample omega_at(const FoliationSpec& spec, const PotentialSpec& pot, double p, double q, double t, double dt) {
  const auto [a_lo, a_hi] = alpha_range(spec);
  OmegaSample out;
  double q0 = q, p0 = p;
  if (t != 0.0) {
    const FlowOptions opts{.stop_at_first_event = false, .record_samples = false};
    const CharPoint back = flow(pot, CharPoint{q, p, 1.0, 0.0, t}, 0.0, dt, opts).samples.back();
    q0 = back.q;
    p0 = back.p;
  }
  out.q0 = q0;
  out.alpha = solve_alpha(spec, q0, p0);
  out.valid = out.alpha >= a_lo - 1e-12 && out.alpha <= a_hi + 1e-12;
  const double slope0 = initial_leaf(spec, out.alpha, q0).d_q;
  if (t == 0.0) {
    out.omega = slope0;
    return out;
  }
  const FlowOptions opts{.stop_at_first_event = true, .record_samples = false};
  const Trajectory fwd = flow(pot, CharPoint{q0, p0, 1.0, slope0, 0.0}, t, dt, opts);
  const CharPoint& end = fwd.samples.back();
  if (!fwd.events.empty() || !(end.xi > 0.0))
    throw FoliationBroken("characteristic through (p = " + std::to_string(p) + ", q = " + std::to_string(q) +
                          ") focuses before t = " + std::to_string(t));
  out.omega = end.eta / end.xi;
  return out;
}

LeafPoint leaf_point(const FoliationSpec& spec, const PotentialSpec& pot, double alpha, double q, double t,
                     double dt) {
  double q0 = q - initial_leaf(spec, alpha, q).value * t;
  if (t == 0.0) {
    const LeafJet j = initial_leaf(spec, alpha, q);
    return {j.value, j.d_q, q};
  }
  const FlowOptions opts{.stop_at_first_event = true, .record_samples = false};
  for (int it = 0; it < 60; ++it) {
    const LeafJet j = initial_leaf(spec, alpha, q0);
    const Trajectory tr = flow(pot, CharPoint{q0, j.value, 1.0, j.d_q, 0.0}, t, dt, opts);
    const CharPoint& end = tr.samples.back();
    if (!tr.events.empty() || !(end.xi > 0.0))
      throw FoliationBroken("leaf alpha = " + std::to_string(alpha) + " has focused before t = " + std::to_string(t));
    const double miss = end.q - q;
    if (std::abs(miss) < 1e-14 || it == 59) return {end.p, end.eta / end.xi, q0};
    q0 -= miss / end.xi;
  }
  return {};
}

OmegaGrid build_omega_grid(const FoliationSpec& spec, const PotentialSpec& pot, double t,
                           std::span<const double> p_grid, std::span<const double> q_grid, double dt) {
  validate(spec);
  require_shock_free(spec, pot, std::min(t, 0.0), std::max(t, 0.0), dt);
  OmegaGrid g;
  g.t = t;
  g.p_grid.assign(p_grid.begin(), p_grid.end());
  g.q_grid.assign(q_grid.begin(), q_grid.end());
  const std::size_t nq = q_grid.size();
  g.omega.assign(p_grid.size() * nq, std::numeric_limits<double>::quiet_NaN());
  g.mask.assign(p_grid.size() * nq, 0);
  parallel_for(g.omega.size(), [&](std::size_t idx) {
    const OmegaSample s = omega_at(spec, pot, p_grid[idx / nq], q_grid[idx % nq], t, dt);
    if (s.valid) {
      g.omega[idx] = s.omega;
      g.mask[idx] = 1;
    }
  });
  return g;
}

DivergenceReport divergence_check(const FoliationSpec& spec, const PotentialSpec& pot, std::span<const double> p_grid,
                                  std::span<const double> t_grid, int q_count, double dt) {
  const UniformGrid pg = UniformGrid::from_points(p_grid);
  const UniformGrid tg = UniformGrid::from_points(t_grid);
  validate(spec);
  require_shock_free(spec, pot, std::min(tg.min, 0.0), std::max(tg.max(), 0.0), dt);

  const auto qs = periodic_unit_grid(q_count);
  DivergenceReport rep;
  FluxField& f = rep.field;
  f.p_grid.assign(p_grid.begin(), p_grid.end());
  f.t_grid.assign(t_grid.begin(), t_grid.end());
  const std::size_t np = p_grid.size(), nt = t_grid.size();
  f.v1.assign(np * nt, 0.0);
  f.v2.assign(np * nt, 0.0);
  f.source.assign(np * nt, 0.0);
  f.residual.assign(np * nt, std::numeric_limits<double>::quiet_NaN());

  parallel_for(np * nt, [&](std::size_t idx) {
    const double p = p_grid[idx / nt], t = t_grid[idx % nt];
    std::vector<double> w(qs.size()), wf(qs.size()), w2(qs.size());
    for (std::size_t j = 0; j < qs.size(); ++j) {
      const OmegaSample s = omega_at(spec, pot, p, qs[j], t, dt);
      if (!s.valid)
        throw CoverageGap("no sampled leaf through (p = " + std::to_string(p) + ", q = " + std::to_string(qs[j]) +
                          ", t = " + std::to_string(t) + ")");
      w[j] = s.omega;
      wf[j] = s.omega * eval_force(pot, qs[j], t);
      w2[j] = s.omega * s.omega;
    }
    f.v1[idx] = -simpson_periodic(w);
    f.v2[idx] = simpson_periodic(wf);
    f.source[idx] = simpson_periodic(w2);
  });

  for (std::size_t ip = 1; ip + 1 < np; ++ip) {
    for (std::size_t it = 1; it + 1 < nt; ++it) {
      const double dv1_dt = (f.v1[f.index(ip, it + 1)] - f.v1[f.index(ip, it - 1)]) / (2.0 * tg.step);
      const double dv2_dp = (f.v2[f.index(ip + 1, it)] - f.v2[f.index(ip - 1, it)]) / (2.0 * pg.step);
      const double r = std::abs(dv1_dt + dv2_dp - f.source[f.index(ip, it)]);
      f.residual[f.index(ip, it)] = r;
      rep.max_residual = std::max(rep.max_residual, r);
    }
  }
  return rep;
}

double ConvergenceStudy::min_order() const {
  if (orders.empty()) return std::numeric_limits<double>::quiet_NaN();
  return *std::min_element(orders.begin(), orders.end());
}

namespace {

void fill_orders(ConvergenceStudy& study) {
  for (std::size_t i = 0; i + 1 < study.max_residuals.size(); ++i)
    study.orders.push_back(std::log2(study.max_residuals[i] / study.max_residuals[i + 1]));
}

int coarse_count(double lo, double hi, double h0) {
  const double n = (hi - lo) / h0;
  const long r = std::lround(n);
  if (r < 0 || std::abs(n - static_cast<double>(r)) > 1e-9) throw InvalidArgument("box edge is not a multiple of h0");
  return static_cast<int>(r) + 1;
}

}  // namespace

ConvergenceStudy divergence_convergence(const FoliationSpec& spec, const PotentialSpec& pot, const ResidualBox& box,
                                        double h0, int levels, int q_count, double dt, DivergenceReport* finest) {
  if (levels < 2) throw InvalidArgument("a convergence study needs at least two levels");
  const int np0 = coarse_count(box.p_lo, box.p_hi, h0);
  const int nt0 = coarse_count(box.t_lo, box.t_hi, h0);
  ConvergenceStudy study;
  for (int level = 0; level < levels; ++level) {
    const int stride = 1 << level;
    const double h = h0 / stride;
    const auto pg = UniformGrid{box.p_lo - h, h, (np0 - 1) * stride + 3}.points();
    const auto tg = UniformGrid{box.t_lo - h, h, (nt0 - 1) * stride + 3}.points();
    DivergenceReport rep = divergence_check(spec, pot, pg, tg, q_count, dt);
    double worst = 0.0;
    for (int i = 0; i < np0; ++i)
      for (int j = 0; j < nt0; ++j)
        worst = std::max(worst, rep.field.residual[rep.field.index(static_cast<std::size_t>(1 + i * stride),
                                                                   static_cast<std::size_t>(1 + j * stride))]);
    study.steps.push_back(h);
    study.max_residuals.push_back(worst);
    if (finest != nullptr && level == levels - 1) *finest = std::move(rep);
  }
  fill_orders(study);
  return study;
}

namespace {

double pde_residual_unchecked(const FoliationSpec& spec, const PotentialSpec& pot, double t,
                              std::span<const double> p_grid, std::span<const double> q_grid, double h, double dt) {
  const std::size_t nq = q_grid.size();
  std::vector<double> res(p_grid.size() * nq, -1.0);
  parallel_for(res.size(), [&](std::size_t idx) {
    const double p = p_grid[idx / nq], q = q_grid[idx % nq];
    const auto w = [&](double pp, double qq, double tt) { return omega_at(spec, pot, pp, qq, tt, dt); };
    const OmegaSample c = w(p, q, t);
    const OmegaSample tp = w(p, q, t + h), tm = w(p, q, t - h);
    const OmegaSample qp = w(p, q + h, t), qm = w(p, q - h, t);
    const OmegaSample pp = w(p + h, q, t), pm = w(p - h, q, t);
    if (!(c.valid && tp.valid && tm.valid && qp.valid && qm.valid && pp.valid && pm.valid)) return;
    const ForceSample f = sample_force(pot, q, t);
    const double r = (tp.omega - tm.omega) / (2 * h) + p * (qp.omega - qm.omega) / (2 * h) -
                     f.force * (pp.omega - pm.omega) / (2 * h) + c.omega * c.omega + f.curvature;
    res[idx] = std::abs(r);
  });
  const double worst = *std::max_element(res.begin(), res.end());
  if (worst < 0.0) throw CoverageGap("no grid point has a fully covered stencil");
  return worst;
}

}  // namespace

double pde_residual(const FoliationSpec& spec, const PotentialSpec& pot, double t, std::span<const double> p_grid,
                    std::span<const double> q_grid, double h, double dt) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  validate(spec);
  require_shock_free(spec, pot, std::min(t - h, 0.0), std::max(t + h, 0.0), dt);
  return pde_residual_unchecked(spec, pot, t, p_grid, q_grid, h, dt);
}

ConvergenceStudy pde_convergence(const FoliationSpec& spec, const PotentialSpec& pot, double t,
                                 std::span<const double> p_grid, std::span<const double> q_grid, double h0,
                                 int levels, double dt) {
  if (levels < 2) throw InvalidArgument("a convergence study needs at least two levels");
  validate(spec);
  require_shock_free(spec, pot, std::min(t - h0, 0.0), std::max(t + h0, 0.0), dt);
  ConvergenceStudy study;
  for (int level = 0; level < levels; ++level) {
    const double h = h0 / (1 << level);
    study.steps.push_back(h);
    study.max_residuals.push_back(pde_residual_unchecked(spec, pot, t, p_grid, q_grid, h, dt));
  }
  fill_orders(study);
  return study;
}

}  // namespace shocklab
