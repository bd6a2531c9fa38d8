#include "shocklab/backward_construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "shocklab/characteristics.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/parallel.hpp"

namespace shocklab {

double admissibility_threshold(double T, AdmissibilityBound bound) {
  const double base = std::numbers::pi / T;
  return bound == AdmissibilityBound::strict ? 0.25 * base * base : base * base;
}

ConstructedFoliation construct(const PotentialSpec& pot, double T, std::span<const double> alpha_grid, int beta_count,
                               double dt, AdmissibilityBound bound) {
  if (!(T > 0.0)) throw InvalidArgument("cutoff time T must be positive");
  if (alpha_grid.empty() || beta_count < 2) throw InvalidArgument("construction needs alpha values and >= 2 betas");
  if (!vanishes_after(pot, T))
    throw NotCompactlySupported("potential does not vanish for t >= T = " + std::to_string(T));

  ConstructedFoliation cf;
  cf.T = T;
  cf.bound = bound;
  cf.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
  cf.beta_grid = periodic_unit_grid(beta_count);
  cf.threshold = admissibility_threshold(T, bound);
  cf.curvature_bound = curvature_bound(pot, 0.0, T);
  if (!(cf.curvature_bound < cf.threshold))
    throw BoundViolated("sup |u_qq| = " + std::to_string(cf.curvature_bound) +
                        " is not below the admissibility threshold " + std::to_string(cf.threshold));

  const double root_c = std::sqrt(cf.curvature_bound);
  cf.leaves.resize(alpha_grid.size());
  std::vector<double> margins(alpha_grid.size(), std::numeric_limits<double>::infinity());
  parallel_for(alpha_grid.size(), [&](std::size_t i) {
    ConstructedLeaf& leaf = cf.leaves[i];
    leaf.alpha = alpha_grid[i];
    leaf.jacobi_min = std::numeric_limits<double>::infinity();
    for (double beta : cf.beta_grid) {
      const Trajectory tr = flow(pot, CharPoint{beta, leaf.alpha, 1.0, 0.0, T}, 0.0, dt);
      if (!tr.events.empty())
        throw FoliationFailed("xi vanishes at t = " + std::to_string(tr.events.front().t) + " for alpha = " +
                              std::to_string(leaf.alpha) + ", beta = " + std::to_string(beta));
      for (const auto& s : tr.samples) {
        leaf.jacobi_min = std::min(leaf.jacobi_min, s.xi);
        margins[i] = std::min(margins[i], s.xi - std::cos(root_c * (T - s.t)));
      }
      const CharPoint& end = tr.samples.back();
      if (!(end.xi > 0.0))
        throw FoliationFailed("xi is not positive at t = 0 for alpha = " + std::to_string(leaf.alpha));
      leaf.initial.push_back({end.q, end.p, end.eta / end.xi});
    }
  });
  cf.jacobi_min = std::numeric_limits<double>::infinity();
  cf.comparison_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cf.leaves.size(); ++i) {
    cf.jacobi_min = std::min(cf.jacobi_min, cf.leaves[i].jacobi_min);
    cf.comparison_margin = std::min(cf.comparison_margin, margins[i]);
  }
  return cf;
}

ForwardVerification verify_no_forward_shock(const ConstructedFoliation& cf, const PotentialSpec& pot, double horizon,
                                            double dt) {
  if (!(horizon >= cf.T)) throw InvalidArgument("verification horizon must be at least T");
  ForwardVerification out;
  out.min_xi = std::numeric_limits<double>::infinity();
  std::vector<ForwardVerification> per_leaf(cf.leaves.size());
  parallel_for(cf.leaves.size(), [&](std::size_t i) {
    const ConstructedLeaf& leaf = cf.leaves[i];
    ForwardVerification& v = per_leaf[i];
    v.min_xi = std::numeric_limits<double>::infinity();
    std::vector<double> final_q;
    for (std::size_t j = 0; j < leaf.initial.size(); ++j) {
      const LeafSeed& s = leaf.initial[j];
      const Trajectory tr = flow(pot, CharPoint{s.q0, s.p0, 1.0, s.slope, 0.0}, horizon, dt);
      if (!tr.events.empty()) throw ForwardShockFound(leaf.alpha, cf.beta_grid[j], tr.events.front().t);
      for (const auto& p : tr.samples) {
        v.min_xi = std::min(v.min_xi, p.xi);
        if (p.t >= cf.T)
          v.max_line_deviation =
              std::max(v.max_line_deviation, std::abs(p.q - (leaf.alpha * (p.t - cf.T) + cf.beta_grid[j])));
      }
      final_q.push_back(tr.samples.back().q);
      ++v.characteristics;
    }
    for (std::size_t j = 0; j + 1 < final_q.size(); ++j)
      if (!(final_q[j] < final_q[j + 1])) v.ordered = false;
    if (!final_q.empty() && !(final_q.back() < final_q.front() + 1.0)) v.ordered = false;
  });
  for (const auto& v : per_leaf) {
    out.characteristics += v.characteristics;
    out.min_xi = std::min(out.min_xi, v.min_xi);
    out.max_line_deviation = std::max(out.max_line_deviation, v.max_line_deviation);
    out.ordered = out.ordered && v.ordered;
  }
  return out;
}

BackwardScan find_backward_shocks(const ConstructedFoliation& cf, const PotentialSpec& pot, double backward_horizon,
                                  double dt) {
  BackwardScan scan;
  scan.reports.resize(cf.leaves.size());
  parallel_for(cf.leaves.size(), [&](std::size_t i) {
    scan.reports[i] = scan_leaf(pot, cf.leaves[i].alpha, cf.leaves[i].initial, backward_horizon, dt,
                                ScanDirections{.forward = false, .backward = true});
  });
  const auto w = earliest_shock(scan.reports);
  if (!w)
    throw NoBackwardShockWithinHorizon("no leaf focuses within backward horizon " + std::to_string(backward_horizon));
  scan.witness = *w;
  return scan;
}

BackwardSearch backward_shock_search(const PotentialSpec& pot, double T, std::span<const double> alpha_grid,
                                     int beta_count, double backward_horizon, double dt, double alpha_cap,
                                     AdmissibilityBound bound) {
  std::vector<double> alphas(alpha_grid.begin(), alpha_grid.end());
  BackwardSearch out;
  for (;;) {
    out.foliation = construct(pot, T, alphas, beta_count, dt, bound);
    try {
      out.scan = find_backward_shocks(out.foliation, pot, backward_horizon, dt);
      return out;
    } catch (const NoBackwardShockWithinHorizon&) {
    }
    double widest = 0.0;
    for (double a : alphas) widest = std::max(widest, std::abs(a));
    if (!(widest > 0.0) || 2.0 * widest > alpha_cap) return out;
    for (double& a : alphas) a *= 2.0;
    ++out.widenings;
  }
}

}  // namespace shocklab
