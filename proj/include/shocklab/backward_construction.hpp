#pragma once

#include <optional>
#include <span>
#include <vector>

#include "shocklab/foliation.hpp"
#include "shocklab/potential.hpp"

namespace shocklab {

// Foliated initial data that never shocks forward in time, for potentials that
// switch off at t = T: each leaf collects the characteristics that move on the
// parallel lines q = alpha (t - T) + beta once the force is gone.

enum class AdmissibilityBound {
  strict,   // |u_qq| < (pi / (2T))^2, provable by comparison with cos(sqrt(c)(T - t))
  literal,  // |u_qq| < (pi / T)^2, foliation property then checked empirically
};

[[nodiscard]] double admissibility_threshold(double T, AdmissibilityBound bound);

struct ConstructedLeaf {
  double alpha = 0.0;
  std::vector<LeafSeed> initial;  // per beta: (q(0; beta), p(0; beta), leaf slope)
  double jacobi_min = 0.0;        // min over beta and t in [0, T] of xi_beta(t)
};

struct ConstructedFoliation {
  double T = 0.0;
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  std::vector<ConstructedLeaf> leaves;
  double jacobi_min = 0.0;
  double curvature_bound = 0.0;  // sup |u_qq| over [0, T] x [0, 1]
  double threshold = 0.0;
  AdmissibilityBound bound = AdmissibilityBound::strict;
  /// min over (alpha, beta, t) of xi_beta(t) - cos(sqrt(c) (T - t)), c = curvature_bound.
  /// Only meaningful while sqrt(c) T <= pi / 2.
  double comparison_margin = 0.0;
};

/// Integrates (q, p, xi, eta)(T) = (beta, alpha, 1, 0) back to t = 0 for every (alpha, beta),
/// beta = j / beta_count. Throws NotCompactlySupported, BoundViolated or FoliationFailed.
[[nodiscard]] ConstructedFoliation construct(const PotentialSpec& pot, double T, std::span<const double> alpha_grid,
                                             int beta_count, double dt,
                                             AdmissibilityBound bound = AdmissibilityBound::strict);

struct ForwardVerification {
  std::size_t characteristics = 0;
  double min_xi = 0.0;
  double max_line_deviation = 0.0;  // |q(t) - (alpha (t - T) + beta)| over sampled t >= T
  bool ordered = true;              // beta order of positions preserved at the horizon
};

/// Throws ForwardShockFound on any xi zero in (0, horizon].
[[nodiscard]] ForwardVerification verify_no_forward_shock(const ConstructedFoliation& cf, const PotentialSpec& pot,
                                                          double horizon, double dt);

struct BackwardScan {
  std::vector<ShockReport> reports;
  std::size_t witness = 0;  // leaf whose backward shock is closest to t = 0
};

/// Throws NoBackwardShockWithinHorizon when no leaf focuses in [-horizon, 0).
[[nodiscard]] BackwardScan find_backward_shocks(const ConstructedFoliation& cf, const PotentialSpec& pot,
                                                double backward_horizon, double dt);

struct BackwardSearch {
  ConstructedFoliation foliation;
  std::optional<BackwardScan> scan;  // empty: inconclusive, the alpha cap was reached
  int widenings = 0;
};

/// Runs construct + find_backward_shocks, doubling the alpha grid until a shock
/// is found or max |alpha| would exceed alpha_cap.
[[nodiscard]] BackwardSearch backward_shock_search(const PotentialSpec& pot, double T,
                                                   std::span<const double> alpha_grid, int beta_count,
                                                   double backward_horizon, double dt, double alpha_cap,
                                                   AdmissibilityBound bound = AdmissibilityBound::strict);

}  // namespace shocklab
