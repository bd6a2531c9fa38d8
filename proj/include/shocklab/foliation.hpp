#pragma once

#include <optional>
#include <span>
#include <vector>

#include "shocklab/fourier.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/potential.hpp"

namespace shocklab {

/// Parametric foliated initial data
///   phi(alpha, q) = alpha + psi(q) + epsilon * sin(alpha) * chi(q),
/// 1-periodic in q, increasing in alpha whenever |epsilon * chi| < 1.
struct FoliationSpec {
  FourierSeries base_shift;      // psi
  FourierSeries alpha_coupling;  // chi
  double coupling = 0.0;         // epsilon
  std::vector<double> alpha_grid;
  int q_grid_size = 64;
};

/// phi and its first partial derivatives at (alpha, q).
struct LeafJet {
  double value = 0.0;
  double d_alpha = 0.0;
  double d_q = 0.0;
};

[[nodiscard]] LeafJet initial_leaf(const FoliationSpec& spec, double alpha, double q);

/// Label of the leaf passing through (q, p) at t = 0.
[[nodiscard]] double solve_alpha(const FoliationSpec& spec, double q, double p);

struct FoliationValidation {
  double min_d_alpha = 0.0;
  double at_alpha = 0.0;
  double at_q = 0.0;
};

/// Checks dphi/dalpha > 0 on alpha_grid x q-grid; throws MonotonicityViolation otherwise.
FoliationValidation validate(const FoliationSpec& spec);

/// Starting point of one characteristic of a leaf: position, height and slope of the leaf there.
struct LeafSeed {
  double q0 = 0.0;
  double p0 = 0.0;
  double slope = 0.0;
};

[[nodiscard]] std::vector<LeafSeed> leaf_seeds(const FoliationSpec& spec, double alpha);

enum class ShockStatus { no_shock_within_horizon, forward, backward, both };

[[nodiscard]] const char* to_string(ShockStatus s);

struct ShockReport {
  double alpha = 0.0;
  std::optional<double> forward_shock_time;   // in (0, horizon]
  std::optional<double> backward_shock_time;  // in [-horizon, 0)
  std::optional<double> shock_seed_q;         // seed of the shock closest to t = 0
  ShockStatus status = ShockStatus::no_shock_within_horizon;
};

struct ScanDirections {
  bool forward = true;
  bool backward = true;
};

/// Earliest forward and latest backward xi-zero over the seeds of one leaf.
[[nodiscard]] ShockReport scan_leaf(const PotentialSpec& pot, double alpha, std::span<const LeafSeed> seeds,
                                    double horizon, double dt, ScanDirections dirs = {});

/// Shock verdicts for every leaf in spec.alpha_grid, seeds at j / q_grid_size.
[[nodiscard]] std::vector<ShockReport> shock_scan(const FoliationSpec& spec, const PotentialSpec& pot, double horizon,
                                                  double dt, ScanDirections dirs = {});

/// Leaf with the shock closest to t = 0 (ties within 1e-9 go to the lower index).
[[nodiscard]] std::optional<std::size_t> earliest_shock(std::span<const ShockReport> reports);

/// Slope of the leaf through (p, q) at time t.
struct OmegaSample {
  bool valid = false;  // false: leaf label outside the sampled alpha range
  double omega = 0.0;
  double alpha = 0.0;
  double q0 = 0.0;
};

/// Follows the characteristic through (q, p, t) back to t = 0, identifies its
/// leaf, and carries the leaf slope forward with the variational equations.
/// Throws FoliationBroken when the characteristic has focused before t.
[[nodiscard]] OmegaSample omega_at(const FoliationSpec& spec, const PotentialSpec& pot, double p, double q, double t,
                                   double dt);

/// Height and slope of leaf alpha at position q and time t, found by shooting
/// over the initial position q0.
struct LeafPoint {
  double p = 0.0;
  double omega = 0.0;
  double q0 = 0.0;
};

[[nodiscard]] LeafPoint leaf_point(const FoliationSpec& spec, const PotentialSpec& pot, double alpha, double q,
                                   double t, double dt);

struct OmegaGrid {
  double t = 0.0;
  std::vector<double> p_grid;
  std::vector<double> q_grid;
  std::vector<double> omega;  // row-major, p index outer
  std::vector<char> mask;     // 1 where omega is valid

  [[nodiscard]] double at(std::size_t ip, std::size_t iq) const { return omega[ip * q_grid.size() + iq]; }
  [[nodiscard]] bool valid(std::size_t ip, std::size_t iq) const { return mask[ip * q_grid.size() + iq] != 0; }
};

/// Throws FoliationBroken if any sampled leaf shocks between 0 and t.
[[nodiscard]] OmegaGrid build_omega_grid(const FoliationSpec& spec, const PotentialSpec& pot, double t,
                                         std::span<const double> p_grid, std::span<const double> q_grid, double dt);

/// V1 = -int omega dq, V2 = int omega u_q dq, source = int omega^2 dq on a (p, t) grid.
struct FluxField {
  std::vector<double> p_grid;
  std::vector<double> t_grid;
  std::vector<double> v1;        // row-major, p index outer
  std::vector<double> v2;
  std::vector<double> source;
  std::vector<double> residual;  // NaN on the grid boundary

  [[nodiscard]] std::size_t index(std::size_t ip, std::size_t it) const { return ip * t_grid.size() + it; }
};

struct DivergenceReport {
  FluxField field;
  double max_residual = 0.0;
};

/// Residual of  -d/dt int omega dq + d/dp int omega u_q dq - int omega^2 dq
/// by central differences at interior (p, t) points. Grids must be uniform.
[[nodiscard]] DivergenceReport divergence_check(const FoliationSpec& spec, const PotentialSpec& pot,
                                                std::span<const double> p_grid, std::span<const double> t_grid,
                                                int q_count, double dt);

struct ConvergenceStudy {
  std::vector<double> steps;
  std::vector<double> max_residuals;
  std::vector<double> orders;  // log2 of successive residual ratios
  [[nodiscard]] double min_order() const;
};

/// (p, t) box on which the divergence residual is compared across refinements.
/// The coarse points p_lo + i*h0, t_lo + j*h0 belong to every level's grid.
struct ResidualBox {
  double p_lo = 0.0, p_hi = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
};

[[nodiscard]] ConvergenceStudy divergence_convergence(const FoliationSpec& spec, const PotentialSpec& pot,
                                                      const ResidualBox& box, double h0, int levels, int q_count,
                                                      double dt, DivergenceReport* finest = nullptr);

/// Max over (p, q) of the central-difference residual of
///   omega_t + p omega_q - u_q omega_p + omega^2 + u_qq
/// at time t with step h in all three variables.
[[nodiscard]] double pde_residual(const FoliationSpec& spec, const PotentialSpec& pot, double t,
                                  std::span<const double> p_grid, std::span<const double> q_grid, double h,
                                  double dt);

[[nodiscard]] ConvergenceStudy pde_convergence(const FoliationSpec& spec, const PotentialSpec& pot, double t,
                                               std::span<const double> p_grid, std::span<const double> q_grid,
                                               double h0, int levels, double dt);

}  // namespace shocklab
