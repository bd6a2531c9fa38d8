#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "shocklab/foliation.hpp"
#include "shocklab/fourier.hpp"
#include "shocklab/potential.hpp"

namespace shocklab {

/// State of the system (u_k)_t = (n-k+1) u_{k-1} (u_1)_q - (u_{k+1})_q, k = 1..n,
/// with u_0 a constant and u_{n+1} = 0. Components are Fourier sums in q.
struct StateU {
  int n = 2;
  double u0 = 0.0;
  std::vector<FourierSeries> components;  // u_1 .. u_n

  /// Throws InvalidArgument unless n is even, >= 2, and matches the component count.
  void check() const;
};

/// Polynomial in p with ascending coefficients.
struct Polynomial {
  std::vector<double> coeffs;

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] Polynomial derivative() const;
};

/// F = p^{n+1}/(n+1) + u0 p^n + u_1(q) p^{n-1} + ... + u_n(q) at position q.
[[nodiscard]] Polynomial conserved_polynomial(const StateU& state, double q);

/// Row k holds (n-k+1) u_{k-1} in column 1 and -1 in column k+1, so U_t = A(U) U_q.
[[nodiscard]] Eigen::MatrixXd build_A(const StateU& state, double q);

/// Ascending coefficients in lambda of det(A - lambda I), by Faddeev-LeVerrier.
[[nodiscard]] std::vector<double> characteristic_coefficients(const Eigen::MatrixXd& A);

/// Ascending coefficients in lambda of F_p(-lambda).
[[nodiscard]] std::vector<double> fp_reflected_coefficients(const StateU& state, double q);

/// max |coefficient difference| between det(A - lambda I) and F_p(-lambda).
[[nodiscard]] double charpoly_identity(const StateU& state, double q);

/// Number of distinct real roots, by a Sturm sequence.
[[nodiscard]] int count_real_roots(const Polynomial& poly);

struct EllipticityReport {
  std::vector<double> q_grid;
  std::vector<double> min_imag;     // per q, smallest |Im lambda| over eigenvalues of A
  std::vector<int> real_root_count; // per q, real roots of F_p (Sturm)
  double min_imag_overall = 0.0;
  bool elliptic = false;
  std::vector<double> failing_q;    // q where min |Im lambda| <= tolerance
};

inline constexpr double kEllipticTolerance = 1e-10;

[[nodiscard]] EllipticityReport ellipticity(const StateU& state, std::span<const double> q_grid);

/// (u_k)_t for k = 1..n, reduced algebraically through the system at position q.
[[nodiscard]] std::vector<double> time_derivatives(const StateU& state, double q);

struct TransportReport {
  double max_abs = 0.0;
  double max_rel = 0.0;  // residual over the magnitude of the largest term
};

/// F_t + p F_q - (u_1)_q F_p on the (p, q) grid. An exact identity: only rounding remains.
[[nodiscard]] TransportReport transport_residual(const StateU& state, std::span<const double> p_grid,
                                                 std::span<const double> q_grid);

/// E(t) = int u_1^gamma dq and its time derivatives for n = 2.
struct ConcavityReport {
  double E = 0.0;
  double E_dot = 0.0;
  double E_ddot_formula = 0.0;    // integrand (u1_t)^2 - 2 u0 u1_t u1_q + (u1_q)^2
  double E_ddot_oracle = 0.0;     // second time derivative reduced through the system
  double E_ddot_weighted = 0.0;   // integrand (u1_t)^2 - 2 u0 u1_t u1_q + u1 (u1_q)^2
  double discrepancy = 0.0;       // |formula - oracle|
  double weighted_discrepancy = 0.0;
};

/// Throws EllipticityViolated unless u_1 > u0^2 and u_1 > 0 on the grid.
[[nodiscard]] ConcavityReport e_concavity_n2(const StateU& state, double gamma, int q_count = 256);

struct ExtractedLeaves {
  std::vector<double> levels;
  std::vector<double> q_grid;
  std::vector<std::vector<LeafSeed>> leaves;  // per level: (q, p, dp/dq)
  double max_level_error = 0.0;               // max |F(p, q) - c|
  bool ordered = true;                        // p increasing with the level at every q
};

/// Solves F(p, q) = c for the real branch at every q. Throws NotElliptic or LevelOutOfRange.
[[nodiscard]] ExtractedLeaves extract_leaves(const StateU& state, std::span<const double> levels,
                                             std::span<const double> q_grid);

/// Time-frozen potential u = u_1(q) (constant envelope; the mean is dropped).
[[nodiscard]] PotentialSpec potential_from_component(const FourierSeries& u1);

}  // namespace shocklab
