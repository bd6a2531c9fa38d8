#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace shocklab {

// Analytic planar vector fields with exact divergence.

struct ZeroField {};

/// V = (a x + b y, c x + d y)
struct LinearField {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
};

/// V = g(r) * (amp (x, y) + swirl (-y, x)),  g = exp(-r^2 / (2 sigma^2))
struct GaussianField {
  double amp = 1.0;
  double swirl = 0.0;
  double sigma = 1.0;
};

/// V = (c1 x + c3 x^3 - s y,  c1 y + c3 y^3 + s x)
struct CubicField {
  double c1 = 0.0;
  double c3 = 1.0;
  double s = 0.0;
};

using FieldShape = std::variant<ZeroField, LinearField, GaussianField, CubicField>;

struct PlanarField {
  FieldShape shape;
  double C = 1.0;  // constant in div V >= C |V|^2
};

struct Vec2 {
  double x = 0.0, y = 0.0;
};

[[nodiscard]] Vec2 field_value(const FieldShape& f, double x, double y);
[[nodiscard]] double field_divergence(const FieldShape& f, double x, double y);
[[nodiscard]] std::string field_name(const FieldShape& f);

/// Circle integrals over S_r: flux of V through S_r, of div V, and of |V|^2.
struct FluxProfile {
  std::vector<double> radii;
  std::vector<double> phi;
  std::vector<double> ring_div;
  std::vector<double> ring_norm;
  std::vector<double> cs_slack;  // ring_norm - phi^2 / (2 pi r), never negative in exact arithmetic
};

[[nodiscard]] FluxProfile flux_profile(const PlanarField& field, std::span<const double> radii, int n_angular = 256);

/// Largest |dphi/dr - ring_div| at interior radii, dphi/dr by central differences.
/// Radii must be uniform.
[[nodiscard]] double flux_derivative_residual(const FluxProfile& profile);

struct ComparisonReport {
  double r0 = 0.0, r1 = 0.0;
  bool applicable = true;                  // div V >= C |V|^2 on the whole annulus
  std::optional<double> failure_radius;    // smallest radius where it fails
  double min_pointwise_slack = 0.0;        // min of div V - C |V|^2 over the checked annulus
  double min_ode_slack = 0.0;              // min of phi' - C phi^2 / (2 pi r) where applicable
  std::optional<double> blowup_radius;     // r0 exp(2 pi / (C phi(r0))) when phi(r0) > 0
  double ode_integration_error = 0.0;      // RK4 vs closed form for psi' = C psi^2 / (2 pi r)
  FluxProfile profile;
};

/// Checks the planar inequality on [r0, r1], the derived radial inequality
/// phi' >= C phi^2 / (2 pi r) where it applies, and the comparison ODE.
[[nodiscard]] ComparisonReport comparison_ode_check(const PlanarField& field, double r0, double r1,
                                                    int n_radial = 401, int n_angular = 256);

/// Blow-up radius of psi' = C psi^2 / (2 pi r), psi(r0) = psi0 > 0.
[[nodiscard]] double comparison_blowup_radius(double psi0, double C, double r0);

/// RK4 solution of the comparison ODE at r1 (must lie before the blow-up radius).
[[nodiscard]] double integrate_comparison_ode(double psi0, double C, double r0, double r1, int steps);

}  // namespace shocklab
