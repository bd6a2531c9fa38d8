#include "shocklab/integral_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shocklab/errors.hpp"
#include "shocklab/fourier.hpp"
#include "shocklab/grid.hpp"

namespace shocklab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Vec2 field_value(const FieldShape& f, double x, double y) {
  return std::visit(overloaded{
                        [](const ZeroField&) { return Vec2{}; },
                        [&](const LinearField& l) { return Vec2{l.a * x + l.b * y, l.c * x + l.d * y}; },
                        [&](const GaussianField& g) {
                          const double w = std::exp(-(x * x + y * y) / (2.0 * g.sigma * g.sigma));
                          return Vec2{w * (g.amp * x - g.swirl * y), w * (g.amp * y + g.swirl * x)};
                        },
                        [&](const CubicField& c) {
                          return Vec2{c.c1 * x + c.c3 * x * x * x - c.s * y, c.c1 * y + c.c3 * y * y * y + c.s * x};
                        },
                    },
                    f);
}

double field_divergence(const FieldShape& f, double x, double y) {
  return std::visit(overloaded{
                        [](const ZeroField&) { return 0.0; },
                        [](const LinearField& l) { return l.a + l.d; },
                        [&](const GaussianField& g) {
                          const double r2 = x * x + y * y, s2 = g.sigma * g.sigma;
                          return g.amp * std::exp(-r2 / (2.0 * s2)) * (2.0 - r2 / s2);
                        },
                        [&](const CubicField& c) { return 2.0 * c.c1 + 3.0 * c.c3 * (x * x + y * y); },
                    },
                    f);
}

std::string field_name(const FieldShape& f) {
  return std::visit(overloaded{
                        [](const ZeroField&) { return std::string("zero"); },
                        [](const LinearField&) { return std::string("linear"); },
                        [](const GaussianField&) { return std::string("gaussian"); },
                        [](const CubicField&) { return std::string("cubic"); },
                    },
                    f);
}

FluxProfile flux_profile(const PlanarField& field, std::span<const double> radii, int n_angular) {
  if (n_angular < 64) throw InvalidArgument("flux_profile needs at least 64 angular nodes");
  FluxProfile out;
  double prev = 0.0;
  for (double r : radii) {
    if (!(r > prev)) throw InvalidArgument("radii must be positive and increasing");
    prev = r;
  }
  out.radii.assign(radii.begin(), radii.end());
  const double dtheta = kTwoPi / n_angular;
  for (double r : radii) {
    double flux = 0.0, div = 0.0, norm = 0.0;
    for (int j = 0; j < n_angular; ++j) {
      const double th = j * dtheta;
      const double nx = std::cos(th), ny = std::sin(th);
      const Vec2 v = field_value(field.shape, r * nx, r * ny);
      flux += v.x * nx + v.y * ny;
      div += field_divergence(field.shape, r * nx, r * ny);
      norm += v.x * v.x + v.y * v.y;
    }
    // periodic trapezoid, arc length element r dtheta
    const double w = r * dtheta;
    out.phi.push_back(flux * w);
    out.ring_div.push_back(div * w);
    out.ring_norm.push_back(norm * w);
    out.cs_slack.push_back(norm * w - (flux * w) * (flux * w) / (kTwoPi * r));
  }
  return out;
}

double flux_derivative_residual(const FluxProfile& profile) {
  const UniformGrid g = UniformGrid::from_points(profile.radii);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < profile.radii.size(); ++i) {
    const double dphi = (profile.phi[i + 1] - profile.phi[i - 1]) / (2.0 * g.step);
    worst = std::max(worst, std::abs(dphi - profile.ring_div[i]));
  }
  return worst;
}

double comparison_blowup_radius(double psi0, double C, double r0) {
  if (!(psi0 > 0.0) || !(C > 0.0) || !(r0 > 0.0)) throw InvalidArgument("blow-up radius needs psi0, C, r0 > 0");
  return r0 * std::exp(kTwoPi / (C * psi0));
}

double integrate_comparison_ode(double psi0, double C, double r0, double r1, int steps) {
  if (steps < 1 || !(r1 > r0)) throw InvalidArgument("comparison ODE needs r1 > r0 and steps >= 1");
  const auto rhs = [C](double r, double psi) { return C * psi * psi / (kTwoPi * r); };
  const double h = (r1 - r0) / steps;
  double psi = psi0;
  for (int i = 0; i < steps; ++i) {
    const double r = r0 + i * h;
    const double k1 = rhs(r, psi);
    const double k2 = rhs(r + 0.5 * h, psi + 0.5 * h * k1);
    const double k3 = rhs(r + 0.5 * h, psi + 0.5 * h * k2);
    const double k4 = rhs(r + h, psi + h * k3);
    psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

namespace {

// min over the circle of div V - C |V|^2
double ring_min_slack(const PlanarField& field, double r, int n_angular) {
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_angular; ++j) {
    const double th = kTwoPi * j / n_angular;
    const double x = r * std::cos(th), y = r * std::sin(th);
    const Vec2 v = field_value(field.shape, x, y);
    worst = std::min(worst, field_divergence(field.shape, x, y) - field.C * (v.x * v.x + v.y * v.y));
  }
  return worst;
}

}  // namespace

ComparisonReport comparison_ode_check(const PlanarField& field, double r0, double r1, int n_radial, int n_angular) {
  if (!(r0 > 0.0) || !(r1 > r0)) throw InvalidArgument("annulus needs 0 < r0 < r1");
  if (!(field.C > 0.0)) throw InvalidArgument("the inequality constant C must be positive");
  if (n_radial < 2) throw InvalidArgument("need at least two radial samples");
  ComparisonReport rep;
  rep.r0 = r0;
  rep.r1 = r1;

  const auto radii = UniformGrid::linspace(r0, r1, n_radial).points();
  rep.min_pointwise_slack = std::numeric_limits<double>::infinity();
  std::size_t valid_until = radii.size();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double s = ring_min_slack(field, radii[i], n_angular);
    if (s < 0.0 && valid_until == radii.size()) valid_until = i;
    if (valid_until == radii.size()) rep.min_pointwise_slack = std::min(rep.min_pointwise_slack, s);
  }
  if (valid_until < radii.size()) {
    rep.applicable = false;
    if (valid_until == 0) {
      rep.failure_radius = r0;
    } else {
      double lo = radii[valid_until - 1], hi = radii[valid_until];
      while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (ring_min_slack(field, mid, n_angular) < 0.0 ? hi : lo) = mid;
      }
      rep.failure_radius = hi;
    }
  }

  rep.profile = flux_profile(field, radii, n_angular);
  rep.min_ode_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < valid_until; ++i) {
    const double r = radii[i], phi = rep.profile.phi[i];
    // ring_div is the exact derivative of phi
    rep.min_ode_slack = std::min(rep.min_ode_slack, rep.profile.ring_div[i] - field.C * phi * phi / (kTwoPi * r));
  }
  if (valid_until == 0) rep.min_ode_slack = std::numeric_limits<double>::quiet_NaN();

  const double phi0 = rep.profile.phi.front();
  if (phi0 > 1e-14) {
    rep.blowup_radius = comparison_blowup_radius(phi0, field.C, r0);
    const double r_end = std::min(r1, r0 + 0.9 * (*rep.blowup_radius - r0));
    const double exact = 1.0 / (1.0 / phi0 - field.C / kTwoPi * std::log(r_end / r0));
    rep.ode_integration_error = std::abs(integrate_comparison_ode(phi0, field.C, r0, r_end, 4000) - exact);
  }
  return rep;
}

}  // namespace shocklab
