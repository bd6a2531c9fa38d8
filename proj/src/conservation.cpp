#include "shocklab/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shocklab/errors.hpp"
#include "shocklab/grid.hpp"

namespace shocklab {

void StateU::check() const {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("state dimension n must be even and >= 2");
  if (components.size() != static_cast<std::size_t>(n))
    throw InvalidArgument("state needs exactly n components u_1..u_n");
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t j = 1; j < coeffs.size(); ++j) d.coeffs.push_back(static_cast<double>(j) * coeffs[j]);
  if (d.coeffs.empty()) d.coeffs.push_back(0.0);
  return d;
}

Polynomial conserved_polynomial(const StateU& state, double q) {
  state.check();
  const int n = state.n;
  Polynomial f;
  f.coeffs.assign(static_cast<std::size_t>(n + 2), 0.0);
  f.coeffs[static_cast<std::size_t>(n + 1)] = 1.0 / (n + 1);
  f.coeffs[static_cast<std::size_t>(n)] = state.u0;
  for (int k = 1; k <= n; ++k)
    f.coeffs[static_cast<std::size_t>(n - k)] = state.components[static_cast<std::size_t>(k - 1)].value(q);
  return f;
}

Eigen::MatrixXd build_A(const StateU& state, double q) {
  state.check();
  const int n = state.n;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    const double prev = k == 1 ? state.u0 : state.components[static_cast<std::size_t>(k - 2)].value(q);
    A(k - 1, 0) += (n - k + 1) * prev;
    if (k < n) A(k - 1, k) = -1.0;
  }
  return A;
}

std::vector<double> characteristic_coefficients(const Eigen::MatrixXd& A) {
  const auto n = A.rows();
  // det(lambda I - A) = sum c_k lambda^k, c_n = 1
  std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = A * M + c[static_cast<std::size_t>(n - k + 1)] * I;
    c[static_cast<std::size_t>(n - k)] = -(A * M).trace() / static_cast<double>(k);
  }
  if (n % 2 != 0)
    for (double& x : c) x = -x;
  return c;
}

std::vector<double> fp_reflected_coefficients(const StateU& state, double q) {
  const Polynomial fp = conserved_polynomial(state, q).derivative();
  std::vector<double> out(fp.coeffs.size());
  for (std::size_t j = 0; j < fp.coeffs.size(); ++j) out[j] = (j % 2 ? -1.0 : 1.0) * fp.coeffs[j];
  return out;
}

double charpoly_identity(const StateU& state, double q) {
  const auto det = characteristic_coefficients(build_A(state, q));
  const auto fp = fp_reflected_coefficients(state, q);
  double worst = 0.0;
  for (std::size_t j = 0; j < std::max(det.size(), fp.size()); ++j) {
    const double a = j < det.size() ? det[j] : 0.0;
    const double b = j < fp.size() ? fp[j] : 0.0;
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

namespace {

void trim(std::vector<double>& c, double scale) {
  while (c.size() > 1 && std::abs(c.back()) <= 1e-13 * scale) c.pop_back();
}

std::vector<double> remainder(std::vector<double> a, const std::vector<double>& b) {
  const double lead = b.back();
  const std::size_t db = b.size() - 1;
  while (a.size() > db && a.size() > 1) {
    const double f = a.back() / lead;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= f * b[j];
    a.pop_back();
  }
  if (a.empty()) a.push_back(0.0);
  return a;
}

int sign_changes(const std::vector<int>& signs) {
  int changes = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int count_real_roots(const Polynomial& poly) {
  double scale = 0.0;
  for (double c : poly.coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) throw InvalidArgument("zero polynomial has no finite root count");
  std::vector<std::vector<double>> chain;
  chain.push_back(poly.coeffs);
  trim(chain.back(), scale);
  if (chain.back().size() < 2) return 0;
  chain.push_back(Polynomial{chain.back()}.derivative().coeffs);
  while (chain.back().size() > 1) {
    auto r = remainder(chain[chain.size() - 2], chain.back());
    for (double& x : r) x = -x;
    trim(r, scale);
    if (r.size() == 1 && std::abs(r[0]) <= 1e-13 * scale) break;
    chain.push_back(std::move(r));
  }
  std::vector<int> at_minus, at_plus;
  for (const auto& c : chain) {
    const int lead = c.back() > 0 ? 1 : (c.back() < 0 ? -1 : 0);
    const int deg = static_cast<int>(c.size()) - 1;
    at_plus.push_back(lead);
    at_minus.push_back(deg % 2 ? -lead : lead);
  }
  return sign_changes(at_minus) - sign_changes(at_plus);
}

EllipticityReport ellipticity(const StateU& state, std::span<const double> q_grid) {
  state.check();
  EllipticityReport rep;
  rep.q_grid.assign(q_grid.begin(), q_grid.end());
  rep.min_imag_overall = std::numeric_limits<double>::infinity();
  for (double q : q_grid) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(build_A(state, q), false);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& lambda : solver.eigenvalues()) m = std::min(m, std::abs(lambda.imag()));
    rep.min_imag.push_back(m);
    rep.real_root_count.push_back(count_real_roots(conserved_polynomial(state, q).derivative()));
    rep.min_imag_overall = std::min(rep.min_imag_overall, m);
    if (!(m > kEllipticTolerance)) rep.failing_q.push_back(q);
  }
  rep.elliptic = !q_grid.empty() && rep.failing_q.empty();
  return rep;
}

std::vector<double> time_derivatives(const StateU& state, double q) {
  state.check();
  const int n = state.n;
  std::vector<Jet> u(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) u[static_cast<std::size_t>(k)] = state.components[static_cast<std::size_t>(k)].jet(q);
  const double u1q = u[0].d1;
  std::vector<double> ut(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const double prev = k == 1 ? state.u0 : u[static_cast<std::size_t>(k - 2)].value;
    const double next_q = k < n ? u[static_cast<std::size_t>(k)].d1 : 0.0;
    ut[static_cast<std::size_t>(k - 1)] = (n - k + 1) * prev * u1q - next_q;
  }
  return ut;
}

TransportReport transport_residual(const StateU& state, std::span<const double> p_grid,
                                   std::span<const double> q_grid) {
  state.check();
  const int n = state.n;
  TransportReport rep;
  for (double q : q_grid) {
    const auto ut = time_derivatives(state, q);
    std::vector<double> uq(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) uq[static_cast<std::size_t>(k)] = state.components[static_cast<std::size_t>(k)].jet(q).d1;
    const Polynomial fp = conserved_polynomial(state, q).derivative();
    for (double p : p_grid) {
      double ft = 0.0, fq = 0.0, pow = 1.0;
      // coefficient of p^{n-k} is u_k
      for (int k = n; k >= 1; --k) {
        ft += ut[static_cast<std::size_t>(k - 1)] * pow;
        fq += uq[static_cast<std::size_t>(k - 1)] * pow;
        pow *= p;
      }
      const double a = ft, b = p * fq, c = -uq[0] * fp(p);
      const double r = std::abs(a + b + c);
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
      rep.max_abs = std::max(rep.max_abs, r);
      rep.max_rel = std::max(rep.max_rel, r / std::max(scale, 1.0));
    }
  }
  return rep;
}

ConcavityReport e_concavity_n2(const StateU& state, double gamma, int q_count) {
  state.check();
  if (state.n != 2) throw InvalidArgument("the concavity functional is defined for n = 2");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
  const double u0 = state.u0;
  const auto qs = periodic_unit_grid(q_count);
  std::vector<double> e(qs.size()), ed(qs.size()), fa(qs.size()), fb(qs.size()), fw(qs.size());
  for (std::size_t j = 0; j < qs.size(); ++j) {
    const Jet u1 = state.components[0].jet(qs[j]);
    const Jet u2 = state.components[1].jet(qs[j]);
    if (!(u1.value > u0 * u0) || !(u1.value > 0.0))
      throw EllipticityViolated("u_1 <= u_0^2 at q = " + std::to_string(qs[j]));
    const double u1t = 2.0 * u0 * u1.d1 - u2.d1;
    const double u1tq = 2.0 * u0 * u1.d2 - u2.d2;
    const double u2tq = u1.d1 * u1.d1 + u1.value * u1.d2;  // d/dq (u1 u1_q)
    const double u1tt = 2.0 * u0 * u1tq - u2tq;
    const double pw = std::pow(u1.value, gamma - 2.0);
    e[j] = std::pow(u1.value, gamma);
    ed[j] = gamma * pw * u1.value * u1t;
    fa[j] = gamma * (gamma - 1.0) * pw * (u1t * u1t - 2.0 * u0 * u1t * u1.d1 + u1.d1 * u1.d1);
    fw[j] = gamma * (gamma - 1.0) * pw * (u1t * u1t - 2.0 * u0 * u1t * u1.d1 + u1.value * u1.d1 * u1.d1);
    fb[j] = gamma * (gamma - 1.0) * pw * u1t * u1t + gamma * pw * u1.value * u1tt;
  }
  ConcavityReport rep;
  rep.E = simpson_periodic(e);
  rep.E_dot = simpson_periodic(ed);
  rep.E_ddot_formula = simpson_periodic(fa);
  rep.E_ddot_oracle = simpson_periodic(fb);
  rep.E_ddot_weighted = simpson_periodic(fw);
  rep.discrepancy = std::abs(rep.E_ddot_formula - rep.E_ddot_oracle);
  rep.weighted_discrepancy = std::abs(rep.E_ddot_weighted - rep.E_ddot_oracle);
  return rep;
}

namespace {

// Real root of poly(p) = level; poly has odd degree and positive leading coefficient.
double solve_level(const Polynomial& poly, double level, double q) {
  Polynomial g = poly;
  g.coeffs[0] -= level;
  const double lead = g.coeffs.back();
  double bound = 0.0;
  for (std::size_t j = 0; j + 1 < g.coeffs.size(); ++j) bound = std::max(bound, std::abs(g.coeffs[j] / lead));
  double lo = -(1.0 + bound), hi = 1.0 + bound;
  if (!(g(lo) < 0.0 && g(hi) > 0.0)) throw LevelOutOfRange(level, q);
  const Polynomial dg = g.derivative();
  double p = hi;  // large seed
  for (int it = 0; it < 200; ++it) {
    const double v = g(p);
    if (v == 0.0) return p;
    (v > 0.0 ? hi : lo) = p;
    const double d = dg(p);
    double next = p - v / d;
    if (!(d > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - p) <= 4e-16 * std::max(1.0, std::abs(p))) return next;
    p = next;
  }
  return p;
}

}  // namespace

ExtractedLeaves extract_leaves(const StateU& state, std::span<const double> levels, std::span<const double> q_grid) {
  const EllipticityReport ell = ellipticity(state, q_grid);
  if (!ell.elliptic)
    throw NotElliptic("A(U) has real eigenvalues at q = " + std::to_string(ell.failing_q.front()));
  ExtractedLeaves out;
  out.levels.assign(levels.begin(), levels.end());
  out.q_grid.assign(q_grid.begin(), q_grid.end());
  out.leaves.assign(levels.size(), {});
  const int n = state.n;
  for (double q : q_grid) {
    const Polynomial f = conserved_polynomial(state, q);
    const Polynomial fp = f.derivative();
    // F_q = sum_k (u_k)_q p^{n-k}
    Polynomial fq;
    fq.coeffs.assign(static_cast<std::size_t>(n + 1), 0.0);
    for (int k = 1; k <= n; ++k)
      fq.coeffs[static_cast<std::size_t>(n - k)] = state.components[static_cast<std::size_t>(k - 1)].jet(q).d1;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const double p = solve_level(f, levels[i], q);
      const double err = std::abs(f(p) - levels[i]);
      if (!std::isfinite(p)) throw LevelOutOfRange(levels[i], q);
      out.max_level_error = std::max(out.max_level_error, err);
      out.leaves[i].push_back({q, p, -fq(p) / fp(p)});
    }
  }
  std::vector<std::size_t> order(levels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return levels[a] < levels[b]; });
  for (std::size_t j = 0; j < q_grid.size(); ++j)
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
      if (levels[order[i]] < levels[order[i + 1]] && !(out.leaves[order[i]][j].p0 < out.leaves[order[i + 1]][j].p0))
        out.ordered = false;
  return out;
}

PotentialSpec potential_from_component(const FourierSeries& u1) {
  PotentialSpec pot;
  for (const auto& m : u1.modes) pot.add_mode(m.k, m.cos, m.sin);
  return pot;
}

}  // namespace shocklab
