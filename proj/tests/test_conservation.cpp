#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "shocklab/conservation.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/scenario.hpp"

using namespace shocklab;

namespace {

FourierSeries constant(double c) { return FourierSeries{c, {}}; }

StateU n2(double u0, FourierSeries u1, FourierSeries u2) {
  StateU s;
  s.n = 2;
  s.u0 = u0;
  s.components = {std::move(u1), std::move(u2)};
  return s;
}

std::vector<double> offset_grid(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(j)] = (j + 0.5) / n;
  return g;
}

// Central difference of a Fourier series, independent of its analytic jet.
double d_dq(const FourierSeries& f, double q, double h = 1e-4) { return (f.value(q + h) - f.value(q - h)) / (2 * h); }

// Second time derivative of E = int u1^gamma by quadrature, with every q-derivative
// taken by finite differences of the series values.
double e_ddot_by_differences(const StateU& s, double gamma, int n = 2048) {
  const auto& u1 = s.components[0];
  const auto& u2 = s.components[1];
  const double u0 = s.u0, h = 1e-4;
  auto u1t = [&](double q) { return 2 * u0 * d_dq(u1, q) - d_dq(u2, q); };
  auto u2t = [&](double q) { return u1.value(q) * d_dq(u1, q); };
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double q = (j + 0.5) / n;
    const double v = u1.value(q), vt = u1t(q);
    const double vtt = 2 * u0 * (u1t(q + h) - u1t(q - h)) / (2 * h) - (u2t(q + h) - u2t(q - h)) / (2 * h);
    sum += gamma * (gamma - 1) * std::pow(v, gamma - 2) * vt * vt + gamma * std::pow(v, gamma - 1) * vtt;
  }
  return sum / n;
}

// F_p(-lambda) from the polynomial itself.
double fp_at(const StateU& s, double q, double lambda) { return conserved_polynomial(s, q).derivative()(-lambda); }

}  // namespace

TEST_CASE("A for n = 2") {
  const auto s = n2(0.3, constant(1.7), constant(0.2));
  const Eigen::MatrixXd A = build_A(s, 0.1);
  CHECK(A(0, 0) == doctest::Approx(0.6));
  CHECK(A(0, 1) == -1.0);
  CHECK(A(1, 0) == doctest::Approx(1.7));
  CHECK(A(1, 1) == 0.0);

  const Eigen::MatrixXd Z = build_A(n2(0.0, constant(0.0), constant(0.0)), 0.5);
  CHECK(Z(0, 0) == 0.0);
  CHECK(Z(0, 1) == -1.0);
  CHECK(Z(1, 0) == 0.0);
  CHECK(Z(1, 1) == 0.0);
}

TEST_CASE("A U_q reproduces the system for random n = 4 states") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const StateU s = random_state(4, rng);
    const double q = 0.1 + 0.04 * trial;
    Eigen::VectorXd uq(4);
    for (int k = 0; k < 4; ++k) uq[k] = s.components[static_cast<std::size_t>(k)].jet(q).d1;
    const Eigen::VectorXd lhs = build_A(s, q) * uq;
    for (int k = 1; k <= 4; ++k) {
      const double prev = k == 1 ? s.u0 : s.components[static_cast<std::size_t>(k - 2)].value(q);
      const double next_q = k == 4 ? 0.0 : uq[k];
      const double rhs = (4 - k + 1) * prev * uq[0] - next_q;
      CHECK(std::abs(lhs[k - 1] - rhs) < 1e-12);
    }
    const auto ut = time_derivatives(s, q);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(ut[static_cast<std::size_t>(k)] - lhs[k]) < 1e-12);
  }
}

TEST_CASE("characteristic polynomial for n = 2 by hand") {
  const double u0 = 0.3, u1 = 1.7;
  const auto s = n2(u0, constant(u1), constant(0.2));
  const auto c = characteristic_coefficients(build_A(s, 0.0));
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(u1));
  CHECK(c[1] == doctest::Approx(-2 * u0));
  CHECK(c[2] == 1.0);
  CHECK(charpoly_identity(s, 0.0) < 1e-15);
  const auto unit = characteristic_coefficients(build_A(n2(0.0, constant(1.0), constant(0.0)), 0.0));
  CHECK(unit == std::vector<double>{1.0, 0.0, 1.0});
}

TEST_CASE("charpoly identity on random states, checked against LU determinants") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n : {2, 4, 6}) {
    double worst = 0.0, worst_lu = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const StateU s = random_state(n, rng);
      const double q = unit(rng);
      worst = std::max(worst, charpoly_identity(s, q));
      const Eigen::MatrixXd A = build_A(s, q);
      for (double lambda : {-1.3, 0.0, 0.4, 2.1}) {
        const double det = (A - lambda * Eigen::MatrixXd::Identity(n, n)).determinant();
        worst_lu = std::max(worst_lu, std::abs(det - fp_at(s, q, lambda)) / (1.0 + std::abs(det)));
      }
    }
    CHECK(worst < 1e-9);
    CHECK(worst_lu < 1e-9);
  }
}

TEST_CASE("Sturm root counts") {
  CHECK(count_real_roots(Polynomial{{1.0, 0.0, 1.0}}) == 0);
  CHECK(count_real_roots(Polynomial{{-6.0, 1.0, 0.0, 1.0}}) == 1);       // x^3 + x - 6 is increasing
  CHECK(count_real_roots(Polynomial{{6.0, -7.0, 0.0, 1.0}}) == 3);       // (x-1)(x-2)(x+3)
  CHECK(count_real_roots(Polynomial{{4.0, 0.0, -5.0, 0.0, 1.0}}) == 4);  // (x^2-1)(x^2-4)
  CHECK(count_real_roots(Polynomial{{1.0, 0.0, 2.0, 0.0, 1.0}}) == 0);   // (x^2+1)^2
}

TEST_CASE("ellipticity examples") {
  SUBCASE("u1 = 1 above u0^2 = 0.25") {
    const auto rep = ellipticity(n2(0.5, constant(1.0), constant(0.0)), offset_grid(8));
    CHECK(rep.elliptic);
    CHECK(rep.min_imag_overall == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
    Eigen::EigenSolver<Eigen::MatrixXd> es(build_A(n2(0.5, constant(1.0), constant(0.0)), 0.0));
    for (int i = 0; i < 2; ++i) CHECK(es.eigenvalues()[i].real() == doctest::Approx(0.5));
  }
  SUBCASE("u1 = -1 has real eigenvalues") {
    const auto rep = ellipticity(n2(0.0, constant(-1.0), constant(0.0)), offset_grid(8));
    CHECK_FALSE(rep.elliptic);
    CHECK(rep.failing_q.size() == 8);
    for (int c : rep.real_root_count) CHECK(c == 2);
  }
  SUBCASE("threshold crossing is flagged exactly where u1 <= u0^2") {
    const double u0 = 0.4;
    const FourierSeries u1{u0 * u0, {{1, 0.0, 0.1}}};
    const auto grid = offset_grid(64);
    const auto rep = ellipticity(n2(u0, u1, FourierSeries{0.0, {{2, 0.3, 0.0}}}), grid);
    CHECK_FALSE(rep.elliptic);
    std::size_t expected = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const bool above = u1.value(grid[j]) > u0 * u0;
      CHECK((rep.min_imag[j] > kEllipticTolerance) == above);
      CHECK((rep.real_root_count[j] == 0) == above);
      if (!above) ++expected;
    }
    CHECK(rep.failing_q.size() == expected);
    CHECK(expected == 32);
  }
}

TEST_CASE("eigenvalue and root-count routes agree on random states") {
  std::mt19937_64 rng(99);
  const auto grid = offset_grid(16);
  for (int n : {2, 4, 6})
    for (int trial = 0; trial < 20; ++trial) {
      const auto rep = ellipticity(random_state(n, rng), grid);
      for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK((rep.min_imag[j] > kEllipticTolerance) == (rep.real_root_count[j] == 0));
    }
}

TEST_CASE("transport identity") {
  const auto pg = UniformGrid::linspace(-2, 2, 64).points();
  const auto qg = periodic_unit_grid(64);
  SUBCASE("constant state") {
    const auto rep = transport_residual(n2(0.3, constant(2.0), constant(-1.0)), pg, qg);
    CHECK(rep.max_abs == 0.0);
  }
  SUBCASE("default two-component state") {
    const auto s = n2(0.3, FourierSeries{1.5, {{1, 0.1, 0.0}}}, FourierSeries{0.0, {{1, 0.0, 0.1}}});
    CHECK(transport_residual(s, pg, qg).max_rel < 1e-11);
  }
  SUBCASE("random n = 4 and n = 6 states") {
    std::mt19937_64 rng(5);
    for (int n : {4, 6})
      for (int trial = 0; trial < 10; ++trial) CHECK(transport_residual(random_state(n, rng), pg, qg).max_rel < 1e-10);
  }
}

TEST_CASE("concavity functional") {
  const double gamma = 0.5;
  SUBCASE("constant state is stationary") {
    const auto rep = e_concavity_n2(n2(0.2, constant(1.3), constant(0.4)), gamma);
    CHECK(rep.E == doctest::Approx(std::sqrt(1.3)));
    CHECK(rep.E_dot == 0.0);
    CHECK(rep.E_ddot_formula == 0.0);
    CHECK(rep.E_ddot_oracle == 0.0);
  }
  SUBCASE("reduced second derivative against finite differences") {
    const auto s = n2(0.3, FourierSeries{1.5, {{1, 0.1, 0.0}}}, FourierSeries{0.0, {{1, 0.0, 0.1}}});
    const auto rep = e_concavity_n2(s, gamma);
    CHECK(std::abs(rep.E_ddot_oracle - e_ddot_by_differences(s, gamma)) < 1e-6);
    CHECK(rep.weighted_discrepancy < 1e-12);
  }
  SUBCASE("u0 = 0: both integrands give a nonpositive value") {
    const auto s = n2(0.0, FourierSeries{1.0, {{1, 0.1, 0.0}}}, constant(0.0));
    const auto rep = e_concavity_n2(s, gamma);
    CHECK(rep.E_ddot_formula <= 0.0);
    CHECK(rep.E_ddot_oracle <= 0.0);
    CHECK(std::abs(rep.E_ddot_oracle - e_ddot_by_differences(s, gamma)) < 1e-6);
    // the displayed integrand lacks the u1 weight on (u1_q)^2; the weighted one is exact
    CHECK(rep.weighted_discrepancy < 1e-12);
    CHECK(rep.discrepancy > 1e-4 * std::abs(rep.E_ddot_oracle));
  }
  SUBCASE("large u0 near the threshold") {
    const auto s = n2(0.9, FourierSeries{0.82, {{1, 0.005, 0.0}}}, FourierSeries{0.0, {{1, 0.0, 0.01}}});
    const auto rep = e_concavity_n2(s, gamma);
    CHECK(std::abs(rep.E_ddot_oracle - e_ddot_by_differences(s, gamma)) < 1e-6);
    CHECK(rep.weighted_discrepancy < 1e-12);
  }
  SUBCASE("outside the elliptic regime") {
    CHECK_THROWS_AS((void)e_concavity_n2(n2(1.0, constant(0.5), constant(0.0)), gamma), EllipticityViolated);
    CHECK_THROWS_AS((void)e_concavity_n2(n2(1.0, constant(0.5), constant(0.0)), gamma), NotElliptic);
  }
}

TEST_CASE("leaf extraction") {
  const auto grid = periodic_unit_grid(16);
  SUBCASE("F = p^3/3 + p") {
    const auto s = n2(0.0, constant(1.0), constant(0.0));
    const auto ex = extract_leaves(s, std::vector<double>{0.0, 4.0 / 3.0}, grid);
    for (const auto& seed : ex.leaves[0]) CHECK(std::abs(seed.p0) < 1e-14);
    for (const auto& seed : ex.leaves[1]) CHECK(seed.p0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ex.ordered);
  }
  SUBCASE("rippled u1: ordered non-constant graphs") {
    const auto s = n2(0.0, FourierSeries{1.0, {{1, 0.2, 0.0}}}, constant(0.0));
    const std::vector<double> levels{-2.0, -1.0, 0.0, 1.0, 2.0};
    const auto ex = extract_leaves(s, levels, grid);
    CHECK(ex.ordered);
    CHECK(ex.max_level_error < 1e-10);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      double lo = 1e300, hi = -1e300;
      for (const auto& seed : ex.leaves[i]) {
        const double f = conserved_polynomial(s, seed.q0)(seed.p0);
        CHECK(std::abs(f - levels[i]) < 1e-10);
        lo = std::min(lo, seed.p0);
        hi = std::max(hi, seed.p0);
      }
      if (levels[i] != 0.0) CHECK(hi - lo > 1e-3);
    }
  }
  SUBCASE("leaf slope matches differences along the leaf") {
    const auto s = n2(0.3, FourierSeries{1.5, {{1, 0.1, 0.0}}}, FourierSeries{0.0, {{1, 0.0, 0.1}}});
    const double q = 0.3, h = 1e-5;
    const auto ex = extract_leaves(s, std::vector<double>{0.7}, std::vector<double>{q - h, q, q + h});
    const double fd = (ex.leaves[0][2].p0 - ex.leaves[0][0].p0) / (2 * h);
    CHECK(ex.leaves[0][1].slope == doctest::Approx(fd).epsilon(1e-6));
  }
  SUBCASE("non-elliptic state is refused") {
    CHECK_THROWS_AS((void)extract_leaves(n2(0.0, constant(-1.0), constant(0.0)), std::vector<double>{0.0}, grid),
                    NotElliptic);
  }
}

TEST_CASE("state validation") {
  StateU s = n2(0.0, constant(1.0), constant(0.0));
  s.n = 3;
  CHECK_THROWS_AS(s.check(), InvalidArgument);
  s.n = 4;
  CHECK_THROWS_AS(s.check(), InvalidArgument);
}

TEST_CASE("time-frozen potential drops the mean of u1") {
  const auto pot = potential_from_component(FourierSeries{3.0, {{2, 0.1, -0.2}}});
  CHECK(eval_u(pot, 0.3, 0.0) == doctest::Approx(0.1 * std::cos(4 * M_PI * 0.3) - 0.2 * std::sin(4 * M_PI * 0.3)));
}
