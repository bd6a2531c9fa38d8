// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shocklab/backward_construction.hpp"
#include "shocklab/characteristics.hpp"
#include "shocklab/conservation.hpp"
#include "shocklab/foliation.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/integral_geometry.hpp"
#include "shocklab/scenario.hpp"
#include "support/constant_curvature.hpp"

using namespace shocklab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    pass = pass && ok;
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FoliationSpec sheared(double amp, std::vector<double> alphas, int q_count = 64) {
  FoliationSpec s;
  s.base_shift.modes.push_back({1, 0.0, amp});
  s.alpha_grid = std::move(alphas);
  s.q_grid_size = q_count;
  return s;
}

// Forced small-amplitude scenario shared by criteria 3 and 4.
FoliationSpec forced_foliation() { return sheared(0.05, UniformGrid::linspace(-1.5, 1.5, 31).points()); }
PotentialSpec forced_potential() { return PotentialSpec::single_mode(1, 0.02, 0.0); }

Outcome unforced_shock_time() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double expected = 1.0 / (0.2 * M_PI);
  const auto reports = shock_scan(sheared(0.1, UniformGrid::linspace(-1, 1, 21).points()), PotentialSpec::zero(), 3.0, 1e-3);
  double worst = 0.0;
  bool all = true;
  for (const auto& r : reports) {
    if (!r.forward_shock_time) {
      all = false;
      continue;
    }
    worst = std::max(worst, std::abs(*r.forward_shock_time - expected));
  }
  const double elapsed = seconds_since(t0);
  o.require(all, "every one of 21 leaves shocks forward");
  o.require(worst < 1e-5, "max |t_forward - 1/(0.2 pi)| = " + fmt("%.3e", worst) + " < 1e-5");
  o.require(elapsed < 5.0, "runtime " + fmt("%.2f", elapsed) + " s < 5 s");
  return o;
}

Outcome riccati_jacobi() {
  Outcome o;
  double worst = 0.0;
  for (double c : {0.5, 3.0, 10.0}) {
    const double pole = M_PI / (2.0 * std::sqrt(c));  // first pole of -sqrt(c) tan(sqrt(c) t)
    const auto tr = flow(testing::ConstantCurvature{c}, CharPoint{0.0, 0.0, 1.0, 0.0, 0.0}, 2.0 * pole, 1e-3);
    const auto z = first_xi_zero(tr);
    if (!z) {
      o.require(false, "no xi zero for c = " + fmt("%g", c));
      continue;
    }
    worst = std::max(worst, std::abs(*z - pole));
  }
  o.require(worst < 1e-7, "max |first_xi_zero - pole| over c in {0.5, 3, 10} = " + fmt("%.3e", worst) + " < 1e-7");
  return o;
}

Outcome divergence_identity() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto study = divergence_convergence(forced_foliation(), forced_potential(), ResidualBox{-0.3, 0.3, 0.2, 0.6}, 0.1, 3,
                                            64, 1e-3);
  const double elapsed = seconds_since(t0);
  for (std::size_t i = 0; i < study.steps.size(); ++i)
    o.note("h = " + fmt("%.4g", study.steps[i]) + ": max residual " + fmt("%.4e", study.max_residuals[i]));
  o.require(study.min_order() >= 1.9, "measured order " + fmt("%.4f", study.min_order()) + " >= 1.9");
  o.require(study.max_residuals.back() < 1e-3, "finest max residual " + fmt("%.3e", study.max_residuals.back()) + " < 1e-3");
  o.require(elapsed < 60.0, "runtime " + fmt("%.1f", elapsed) + " s < 60 s");
  return o;
}

Outcome omega_pde() {
  Outcome o;
  const auto pg = UniformGrid::linspace(-0.2, 0.2, 5).points();
  const auto qg = periodic_unit_grid(16);
  const auto study = pde_convergence(forced_foliation(), forced_potential(), 0.4, pg, qg, 0.02, 3, 1e-3);
  for (std::size_t i = 0; i < study.steps.size(); ++i)
    o.note("h = " + fmt("%.4g", study.steps[i]) + ": max residual " + fmt("%.4e", study.max_residuals[i]));
  o.require(study.min_order() >= 1.9, "measured order " + fmt("%.4f", study.min_order()) + " >= 1.9");
  return o;
}

Outcome theorem1_demo() {
  Outcome o;
  FoliationSpec spec;
  spec.alpha_grid = UniformGrid::linspace(-2, 2, 41).points();
  spec.q_grid_size = 32;
  const auto pot = PotentialSpec::single_mode(1, 0.05, 0.0);
  struct Witness {
    double alpha, t;
  };
  auto witness = [&](double dt) -> std::optional<Witness> {
    const auto reports = shock_scan(spec, pot, 50.0, dt);
    const auto w = earliest_shock(reports);
    if (!w) return std::nullopt;
    const auto& r = reports[*w];
    const double t = r.forward_shock_time && (!r.backward_shock_time || *r.forward_shock_time <= -*r.backward_shock_time)
                         ? *r.forward_shock_time
                         : *r.backward_shock_time;
    return Witness{r.alpha, t};
  };
  const auto coarse = witness(1e-2), fine = witness(5e-3);
  o.require(coarse && fine, "at least one leaf shocks within horizon 50");
  if (coarse && fine) {
    o.note("witness alpha = " + fmt("%g", fine->alpha) + ", t* = " + fmt("%.9f", fine->t));
    o.require(coarse->alpha == fine->alpha, "witness leaf unchanged under dt halving");
    o.require(std::abs(coarse->t - fine->t) < 1e-3, "|t*(dt) - t*(dt/2)| = " + fmt("%.3e", std::abs(coarse->t - fine->t)) + " < 1e-3");
  }
  return o;
}

Outcome theorem2_pipeline() {
  Outcome o;
  const double T = 1.0, dt = 1e-3;
  const double c = 0.5 * std::pow(M_PI / (2 * T), 2);
  const auto pot = PotentialSpec::single_mode(1, c / (kTwoPi * kTwoPi), 0.0, CompactBumpEnvelope{T, 0.25 * T});
  const auto alphas = UniformGrid::linspace(-1, 1, 21).points();
  try {
    const auto search = backward_shock_search(pot, T, alphas, 64, 200.0, dt, 16.0);
    const auto& cf = search.foliation;
    o.note("sup |u_qq| = " + fmt("%.6f", cf.curvature_bound) + ", threshold " + fmt("%.6f", cf.threshold));
    o.require(cf.jacobi_min > 0.0, "construction succeeds, jacobi_min = " + fmt("%.6f", cf.jacobi_min) + " > 0");
    const auto fv = verify_no_forward_shock(cf, pot, 3 * T, dt);
    o.require(true, "forward verification to 3T: no xi zero among " + std::to_string(fv.characteristics) + " characteristics");
    o.require(fv.max_line_deviation < 1e-7, "post-cutoff line deviation " + fmt("%.3e", fv.max_line_deviation) + " < 1e-7");
    if (search.scan) {
      const auto& w = search.scan->reports[search.scan->witness];
      o.require(true, "backward shock at alpha = " + fmt("%g", w.alpha) + ", t = " + fmt("%.6f", *w.backward_shock_time) +
                          " after " + std::to_string(search.widenings) + " widenings");
    } else {
      o.require(false, "backward scan inconclusive: alpha cap reached without a shock");
    }
  } catch (const Error& e) {
    o.require(false, std::string("pipeline raised: ") + e.what());
  }
  const auto zero = construct(PotentialSpec::zero(), T, alphas, 64, dt);
  double err = 0.0;
  for (const auto& leaf : zero.leaves)
    for (const auto& s : leaf.initial) err = std::max(err, std::abs(s.p0 - leaf.alpha));
  o.require(err < 1e-9, "zero-potential control: sup |phi_alpha - alpha| = " + fmt("%.3e", err) + " < 1e-9");
  return o;
}

// Blow-up radius of psi' = C psi^2 / (2 pi r) located by a plain RK4 march.
double marched_blowup(double psi0, double C, double r0) {
  const double h = 1e-6;
  double r = r0, psi = psi0;
  auto f = [C](double rr, double y) { return C * y * y / (kTwoPi * rr); };
  while (psi < 1e6) {
    const double k1 = f(r, psi), k2 = f(r + h / 2, psi + h / 2 * k1), k3 = f(r + h / 2, psi + h / 2 * k2),
                 k4 = f(r + h, psi + h * k3);
    psi += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    r += h;
  }
  // near the pole psi ~ 2 pi r* / (C (r* - r))
  return r * (1.0 + kTwoPi / (C * psi));
}

Outcome lemma1_machinery() {
  Outcome o;
  const std::vector<FieldShape> catalog = {ZeroField{},           LinearField{1, 0, 0, 1},  LinearField{0, -1, 1, 0},
                                           LinearField{0.3, -0.7, 1.1, -0.2}, GaussianField{1.0, 0.5, 0.8},
                                           CubicField{0.5, 1.0, 0.3}};
  double worst_order = 1e300;
  double min_slack = 1e300;
  for (const auto& f : catalog) {
    const PlanarField field{f, 1.0};
    const double e1 = flux_derivative_residual(flux_profile(field, UniformGrid::linspace(0.5, 1.5, 21).points(), 256));
    const double e2 = flux_derivative_residual(flux_profile(field, UniformGrid::linspace(0.5, 1.5, 41).points(), 256));
    if (e1 > 1e-11) worst_order = std::min(worst_order, std::log2(e1 / e2));
    const auto prof = flux_profile(field, UniformGrid::linspace(0.05, 3.0, 60).points(), 256);
    for (double s : prof.cs_slack) min_slack = std::min(min_slack, s);
  }
  o.require(worst_order >= 1.9, "flux/derivative identity: worst observed order " + fmt("%.3f", worst_order) + " >= 1.9");
  o.require(min_slack >= -1e-10, "Cauchy-Schwarz slack min " + fmt("%.3e", min_slack) + " >= -1e-10 on all catalog fields");
  const double closed = comparison_blowup_radius(1.0, kTwoPi, 1.0);
  const double marched = marched_blowup(1.0, kTwoPi, 1.0);
  o.require(std::abs(closed - M_E) < 1e-6, "closed-form blow-up radius " + fmt("%.12f", closed) + " = e within 1e-6");
  o.require(std::abs(marched - M_E) < 1e-6, "RK4-marched blow-up radius " + fmt("%.12f", marched) + " = e within 1e-6");
  return o;
}

StateU two_component(double u0, FourierSeries u1, FourierSeries u2) {
  StateU s;
  s.n = 2;
  s.u0 = u0;
  s.components = {std::move(u1), std::move(u2)};
  return s;
}

Outcome conservation_module() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  const auto pg = UniformGrid::linspace(-2, 2, 64).points();
  const auto qg = periodic_unit_grid(64);
  double dev = 0.0, transport = 0.0;
  for (int n : {2, 4, 6})
    for (int i = 0; i < 100; ++i) {
      const StateU s = random_state(n, rng);
      const double q = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      dev = std::max(dev, charpoly_identity(s, q));
      transport = std::max(transport, transport_residual(s, pg, std::vector<double>{q}).max_rel);
    }
  const StateU standard =
      two_component(0.3, FourierSeries{1.5, {{1, 0.1, 0.0}}}, FourierSeries{0.0, {{1, 0.0, 0.1}}});
  transport = std::max(transport, transport_residual(standard, pg, qg).max_rel);
  o.require(dev < 1e-9, "charpoly deviation over 300 random states (n = 2, 4, 6): " + fmt("%.3e", dev) + " < 1e-9");
  o.require(transport < 1e-10, "transport residual " + fmt("%.3e", transport) + " < 1e-10");

  std::vector<double> offset(64);
  for (int j = 0; j < 64; ++j) offset[static_cast<std::size_t>(j)] = (j + 0.5) / 64;
  bool criterion_matches = true;
  for (double u0 : {0.0, 0.4, 0.9}) {
    const FourierSeries u1{u0 * u0, {{1, 0.0, 0.1}, {3, 0.02, 0.0}}};
    const auto rep = ellipticity(two_component(u0, u1, FourierSeries{0.0, {{2, 0.1, 0.0}}}), offset);
    for (std::size_t j = 0; j < offset.size(); ++j) {
      const bool expect = u1.value(offset[j]) > u0 * u0;
      criterion_matches = criterion_matches && ((rep.min_imag[j] > kEllipticTolerance) == expect) &&
                          ((rep.real_root_count[j] == 0) == expect);
    }
  }
  o.require(criterion_matches, "n = 2 ellipticity matches u1 > u0^2 at every point of three threshold-crossing states");

  const auto ex = extract_leaves(standard, std::vector<double>{-2, -1, 0, 1, 2}, qg);
  o.require(ex.max_level_error < 1e-10 && ex.ordered,
            "extract_leaves round trip |F(leaf) - c| = " + fmt("%.3e", ex.max_level_error) + " < 1e-10, leaves ordered");

  for (const auto& [label, s] : {std::pair{"u0 = 0.3 default", standard},
                                 std::pair{"u0 = 0.9 near threshold",
                                           two_component(0.9, FourierSeries{0.82, {{1, 0.005, 0.0}}},
                                                         FourierSeries{0.0, {{1, 0.0, 0.01}}})}}) {
    const auto rep = e_concavity_n2(s, 0.5);
    o.note(std::string(label) + ": E'' displayed " + fmt("%.10g", rep.E_ddot_formula) + ", reduced " +
           fmt("%.10g", rep.E_ddot_oracle) + ", |diff| " + fmt("%.3e", rep.discrepancy));
  }
  const StateU flat_u0 = two_component(0.0, FourierSeries{1.0, {{1, 0.1, 0.0}}}, FourierSeries{0.0, {}});
  const auto rep = e_concavity_n2(flat_u0, 0.5);
  o.note("u0 = 0: E'' displayed " + fmt("%.12g", rep.E_ddot_formula) + ", reduced " + fmt("%.12g", rep.E_ddot_oracle) +
         ", weighted " + fmt("%.12g", rep.E_ddot_weighted));
  o.require(rep.E_ddot_formula <= 0.0 && rep.E_ddot_oracle <= 0.0, "u0 = 0: both routes give E'' <= 0");
  o.require(rep.discrepancy < 1e-8, "u0 = 0: displayed and reduced E'' agree, |diff| = " + fmt("%.3e", rep.discrepancy) + " < 1e-8");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "shocklab_acceptance_determinism";
  fs::remove_all(base);
  const json scenarios[] = {
      json::parse(R"({"command": "shock-scan",
                      "potential": {"modes": [{"k": 1, "cos": 0.05, "sin": 0.01}]},
                      "foliation": {"psi": {"mean": 0, "modes": [{"k": 1, "cos": 0, "sin": 0.02}]},
                                    "alpha_grid": {"min": -1, "max": 1, "count": 11}, "q_grid_size": 16},
                      "numerics": {"dt": 0.01, "horizon": 10}})"),
      json::parse(R"({"command": "conservation-check", "seed": 17})"),
      json::parse(R"({"command": "lemma1", "field": {"type": "gaussian", "amp": 1, "swirl": 0.5, "sigma": 0.8, "C": 1}})"),
      json::parse(R"({"command": "extract-and-scan", "numerics": {"dt": 0.01, "horizon": 5}})"),
  };
  for (const auto& j : scenarios) {
    const Scenario sc = parse_scenario(j);
    const fs::path a = base / (sc.command + "_a"), b = base / (sc.command + "_b");
    const auto ra = run(sc, RunOptions{a, false});
    const auto rb = run(sc, RunOptions{b, false});
    bool same = ra.exit_code == rb.exit_code;
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      same = same && fs::exists(b / entry.path().filename()) && slurp(entry.path()) == slurp(b / entry.path().filename());
    }
    o.require(same && files >= 3, sc.command + ": " + std::to_string(files) + " output files byte-identical across runs");
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "unforced shock-time oracle", unforced_shock_time},
      {2, "Riccati/Jacobi pole equivalence", riccati_jacobi},
      {3, "divergence identity convergence", divergence_identity},
      {4, "omega PDE residual convergence", omega_pde},
      {5, "shock existence under a cosine potential", theorem1_demo},
      {6, "compactly supported force: construction and backward shocks", theorem2_pipeline},
      {7, "flux identity, Cauchy-Schwarz and comparison ODE", lemma1_machinery},
      {8, "conservation system identities and concavity", conservation_module},
      {9, "determinism of scenario runs", determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.require(false, std::string("unexpected exception: ") + e.what());
    }
    std::printf("[%s] %d %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title);
    for (const auto& d : o.details) std::printf("       %s\n", d.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
