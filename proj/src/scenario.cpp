#include "shocklab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "shocklab/backward_construction.hpp"
#include "shocklab/characteristics.hpp"
#include "shocklab/csv.hpp"
#include "shocklab/foliation.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/integral_geometry.hpp"

namespace shocklab {

Scenario parse_scenario(const json& j) {
  ObjectReader r(j, "$");
  r.allow_only({"command", "potential", "foliation", "state", "field", "numerics", "output_dir", "seed"});
  Scenario s;
  s.command = r.string("command");
  static const char* const kCommands[] = {"shock-scan",         "divergence-check", "pde-residual",   "lemma1",
                                          "theorem2",           "conservation-check", "extract-and-scan"};
  if (std::find(std::begin(kCommands), std::end(kCommands), s.command) == std::end(kCommands))
    throw ConfigError("$.command", "unknown command '" + s.command + "'");
  if (r.has("potential")) s.potential = r.at("potential");
  if (r.has("foliation")) s.foliation = r.at("foliation");
  if (r.has("state")) s.state = r.at("state");
  if (r.has("field")) s.field = r.at("field");
  if (r.has("numerics")) {
    s.numerics = r.at("numerics");
    if (!s.numerics.is_object()) throw ConfigError("$.numerics", "expected an object");
  }
  s.output_dir = r.string("output_dir", "out");
  if (r.has("seed")) {
    const json& v = r.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ConfigError("$.seed", "expected a non-negative integer");
    s.seed = v.get<std::uint64_t>();
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open scenario file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

StateU random_state(int n, std::mt19937_64& rng) {
  const auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  StateU s;
  s.n = n;
  s.u0 = uniform(-1.0, 1.0);
  for (int k = 0; k < n; ++k) {
    FourierSeries c;
    c.mean = uniform(-1.0, 1.0);
    for (int w = 1; w <= 2; ++w) c.modes.push_back({w, uniform(-0.5, 0.5), uniform(-0.5, 0.5)});
    s.components.push_back(std::move(c));
  }
  return s;
}

namespace {

std::string short_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// Collected pass/fail verdicts plus free-form findings.
class Findings {
 public:
  void check(const std::string& name, double value, double tolerance, bool pass) {
    checks_.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", pass}});
    text_ << (pass ? "PASS " : "FAIL ") << name << " = " << short_real(value) << " (tolerance "
          << short_real(tolerance) << ")\n";
    all_pass_ = all_pass_ && pass;
  }
  void note(const std::string& name, const json& value) {
    notes_[name] = value;
    text_ << name << ": " << value.dump() << "\n";
  }
  [[nodiscard]] bool all_pass() const { return all_pass_; }
  [[nodiscard]] const json& checks() const { return checks_; }
  [[nodiscard]] const json& notes() const { return notes_; }
  [[nodiscard]] std::string text() const { return text_.str(); }

 private:
  json checks_ = json::array();
  json notes_ = json::object();
  std::ostringstream text_;
  bool all_pass_ = true;
};

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::pair<double, double> interval(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(path, "expected [lo, hi]");
  const double lo = j[0].get<double>(), hi = j[1].get<double>();
  if (!(hi >= lo)) throw ConfigError(path, "expected lo <= hi");
  return {lo, hi};
}

PotentialSpec scenario_potential(const Scenario& s) {
  return s.potential.is_null() ? PotentialSpec::zero() : potential_from_json(s.potential, "$.potential");
}

FoliationSpec scenario_foliation(const Scenario& s) {
  if (s.foliation.is_null()) throw ConfigError("$.foliation", "this command needs a foliation");
  return foliation_from_json(s.foliation, "$.foliation");
}

StateU default_state() {
  StateU s;
  s.n = 2;
  s.u0 = 0.3;
  s.components.push_back(FourierSeries{1.5, {{1, 0.1, 0.0}}});
  s.components.push_back(FourierSeries{0.0, {{1, 0.0, 0.1}}});
  return s;
}

StateU scenario_state(const Scenario& s) {
  return s.state.is_null() ? default_state() : state_from_json(s.state, "$.state");
}

// ---------------------------------------------------------------- commands

void run_shock_scan(const Scenario& s, const std::filesystem::path& out, Findings& f) {
  ObjectReader num(s.numerics, "$.numerics");
  num.allow_only({"dt", "horizon", "fan_stride"});
  const double dt = num.positive("dt", 1e-3);
  const double horizon = num.positive("horizon", 10.0);
  const int fan_stride = num.integer("fan_stride", 10);
  if (fan_stride < 1) throw ConfigError("$.numerics.fan_stride", "must be at least 1");

  const PotentialSpec pot = scenario_potential(s);
  const FoliationSpec fol = scenario_foliation(s);
  const FoliationValidation val = validate(fol);
  const auto reports = shock_scan(fol, pot, horizon, dt);

  write_shock_reports_csv(out / "results.csv", reports);
  {
    CsvWriter w(out / "shock_times.csv", {"alpha", "t_forward", "t_backward"});
    for (const auto& r : reports)
      w.row({format_real(r.alpha), format_optional(r.forward_shock_time), format_optional(r.backward_shock_time)});
  }

  const auto witness = earliest_shock(reports);
  const std::size_t fan_leaf = witness.value_or(0);
  {
    CsvWriter w(out / "fan.csv", {"seed", "q0", "t", "q"});
    const auto seeds = leaf_seeds(fol, fol.alpha_grid[fan_leaf]);
    const double t_end = reports[fan_leaf].forward_shock_time.value_or(horizon);
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      const Trajectory tr = flow(pot, CharPoint{seeds[j].q0, seeds[j].p0, 1.0, seeds[j].slope, 0.0}, t_end, dt);
      for (std::size_t k = 0; k < tr.samples.size(); k += static_cast<std::size_t>(fan_stride))
        w.row({std::to_string(j), format_real(seeds[j].q0), format_real(tr.samples[k].t),
               format_real(tr.samples[k].q)});
    }
  }

  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& r : reports) ++counts[static_cast<int>(r.status)];
  f.note("leaves", reports.size());
  f.note("min_dphi_dalpha", val.min_d_alpha);
  f.note("horizon", horizon);
  f.note("status_counts", {{"no_shock_within_horizon", counts[0]},
                           {"forward", counts[1]},
                           {"backward", counts[2]},
                           {"both", counts[3]}});
  if (witness) {
    const auto& w = reports[*witness];
    f.note("witness", {{"alpha", w.alpha},
                       {"t_forward", optional_json(w.forward_shock_time)},
                       {"t_backward", optional_json(w.backward_shock_time)},
                       {"q_seed", optional_json(w.shock_seed_q)}});
  } else {
    f.note("witness", nullptr);
  }
}

// Convergence orders are meaningless once the residual sits at rounding level.
constexpr double kResidualFloor = 1e-12;

void report_convergence(const ConvergenceStudy& study, const std::filesystem::path& out, double order_tol,
                        Findings& f) {
  CsvWriter w(out / "residual_convergence.csv", {"h", "max_residual"});
  for (std::size_t i = 0; i < study.steps.size(); ++i) {
    const double v[] = {study.steps[i], study.max_residuals[i]};
    w.row(v);
  }
  f.note("steps", study.steps);
  f.note("max_residuals", study.max_residuals);
  f.note("orders", study.orders);
  if (study.max_residuals.back() <= kResidualFloor)
    f.check("residual_at_rounding_level", study.max_residuals.back(), kResidualFloor, true);
  else
    f.check("min_convergence_order", study.min_order(), order_tol, study.min_order() >= order_tol);
}

void run_divergence_check(const Scenario& s, const std::filesystem::path& out, Findings& f) {
  ObjectReader num(s.numerics, "$.numerics");
  num.allow_only({"dt", "h0", "levels", "grids", "tolerances"});
  const double dt = num.positive("dt", 1e-3);
  const double h0 = num.positive("h0", 0.05);
  const int levels = num.integer("levels", 3);
  ResidualBox box{-0.2, 0.2, 0.3, 0.5};
  int q_count = 64;
  if (num.has("grids")) {
    ObjectReader g(num.at("grids"), num.child_path("grids"));
    g.allow_only({"p", "t", "q"});
    if (g.has("p")) std::tie(box.p_lo, box.p_hi) = interval(g.at("p"), g.child_path("p"));
    if (g.has("t")) std::tie(box.t_lo, box.t_hi) = interval(g.at("t"), g.child_path("t"));
    q_count = g.integer("q", q_count);
  }
  double res_tol = 1e-3, order_tol = 1.9;
  if (num.has("tolerances")) {
    ObjectReader t(num.at("tolerances"), num.child_path("tolerances"));
    t.allow_only({"residual", "order"});
    res_tol = t.positive("residual", res_tol);
    order_tol = t.positive("order", order_tol);
  }
  if (levels < 2) throw ConfigError("$.numerics.levels", "need at least two levels");

  const PotentialSpec pot = scenario_potential(s);
  const FoliationSpec fol = scenario_foliation(s);
  DivergenceReport finest;
  const ConvergenceStudy study = divergence_convergence(fol, pot, box, h0, levels, q_count, dt, &finest);
  write_flux_field_csv(out / "results.csv", finest.field);
  report_convergence(study, out, order_tol, f);
  f.check("max_residual_finest", study.max_residuals.back(), res_tol, study.max_residuals.back() <= res_tol);
}

void run_pde_residual(const Scenario& s, const std::filesystem::path& out, Findings& f) {
  ObjectReader num(s.numerics, "$.numerics");
  num.allow_only({"dt", "t", "h0", "levels", "grids", "tolerances"});
  const double dt = num.positive("dt", 1e-3);
  const double t = num.number("t", 0.5);
  const double h0 = num.positive("h0", 0.02);
  const int levels = num.integer("levels", 3);
  std::vector<double> pg = UniformGrid::linspace(-0.2, 0.2, 5).points();
  std::vector<double> qg = UniformGrid::linspace(0.0, 0.9375, 16).points();
  if (num.has("grids")) {
    ObjectReader g(num.at("grids"), num.child_path("grids"));
    g.allow_only({"p", "q"});
    if (g.has("p")) pg = grid_from_json(g.at("p"), g.child_path("p"));
    if (g.has("q")) qg = grid_from_json(g.at("q"), g.child_path("q"));
  }
  double order_tol = 1.9;
  std::optional<double> res_tol;
  if (num.has("tolerances")) {
    ObjectReader tt(num.at("tolerances"), num.child_path("tolerances"));
    tt.allow_only({"residual", "order"});
    order_tol = tt.positive("order", order_tol);
    if (tt.has("residual")) res_tol = tt.positive("residual", 1.0);
  }
  if (levels < 2) throw ConfigError("$.numerics.levels", "need at least two levels");

  const PotentialSpec pot = scenario_potential(s);
  const FoliationSpec fol = scenario_foliation(s);
  const ConvergenceStudy study = pde_convergence(fol, pot, t, pg, qg, h0, levels, dt);
  {
    CsvWriter w(out / "results.csv", {"h", "max_residual", "order"});
    for (std::size_t i = 0; i < study.steps.size(); ++i)
      w.row({format_real(study.steps[i]), format_real(study.max_residuals[i]),
             i == 0 ? std::string() : format_real(study.orders[i - 1])});
  }
  report_convergence(study, out, order_tol, f);
  if (res_tol)
    f.check("max_residual_finest", study.max_residuals.back(), *res_tol, study.max_residuals.back() <= *res_tol);
}

void run_lemma1(const Scenario& s, const std::filesystem::path& out, Findings& f) {
  ObjectReader num(s.numerics, "$.numerics");
  num.allow_only({"grids", "tolerances"});
  std::vector<double> radii = UniformGrid::linspace(0.5, 2.0, 151).points();
  int angular = 256;
  if (num.has("grids")) {
    ObjectReader g(num.at("grids"), num.child_path("grids"));
    g.allow_only({"r", "angular"});
    if (g.has("r")) radii = grid_from_json(g.at("r"), g.child_path("r"));
    angular = g.integer("angular", angular);
  }
  double cs_tol = 1e-10, flux_tol = 1e-3;
  if (num.has("tolerances")) {
    ObjectReader t(num.at("tolerances"), num.child_path("tolerances"));
    t.allow_only({"cs_slack", "flux_identity"});
    cs_tol = t.positive("cs_slack", cs_tol);
    flux_tol = t.positive("flux_identity", flux_tol);
  }
  if (angular < 64) throw ConfigError("$.numerics.grids.angular", "must be at least 64");
  if (radii.size() < 3) throw ConfigError("$.numerics.grids.r", "need at least three radii");
  UniformGrid::from_points(radii);
  if (s.field.is_null()) throw ConfigError("$.field", "lemma1 needs a field");
  const PlanarField field = field_from_json(s.field, "$.field");

  const ComparisonReport rep =
      comparison_ode_check(field, radii.front(), radii.back(), static_cast<int>(radii.size()), angular);
  write_flux_profile_csv(out / "results.csv", rep.profile, field.C);

  const double min_cs = *std::min_element(rep.profile.cs_slack.begin(), rep.profile.cs_slack.end());
  f.note("field", field_name(field.shape));
  f.note("C", field.C);
  f.note("annulus", {rep.r0, rep.r1});
  f.note("inequality_applicable", rep.applicable);
  f.note("failure_radius", optional_json(rep.failure_radius));
  f.note("min_pointwise_slack_before_failure", rep.min_pointwise_slack);
  f.note("min_ode_slack", std::isnan(rep.min_ode_slack) ? json(nullptr) : json(rep.min_ode_slack));
  f.note("blowup_radius", optional_json(rep.blowup_radius));
  f.note("ode_integration_error", rep.ode_integration_error);
  f.check("cauchy_schwarz_min_slack", min_cs, -cs_tol, min_cs >= -cs_tol);
  const double flux_res = flux_derivative_residual(rep.profile);
  f.check("flux_derivative_residual", flux_res, flux_tol, flux_res <= flux_tol);
}

void run_theorem2(const Scenario& s, const RunOptions& opts, const std::filesystem::path& out, Findings& f) {
  ObjectReader num(s.numerics, "$.numerics");
  num.allow_only({"dt", "T", "horizon", "backward_horizon", "alpha_cap", "grids", "tolerances"});
  const double dt = num.positive("dt", 1e-3);
  const double T = num.positive("T", 1.0);
  const double horizon = num.positive("horizon", 3.0 * T);
  const double bh = num.positive("backward_horizon", 200.0);
  const double cap = num.positive("alpha_cap", 16.0);
  std::vector<double> alphas = UniformGrid::linspace(-1.0, 1.0, 21).points();
  int betas = 64;
  if (num.has("grids")) {
    ObjectReader g(num.at("grids"), num.child_path("grids"));
    g.allow_only({"alpha", "beta"});
    if (g.has("alpha")) alphas = grid_from_json(g.at("alpha"), g.child_path("alpha"));
    betas = g.integer("beta", betas);
  }
  double line_tol = 1e-7;
  if (num.has("tolerances")) {
    ObjectReader t(num.at("tolerances"), num.child_path("tolerances"));
    t.allow_only({"line"});
    line_tol = t.positive("line", line_tol);
  }
  if (horizon < T) throw ConfigError("$.numerics.horizon", "must be at least T");
  const PotentialSpec pot = scenario_potential(s);
  const AdmissibilityBound bound = opts.literal_bound ? AdmissibilityBound::literal : AdmissibilityBound::strict;
  f.note("bound", opts.literal_bound ? "literal (pi/T)^2" : "strict (pi/(2T))^2");

  std::optional<BackwardSearch> search;
  ConstructedFoliation cf;
  if (is_zero(pot)) {
    cf = construct(pot, T, alphas, betas, dt, bound);
  } else {
    search = backward_shock_search(pot, T, alphas, betas, bh, dt, cap, bound);
    cf = search->foliation;
  }
  f.note("curvature_bound", cf.curvature_bound);
  f.note("threshold", cf.threshold);
  f.note("comparison_margin", cf.comparison_margin);
  f.check("jacobi_min_positive", cf.jacobi_min, 0.0, cf.jacobi_min > 0.0);

  std::vector<std::vector<LeafSeed>> initial;
  for (const auto& leaf : cf.leaves) initial.push_back(leaf.initial);
  write_initial_data_csv(out / "initial_data.csv", cf.alpha_grid, initial);

  const ForwardVerification fv = verify_no_forward_shock(cf, pot, horizon, dt);
  f.note("forward_characteristics", fv.characteristics);
  f.note("forward_min_xi", fv.min_xi);
  f.check("post_cutoff_line_deviation", fv.max_line_deviation, line_tol, fv.max_line_deviation < line_tol);
  f.check("post_cutoff_order_preserved", fv.ordered ? 1.0 : 0.0, 1.0, fv.ordered);

  if (!search) {
    f.note("backward_scan", "skipped: zero force");
    write_shock_reports_csv(out / "results.csv", {});
    return;
  }
  f.note("alpha_widenings", search->widenings);
  if (search->scan) {
    const auto& scan = *search->scan;
    write_shock_reports_csv(out / "results.csv", scan.reports);
    const auto& w = scan.reports[scan.witness];
    f.note("backward_witness", {{"alpha", w.alpha},
                                {"t_backward", optional_json(w.backward_shock_time)},
                                {"q_seed", optional_json(w.shock_seed_q)}});
    f.check("backward_shock_found", 1.0, 1.0, true);
  } else {
    write_shock_reports_csv(out / "results.csv", {});
    f.note("backward_witness", nullptr);
    f.check("backward_shock_found", 0.0, 1.0, false);
  }
}

void run_conservation_check(const Scenario& s, const std::filesystem::path& out, Findings& f) {
  ObjectReader num(s.numerics, "$.numerics");
  num.allow_only({"random_states", "gamma", "grids", "tolerances"});
  const int n_random = num.integer("random_states", 100);
  const double gamma = num.number("gamma", 0.5);
  std::vector<double> pg = UniformGrid::linspace(-2.0, 2.0, 64).points();
  int q_count = 64;
  if (num.has("grids")) {
    ObjectReader g(num.at("grids"), num.child_path("grids"));
    g.allow_only({"p", "q"});
    if (g.has("p")) pg = grid_from_json(g.at("p"), g.child_path("p"));
    q_count = g.integer("q", q_count);
  }
  double charpoly_tol = 1e-9, transport_tol = 1e-10;
  if (num.has("tolerances")) {
    ObjectReader t(num.at("tolerances"), num.child_path("tolerances"));
    t.allow_only({"charpoly", "transport"});
    charpoly_tol = t.positive("charpoly", charpoly_tol);
    transport_tol = t.positive("transport", transport_tol);
  }
  if (n_random < 0) throw ConfigError("$.numerics.random_states", "must be non-negative");
  if (q_count < 2 || q_count % 2) throw ConfigError("$.numerics.grids.q", "must be even and >= 2");

  const StateU state = scenario_state(s);
  // offset grid keeps samples off exact threshold crossings
  std::vector<double> qg(static_cast<std::size_t>(q_count));
  for (int j = 0; j < q_count; ++j) qg[static_cast<std::size_t>(j)] = (j + 0.5) / q_count;

  CsvWriter csv(out / "results.csv", {"check", "value", "tolerance", "pass"});
  auto gated = [&](const std::string& name, double value, double tol) {
    const bool pass = value < tol;
    f.check(name, value, tol, pass);
    csv.row({name, format_real(value), format_real(tol), pass ? "true" : "false"});
  };
  auto info = [&](const std::string& name, double value) {
    f.note(name, value);
    csv.row({name, format_real(value), "", ""});
  };

  double dev = 0.0;
  for (double q : qg) dev = std::max(dev, charpoly_identity(state, q));
  gated("charpoly_deviation_state", dev, charpoly_tol);
  gated("transport_residual_state", transport_residual(state, pg, qg).max_rel, transport_tol);

  std::mt19937_64 rng(s.seed);
  for (int n : {2, 4, 6}) {
    double worst_dev = 0.0, worst_tr = 0.0;
    for (int i = 0; i < n_random; ++i) {
      const StateU rs = random_state(n, rng);
      const double q = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      worst_dev = std::max(worst_dev, charpoly_identity(rs, q));
      const double qq[] = {q};
      worst_tr = std::max(worst_tr, transport_residual(rs, pg, qq).max_rel);
    }
    gated("charpoly_deviation_random_n" + std::to_string(n), worst_dev, charpoly_tol);
    gated("transport_residual_random_n" + std::to_string(n), worst_tr, transport_tol);
  }

  const EllipticityReport ell = ellipticity(state, qg);
  std::size_t route_mismatch = 0;
  for (std::size_t j = 0; j < qg.size(); ++j)
    if ((ell.min_imag[j] > kEllipticTolerance) != (ell.real_root_count[j] == 0)) ++route_mismatch;
  info("elliptic", ell.elliptic ? 1.0 : 0.0);
  info("min_abs_imag_eigenvalue", ell.min_imag_overall);
  info("non_elliptic_points", static_cast<double>(ell.failing_q.size()));
  gated("ellipticity_route_mismatches", static_cast<double>(route_mismatch), 0.5);

  if (state.n == 2 && ell.elliptic) {
    try {
      const ConcavityReport c = e_concavity_n2(state, gamma, 256);
      info("E", c.E);
      info("E_dot", c.E_dot);
      info("E_ddot_displayed_formula", c.E_ddot_formula);
      info("E_ddot_reduced_oracle", c.E_ddot_oracle);
      info("E_ddot_weighted_formula", c.E_ddot_weighted);
      info("E_ddot_displayed_vs_oracle", c.discrepancy);
      info("E_ddot_weighted_vs_oracle", c.weighted_discrepancy);
    } catch (const EllipticityViolated& e) {
      f.note("concavity", std::string("skipped: ") + e.what());
    }
  }
}

void run_extract_and_scan(const Scenario& s, const std::filesystem::path& out, Findings& f) {
  ObjectReader num(s.numerics, "$.numerics");
  num.allow_only({"dt", "horizon", "t_label", "levels", "grids", "tolerances"});
  const double dt = num.positive("dt", 1e-3);
  const double horizon = num.positive("horizon", 10.0);
  const double t_label = num.number("t_label", 0.0);
  std::vector<double> levels{-1.0, -0.5, 0.0, 0.5, 1.0};
  if (num.has("levels")) levels = grid_from_json(num.at("levels"), num.child_path("levels"));
  int q_count = 64;
  if (num.has("grids")) {
    ObjectReader g(num.at("grids"), num.child_path("grids"));
    g.allow_only({"q"});
    q_count = g.integer("q", q_count);
  }
  double level_tol = 1e-10;
  if (num.has("tolerances")) {
    ObjectReader t(num.at("tolerances"), num.child_path("tolerances"));
    t.allow_only({"level"});
    level_tol = t.positive("level", level_tol);
  }
  if (q_count < 3) throw ConfigError("$.numerics.grids.q", "must be at least 3");

  const StateU state = scenario_state(s);
  const auto qg = periodic_unit_grid(q_count);
  const ExtractedLeaves ex = extract_leaves(state, levels, qg);
  write_initial_data_csv(out / "leaves.csv", ex.levels, ex.leaves);

  const PotentialSpec pot = potential_from_component(state.components[0]);
  std::vector<ShockReport> reports(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) reports[i] = scan_leaf(pot, levels[i], ex.leaves[i], horizon, dt);
  write_shock_reports_csv(out / "results.csv", reports);

  f.note("t_label", t_label);
  f.note("levels", levels);
  f.check("max_level_error", ex.max_level_error, level_tol, ex.max_level_error < level_tol);
  f.check("leaves_ordered", ex.ordered ? 1.0 : 0.0, 1.0, ex.ordered);
  const auto witness = earliest_shock(reports);
  if (witness)
    f.note("witness", {{"level", reports[*witness].alpha},
                       {"t_forward", optional_json(reports[*witness].forward_shock_time)},
                       {"t_backward", optional_json(reports[*witness].backward_shock_time)}});
  else
    f.note("witness", nullptr);
}

bool is_configuration_error(const std::exception& e) {
  return dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
         dynamic_cast<const MonotonicityViolation*>(&e) || dynamic_cast<const BoundViolated*>(&e) ||
         dynamic_cast<const NotCompactlySupported*>(&e) || dynamic_cast<const NotElliptic*>(&e) ||
         dynamic_cast<const NonUniformGrid*>(&e);
}

}  // namespace

RunResult run(const Scenario& scenario, const RunOptions& options) {
  RunResult result;
  result.output_dir = options.output_dir.empty() ? std::filesystem::path(scenario.output_dir) : options.output_dir;
  std::filesystem::create_directories(result.output_dir);
  const auto& out = result.output_dir;

  Findings f;
  std::string error;
  try {
    if (scenario.command == "shock-scan") run_shock_scan(scenario, out, f);
    else if (scenario.command == "divergence-check") run_divergence_check(scenario, out, f);
    else if (scenario.command == "pde-residual") run_pde_residual(scenario, out, f);
    else if (scenario.command == "lemma1") run_lemma1(scenario, out, f);
    else if (scenario.command == "theorem2") run_theorem2(scenario, options, out, f);
    else if (scenario.command == "conservation-check") run_conservation_check(scenario, out, f);
    else if (scenario.command == "extract-and-scan") run_extract_and_scan(scenario, out, f);
    else throw ConfigError("$.command", "unknown command '" + scenario.command + "'");
    result.exit_code = f.all_pass() ? kExitOk : kExitCertification;
  } catch (const std::exception& e) {
    error = e.what();
    result.exit_code = is_configuration_error(e) ? kExitConfig : kExitCertification;
  }

  result.summary = {{"command", scenario.command},
                    {"exit_code", result.exit_code},
                    {"checks", f.checks()},
                    {"findings", f.notes()},
                    {"error", error.empty() ? json(nullptr) : json(error)}};
  result.text = "command: " + scenario.command + "\n" + f.text();
  if (!error.empty()) result.text += "error: " + error + "\n";
  result.text += "exit code: " + std::to_string(result.exit_code) + "\n";

  std::ofstream(out / "summary.json", std::ios::binary) << result.summary.dump(2) << '\n';
  std::ofstream(out / "summary.txt", std::ios::binary) << result.text;
  return result;
}

}  // namespace shocklab
