#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "shocklab/backward_construction.hpp"
#include "shocklab/csv.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/serialization.hpp"

using namespace shocklab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "shocklab_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error_path(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.path;
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("format_real round-trips doubles") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_real(x)) == x);
  CHECK(format_real(NAN) == "nan");
  CHECK(format_real(INFINITY) == "inf");
  CHECK(format_real(-INFINITY) == "-inf");
  CHECK(format_optional(std::nullopt).empty());
}

TEST_CASE("potential JSON round trip") {
  const json j = json::parse(R"({
    "modes": [{"k": 1, "cos": 0.3, "sin": 0.0, "envelope": "constant"},
              {"k": 2, "cos": 0.0, "sin": 0.1, "envelope": "bump"},
              {"k": 3, "cos": 0.01, "sin": 0.02, "envelope": "g"}],
    "envelopes": {"bump": {"type": "compact_bump", "cutoff": 2.0},
                  "g": {"type": "gaussian", "center": 0.5, "width": 0.2},
                  "wave": {"type": "periodic", "period": 3.0}}
  })");
  const PotentialSpec pot = potential_from_json(j);
  CHECK(pot.modes().size() == 3);
  const auto& bump = std::get<CompactBumpEnvelope>(pot.envelopes()[pot.envelope_index("bump")].shape);
  CHECK(bump.taper == 0.5);  // default: a quarter of the cutoff
  const PotentialSpec again = potential_from_json(potential_to_json(pot));
  for (double q : {0.1, 0.7})
    for (double t : {-1.0, 0.4, 1.9, 2.5}) CHECK(eval_u(again, q, t) == eval_u(pot, q, t));
}

TEST_CASE("strict schema errors carry the JSON path") {
  CHECK(config_error_path([] { (void)potential_from_json(json::parse(R"({"modes": [], "extra": 1})")); }) == "$.extra");
  CHECK(config_error_path([] {
          (void)potential_from_json(json::parse(R"({"modes": [{"k": 1, "cos": 1, "sin": 0, "amp": 2}]})"));
        }) == "$.modes[0].amp");
  CHECK(config_error_path([] {
          (void)potential_from_json(json::parse(R"({"modes": [{"k": 1, "cos": "x", "sin": 0}]})"));
        }) == "$.modes[0].cos");
  CHECK(config_error_path([] {
          (void)potential_from_json(json::parse(R"({"modes": [{"k": 1, "cos": 1, "sin": 0, "envelope": "nope"}]})"));
        }) == "$.modes[0].envelope");
  CHECK(config_error_path([] {
          (void)potential_from_json(json::parse(R"({"modes": [], "envelopes": {"b": {"type": "square"}}})"));
        }) == "$.envelopes.b.type");
  CHECK(config_error_path([] { (void)foliation_from_json(json::parse(R"({"alpha_grid": [0, 1], "psy": {}})")); }) ==
        "$.psy");
  CHECK(config_error_path([] { (void)foliation_from_json(json::parse(R"({"psi": {"mean": 0}})")); }) ==
        "$.alpha_grid");
  CHECK(config_error_path([] { (void)grid_from_json(json::parse(R"({"min": 0, "max": 1})"), "$.g"); }) == "$.g.count");
  CHECK(config_error_path([] { (void)state_from_json(json::parse(R"({"n": 3, "u0": 0, "components": []})")); }) ==
        "$");
  CHECK(config_error_path([] { (void)field_from_json(json::parse(R"({"type": "linear", "C": 1, "e": 0})")); }) ==
        "$.e");
}

TEST_CASE("grids from JSON") {
  CHECK(grid_from_json(json::parse("[0.5, 1, 2]"), "$") == std::vector<double>{0.5, 1.0, 2.0});
  const auto g = grid_from_json(json::parse(R"({"min": -1, "max": 1, "count": 5})"), "$");
  CHECK(g == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(grid_from_json(json::parse(R"({"min": 2, "max": 2, "count": 1})"), "$") == std::vector<double>{2.0});
}

TEST_CASE("foliation and state JSON round trips") {
  FoliationSpec f;
  f.base_shift = FourierSeries{0.1, {{1, 0.0, 0.05}}};
  f.alpha_coupling = FourierSeries{0.0, {{2, 1.0, 0.0}}};
  f.coupling = 0.02;
  f.alpha_grid = {-1.0, 0.0, 1.0};
  f.q_grid_size = 32;
  const FoliationSpec g = foliation_from_json(foliation_to_json(f));
  CHECK(g.alpha_grid == f.alpha_grid);
  CHECK(g.q_grid_size == 32);
  CHECK(initial_leaf(g, 0.7, 0.3).value == initial_leaf(f, 0.7, 0.3).value);

  StateU s;
  s.n = 2;
  s.u0 = 0.3;
  s.components = {FourierSeries{1.5, {{1, 0.1, 0.0}}}, FourierSeries{0.0, {{1, 0.0, 0.1}}}};
  const StateU t = state_from_json(state_to_json(s));
  CHECK(t.u0 == 0.3);
  CHECK(t.components[1].value(0.2) == s.components[1].value(0.2));
}

TEST_CASE("field JSON") {
  const PlanarField f = field_from_json(json::parse(R"({"type": "gaussian", "amp": 1, "swirl": 0.5, "sigma": 0.8, "C": 2})"));
  CHECK(f.C == 2.0);
  CHECK(field_name(f.shape) == "gaussian");
  CHECK(std::holds_alternative<ZeroField>(field_from_json(json::parse(R"({"type": "zero"})")).shape));
}

TEST_CASE("trajectory CSV") {
  const fs::path p = scratch("traj.csv");
  Trajectory tr;
  tr.samples = {CharPoint{0.0, 1.0, 1.0, 0.0, 0.0}, CharPoint{0.1, 1.0, 1.0, 0.0, 0.1}};
  write_trajectory_csv(p, tr);
  CHECK(slurp(p) == "t,q,p,xi,eta\n0,0,1,1,0\n0.10000000000000001,0.10000000000000001,1,1,0\n");
}

TEST_CASE("shock report CSV leaves absent times empty") {
  const fs::path p = scratch("shocks.csv");
  std::vector<ShockReport> r(2);
  r[0].alpha = 0.5;
  r[1].alpha = 1.0;
  r[1].forward_shock_time = 2.0;
  r[1].shock_seed_q = 0.25;
  r[1].status = ShockStatus::forward;
  write_shock_reports_csv(p, r);
  CHECK(slurp(p) == "alpha,status,t_forward,t_backward,q_seed\n0.5,no_shock_within_horizon,,,\n1,forward,2,,0.25\n");
}

TEST_CASE("constructed initial data survives the CSV round trip") {
  const auto pot = PotentialSpec::single_mode(1, 0.015, 0.0, CompactBumpEnvelope{1.0, 0.25});
  const auto cf = construct(pot, 1.0, std::vector<double>{-0.5, 0.0, 0.5}, 64, 1e-3);
  std::vector<std::vector<LeafSeed>> initial;
  for (const auto& leaf : cf.leaves) initial.push_back(leaf.initial);
  const fs::path p = scratch("initial.csv");
  write_initial_data_csv(p, cf.alpha_grid, initial);

  const auto rows = read_initial_data_csv(p);
  CHECK(rows.size() == 3 * 64);
  const auto leaves = leaves_from_initial_data(rows);
  REQUIRE(leaves.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(leaves[i].alpha == cf.alpha_grid[i]);
    for (std::size_t j = 0; j < 64; ++j) {
      CHECK(leaves[i].seeds[j].q0 == cf.leaves[i].initial[j].q0);
      CHECK(leaves[i].seeds[j].p0 == cf.leaves[i].initial[j].p0);
      // three-point differences approximate the variational slope
      CHECK(std::abs(leaves[i].seeds[j].slope - cf.leaves[i].initial[j].slope) < 5e-3);
    }
    // re-ingested as foliated data: no forward focusing
    const auto rep = scan_leaf(pot, leaves[i].alpha, leaves[i].seeds, 3.0, 1e-3, {true, false});
    CHECK_FALSE(rep.forward_shock_time.has_value());
  }
}

TEST_CASE("malformed initial data is rejected") {
  const fs::path p = scratch("bad.csv");
  std::ofstream(p) << "alpha,q0,p0\n0,0.1\n";
  CHECK_THROWS_AS((void)read_initial_data_csv(p), Error);
  std::ofstream(p) << "a,b,c\n";
  CHECK_THROWS_AS((void)read_initial_data_csv(p), Error);
}
