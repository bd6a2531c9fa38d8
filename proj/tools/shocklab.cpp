// Command-line driver: shocklab run <scenario.json> [--out DIR] [--paper-bound]

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "shocklab/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Characteristic flows, shock scans and flux checks"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  bool literal_bound = false;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output directory (overrides OUTPUT_DIR and the scenario)");
  run_cmd->add_flag("--paper-bound", literal_bound, "Admit |u_qq| < (pi/T)^2 in theorem2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : shocklab::kExitConfig;
  }

  try {
    const shocklab::Scenario scenario = shocklab::load_scenario(scenario_path);
    shocklab::RunOptions options;
    options.literal_bound = literal_bound;
    if (!out_dir.empty()) {
      options.output_dir = out_dir;
    } else if (const char* env = std::getenv("OUTPUT_DIR"); env != nullptr && *env != '\0') {
      options.output_dir = env;
    }
    const shocklab::RunResult result = shocklab::run(scenario, options);
    std::cout << result.text;
    return result.exit_code;
  } catch (const shocklab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return shocklab::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return shocklab::kExitConfig;
  }
}
