#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "shocklab/conservation.hpp"
#include "shocklab/serialization.hpp"

namespace shocklab {

/// Parsed scenario file. Command-specific blocks are kept as JSON and
/// decoded (strictly) when the command runs.
struct Scenario {
  std::string command;
  json potential;
  json foliation;
  json state;
  json field;
  json numerics = json::object();
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

/// Throws ConfigError (with JSON path) on unknown keys or bad types.
[[nodiscard]] Scenario parse_scenario(const json& j);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

struct RunOptions {
  std::filesystem::path output_dir;  // empty: use the scenario's output_dir
  bool literal_bound = false;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitCertification = 2 };

struct RunResult {
  int exit_code = kExitOk;
  json summary;
  std::string text;
  std::filesystem::path output_dir;
};

/// Executes the scenario and writes results.csv, the plot tables,
/// summary.json and summary.txt into the output directory.
RunResult run(const Scenario& scenario, const RunOptions& options);

/// Random Fourier state of dimension n (two modes per component).
[[nodiscard]] StateU random_state(int n, std::mt19937_64& rng);

}  // namespace shocklab
