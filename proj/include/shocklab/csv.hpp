#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shocklab/backward_construction.hpp"
#include "shocklab/characteristics.hpp"
#include "shocklab/foliation.hpp"
#include "shocklab/integral_geometry.hpp"

namespace shocklab {

/// Shortest round-trip-safe text: 17 significant digits, "nan" / "inf" for non-finite values.
[[nodiscard]] std::string format_real(double x);
[[nodiscard]] std::string format_optional(const std::optional<double>& x);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);
  void row(std::initializer_list<std::string> cells);
  void row(std::span<const double> values);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

/// Columns t,q,p,xi,eta.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
/// Columns alpha,status,t_forward,t_backward,q_seed.
void write_shock_reports_csv(const std::filesystem::path& path, std::span<const ShockReport> reports);
/// Columns p,t,V1,V2,source,residual.
void write_flux_field_csv(const std::filesystem::path& path, const FluxField& field);
/// Columns r,phi,ring_div,ring_norm,cs_slack,ode_slack.
void write_flux_profile_csv(const std::filesystem::path& path, const FluxProfile& profile, double C);
/// Columns alpha,q0,p0 (initial-data format read back by read_initial_data_csv).
void write_initial_data_csv(const std::filesystem::path& path, std::span<const double> labels,
                            std::span<const std::vector<LeafSeed>> leaves);

struct InitialDataRow {
  double alpha = 0.0;
  double q0 = 0.0;
  double p0 = 0.0;
};

[[nodiscard]] std::vector<InitialDataRow> read_initial_data_csv(const std::filesystem::path& path);

struct SampledLeaf {
  double alpha = 0.0;
  std::vector<LeafSeed> seeds;  // slope from periodic three-point differences in q0
};

/// Groups consecutive rows with equal alpha into leaves.
[[nodiscard]] std::vector<SampledLeaf> leaves_from_initial_data(std::span<const InitialDataRow> rows);

}  // namespace shocklab
