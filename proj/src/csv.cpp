#include "shocklab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "shocklab/errors.hpp"
#include "shocklab/fourier.hpp"

namespace shocklab {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_optional(const std::optional<double>& x) { return x ? format_real(*x) : std::string(); }

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw Error("cannot open " + path.string() + " for writing");
  row(header);
}

void CsvWriter::row(std::initializer_list<std::string> cells) {
  if (cells.size() != columns_) throw InvalidArgument("CSV row has the wrong number of columns");
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) throw InvalidArgument("CSV row has the wrong number of columns");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_real(values[i]);
  }
  out_ << '\n';
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  CsvWriter w(path, {"t", "q", "p", "xi", "eta"});
  for (const auto& s : traj.samples) {
    const double v[] = {s.t, s.q, s.p, s.xi, s.eta};
    w.row(v);
  }
}

void write_shock_reports_csv(const std::filesystem::path& path, std::span<const ShockReport> reports) {
  CsvWriter w(path, {"alpha", "status", "t_forward", "t_backward", "q_seed"});
  for (const auto& r : reports)
    w.row({format_real(r.alpha), to_string(r.status), format_optional(r.forward_shock_time),
           format_optional(r.backward_shock_time), format_optional(r.shock_seed_q)});
}

void write_flux_field_csv(const std::filesystem::path& path, const FluxField& f) {
  CsvWriter w(path, {"p", "t", "V1", "V2", "source", "residual"});
  for (std::size_t ip = 0; ip < f.p_grid.size(); ++ip) {
    for (std::size_t it = 0; it < f.t_grid.size(); ++it) {
      const std::size_t i = f.index(ip, it);
      const double v[] = {f.p_grid[ip], f.t_grid[it], f.v1[i], f.v2[i], f.source[i], f.residual[i]};
      w.row(v);
    }
  }
}

void write_flux_profile_csv(const std::filesystem::path& path, const FluxProfile& p, double C) {
  CsvWriter w(path, {"r", "phi", "ring_div", "ring_norm", "cs_slack", "ode_slack"});
  for (std::size_t i = 0; i < p.radii.size(); ++i) {
    const double r = p.radii[i];
    const double v[] = {r,           p.phi[i],   p.ring_div[i],
                        p.ring_norm[i], p.cs_slack[i], p.ring_div[i] - C * p.phi[i] * p.phi[i] / (kTwoPi * r)};
    w.row(v);
  }
}

void write_initial_data_csv(const std::filesystem::path& path, std::span<const double> labels,
                            std::span<const std::vector<LeafSeed>> leaves) {
  if (labels.size() != leaves.size()) throw InvalidArgument("one label per leaf is required");
  CsvWriter w(path, {"alpha", "q0", "p0"});
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (const auto& s : leaves[i]) {
      const double v[] = {labels[i], s.q0, s.p0};
      w.row(v);
    }
  }
}

std::vector<InitialDataRow> read_initial_data_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "alpha,q0,p0") throw Error(path.string() + ": expected header alpha,q0,p0");
  std::vector<InitialDataRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    InitialDataRow r;
    char c1 = 0, c2 = 0;
    if (!(ss >> r.alpha >> c1 >> r.q0 >> c2 >> r.p0) || c1 != ',' || c2 != ',')
      throw Error(path.string() + ": malformed row '" + line + "'");
    rows.push_back(r);
  }
  return rows;
}


std::vector<SampledLeaf> leaves_from_initial_data(std::span<const InitialDataRow> rows) {
  std::vector<SampledLeaf> leaves;
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].alpha == rows[i].alpha) ++j;
    const std::size_t n = j - i;
    if (n < 3) throw InvalidArgument("a sampled leaf needs at least three points");
    SampledLeaf leaf;
    leaf.alpha = rows[i].alpha;
    for (std::size_t k = 0; k < n; ++k) {
      // neighbours with periodic wrap; q0 increases along the leaf within one period
      const auto& prev = rows[i + (k + n - 1) % n];
      const auto& cur = rows[i + k];
      const auto& next = rows[i + (k + 1) % n];
      const double hm = cur.q0 - prev.q0 + (k == 0 ? 1.0 : 0.0);
      const double hp = next.q0 - cur.q0 + (k == n - 1 ? 1.0 : 0.0);
      const double slope = (hm * hm * (next.p0 - cur.p0) + hp * hp * (cur.p0 - prev.p0)) / (hm * hp * (hm + hp));
      leaf.seeds.push_back({cur.q0, cur.p0, slope});
    }
    leaves.push_back(std::move(leaf));
    i = j;
  }
  return leaves;
}

}  // namespace shocklab
