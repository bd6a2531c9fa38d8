#include "shocklab/serialization.hpp"

#include <algorithm>
#include <cmath>

namespace shocklab {

ConfigError::ConfigError(std::string path_, const std::string& message)
    : Error(path_ + ": " + message), path(std::move(path_)) {}

ObjectReader::ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw ConfigError(path_, "expected an object");
}

void ObjectReader::allow_only(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [key, value] : j_.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(child_path(key), "unknown key");
  }
}

bool ObjectReader::has(std::string_view key) const { return j_.contains(key); }

const json& ObjectReader::at(std::string_view key) const {
  if (!has(key)) throw ConfigError(child_path(key), "missing required key");
  return j_.at(std::string(key));
}

std::string ObjectReader::child_path(std::string_view key) const { return path_ + "." + std::string(key); }

double ObjectReader::number(std::string_view key) const {
  const json& v = at(key);
  if (!v.is_number()) throw ConfigError(child_path(key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(child_path(key), "expected a finite number");
  return x;
}

double ObjectReader::number(std::string_view key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

double ObjectReader::positive(std::string_view key, double fallback) const {
  const double x = number(key, fallback);
  if (!(x > 0.0)) throw ConfigError(child_path(key), "must be positive");
  return x;
}

int ObjectReader::integer(std::string_view key) const {
  const json& v = at(key);
  if (!v.is_number_integer()) throw ConfigError(child_path(key), "expected an integer");
  return v.get<int>();
}

int ObjectReader::integer(std::string_view key, int fallback) const { return has(key) ? integer(key) : fallback; }

std::string ObjectReader::string(std::string_view key) const {
  const json& v = at(key);
  if (!v.is_string()) throw ConfigError(child_path(key), "expected a string");
  return v.get<std::string>();
}

std::string ObjectReader::string(std::string_view key, std::string fallback) const {
  return has(key) ? string(key) : fallback;
}

bool ObjectReader::boolean(std::string_view key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_boolean()) throw ConfigError(child_path(key), "expected true or false");
  return v.get<bool>();
}

namespace {

const json& require_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  return j;
}

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

}  // namespace

FourierSeries series_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  r.allow_only({"mean", "modes"});
  FourierSeries s;
  s.mean = r.number("mean", 0.0);
  if (r.has("modes")) {
    const json& modes = require_array(r.at("modes"), r.child_path("modes"));
    for (std::size_t i = 0; i < modes.size(); ++i) {
      ObjectReader m(modes[i], index_path(r.child_path("modes"), i));
      m.allow_only({"k", "cos", "sin"});
      const int k = m.integer("k");
      if (k < 1) throw ConfigError(m.child_path("k"), "wavenumber must be a positive integer");
      s.modes.push_back({k, m.number("cos", 0.0), m.number("sin", 0.0)});
    }
  }
  return s;
}

json series_to_json(const FourierSeries& s) {
  json modes = json::array();
  for (const auto& m : s.modes) modes.push_back({{"k", m.k}, {"cos", m.cos}, {"sin", m.sin}});
  return {{"mean", s.mean}, {"modes", modes}};
}

namespace {

Envelope envelope_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string type = r.string("type");
  if (type == "constant") {
    r.allow_only({"type"});
    return ConstantEnvelope{};
  }
  if (type == "gaussian") {
    r.allow_only({"type", "center", "width"});
    return GaussianEnvelope{r.number("center", 0.0), r.positive("width", 1.0)};
  }
  if (type == "compact_bump") {
    r.allow_only({"type", "cutoff", "taper"});
    const double cutoff = r.positive("cutoff", 1.0);
    const double taper = r.positive("taper", 0.25 * cutoff);
    if (taper > cutoff) throw ConfigError(r.child_path("taper"), "taper must not exceed cutoff");
    return CompactBumpEnvelope{cutoff, taper};
  }
  if (type == "periodic") {
    r.allow_only({"type", "period"});
    return PeriodicEnvelope{r.positive("period", 1.0)};
  }
  throw ConfigError(r.child_path("type"), "unknown envelope type '" + type + "'");
}

json envelope_to_json(const Envelope& env) {
  if (std::holds_alternative<ConstantEnvelope>(env)) return {{"type", "constant"}};
  if (const auto* g = std::get_if<GaussianEnvelope>(&env))
    return {{"type", "gaussian"}, {"center", g->center}, {"width", g->width}};
  if (const auto* b = std::get_if<CompactBumpEnvelope>(&env))
    return {{"type", "compact_bump"}, {"cutoff", b->cutoff}, {"taper", b->taper}};
  const auto& p = std::get<PeriodicEnvelope>(env);
  return {{"type", "periodic"}, {"period", p.period}};
}

}  // namespace

PotentialSpec potential_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  r.allow_only({"modes", "envelopes"});
  PotentialSpec spec;
  if (r.has("envelopes")) {
    const json& envs = r.at("envelopes");
    ObjectReader er(envs, r.child_path("envelopes"));
    for (const auto& [name, value] : envs.items()) {
      if (name == "constant") throw ConfigError(er.child_path(name), "the name 'constant' is built in");
      spec.set_envelope(name, envelope_from_json(value, er.child_path(name)));
    }
  }
  if (r.has("modes")) {
    const json& modes = require_array(r.at("modes"), r.child_path("modes"));
    for (std::size_t i = 0; i < modes.size(); ++i) {
      ObjectReader m(modes[i], index_path(r.child_path("modes"), i));
      m.allow_only({"k", "cos", "sin", "envelope"});
      const int k = m.integer("k");
      if (k < 1) throw ConfigError(m.child_path("k"), "wavenumber must be a positive integer");
      const std::string env = m.string("envelope", "constant");
      try {
        spec.add_mode(k, m.number("cos", 0.0), m.number("sin", 0.0), env);
      } catch (const InvalidArgument& e) {
        throw ConfigError(m.child_path("envelope"), e.what());
      }
    }
  }
  return spec;
}

json potential_to_json(const PotentialSpec& spec) {
  json envs = json::object();
  for (const auto& e : spec.envelopes())
    if (e.name != "constant") envs[e.name] = envelope_to_json(e.shape);
  json modes = json::array();
  for (const auto& m : spec.modes())
    modes.push_back({{"k", m.k}, {"cos", m.cos}, {"sin", m.sin}, {"envelope", spec.envelopes()[m.envelope].name}});
  return {{"modes", modes}, {"envelopes", envs}};
}

std::vector<double> grid_from_json(const json& j, const std::string& path) {
  std::vector<double> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) throw ConfigError(index_path(path, i), "expected a number");
      out.push_back(j[i].get<double>());
    }
    if (out.empty()) throw ConfigError(path, "grid is empty");
    return out;
  }
  ObjectReader r(j, path);
  r.allow_only({"min", "max", "count"});
  const double lo = r.number("min"), hi = r.number("max");
  const int count = r.integer("count");
  if (count < 1) throw ConfigError(r.child_path("count"), "must be at least 1");
  if (count > 1 && !(hi > lo)) throw ConfigError(r.child_path("max"), "must exceed min");
  return UniformGrid::linspace(lo, hi, count).points();
}

FoliationSpec foliation_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  r.allow_only({"psi", "chi", "epsilon", "alpha_grid", "q_grid_size"});
  FoliationSpec spec;
  if (r.has("psi")) spec.base_shift = series_from_json(r.at("psi"), r.child_path("psi"));
  if (r.has("chi")) spec.alpha_coupling = series_from_json(r.at("chi"), r.child_path("chi"));
  spec.coupling = r.number("epsilon", 0.0);
  spec.alpha_grid = grid_from_json(r.at("alpha_grid"), r.child_path("alpha_grid"));
  spec.q_grid_size = r.integer("q_grid_size", 64);
  if (spec.q_grid_size < 1) throw ConfigError(r.child_path("q_grid_size"), "must be at least 1");
  return spec;
}

json foliation_to_json(const FoliationSpec& spec) {
  return {{"psi", series_to_json(spec.base_shift)},
          {"chi", series_to_json(spec.alpha_coupling)},
          {"epsilon", spec.coupling},
          {"alpha_grid", spec.alpha_grid},
          {"q_grid_size", spec.q_grid_size}};
}

StateU state_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  r.allow_only({"n", "u0", "components"});
  StateU s;
  s.n = r.integer("n");
  s.u0 = r.number("u0", 0.0);
  const json& comps = require_array(r.at("components"), r.child_path("components"));
  for (std::size_t i = 0; i < comps.size(); ++i)
    s.components.push_back(series_from_json(comps[i], index_path(r.child_path("components"), i)));
  try {
    s.check();
  } catch (const InvalidArgument& e) {
    throw ConfigError(r.path(), e.what());
  }
  return s;
}

json state_to_json(const StateU& state) {
  json comps = json::array();
  for (const auto& c : state.components) comps.push_back(series_to_json(c));
  return {{"n", state.n}, {"u0", state.u0}, {"components", comps}};
}

PlanarField field_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string type = r.string("type");
  PlanarField f;
  if (type == "zero") {
    r.allow_only({"type", "C"});
    f.shape = ZeroField{};
  } else if (type == "linear") {
    r.allow_only({"type", "C", "a", "b", "c", "d"});
    f.shape = LinearField{r.number("a", 0.0), r.number("b", 0.0), r.number("c", 0.0), r.number("d", 0.0)};
  } else if (type == "gaussian") {
    r.allow_only({"type", "C", "amp", "swirl", "sigma"});
    f.shape = GaussianField{r.number("amp", 1.0), r.number("swirl", 0.0), r.positive("sigma", 1.0)};
  } else if (type == "cubic") {
    r.allow_only({"type", "C", "c1", "c3", "s"});
    f.shape = CubicField{r.number("c1", 0.0), r.number("c3", 1.0), r.number("s", 0.0)};
  } else {
    throw ConfigError(r.child_path("type"), "unknown field type '" + type + "'");
  }
  f.C = r.positive("C", 1.0);
  return f;
}

}  // namespace shocklab
