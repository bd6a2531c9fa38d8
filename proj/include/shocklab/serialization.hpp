#pragma once

// JSON forms of the library's specification types. Readers are strict:
// unknown keys and wrong types raise ConfigError carrying the JSON path.

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "shocklab/conservation.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/foliation.hpp"
#include "shocklab/fourier.hpp"
#include "shocklab/integral_geometry.hpp"
#include "shocklab/potential.hpp"

namespace shocklab {

using json = nlohmann::json;

class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message);
  std::string path;
};

/// Typed, path-aware access to one JSON object.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path);

  /// Rejects any key not in `allowed`.
  void allow_only(std::initializer_list<std::string_view> allowed) const;

  [[nodiscard]] bool has(std::string_view key) const;
  [[nodiscard]] const json& at(std::string_view key) const;
  [[nodiscard]] std::string child_path(std::string_view key) const;

  [[nodiscard]] double number(std::string_view key) const;
  [[nodiscard]] double number(std::string_view key, double fallback) const;
  [[nodiscard]] double positive(std::string_view key, double fallback) const;
  [[nodiscard]] int integer(std::string_view key) const;
  [[nodiscard]] int integer(std::string_view key, int fallback) const;
  [[nodiscard]] std::string string(std::string_view key) const;
  [[nodiscard]] std::string string(std::string_view key, std::string fallback) const;
  [[nodiscard]] bool boolean(std::string_view key, bool fallback) const;

  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

[[nodiscard]] FourierSeries series_from_json(const json& j, const std::string& path);
[[nodiscard]] json series_to_json(const FourierSeries& s);

[[nodiscard]] PotentialSpec potential_from_json(const json& j, const std::string& path = "$");
[[nodiscard]] json potential_to_json(const PotentialSpec& spec);

/// Either an explicit list of numbers or {"min", "max", "count"}.
[[nodiscard]] std::vector<double> grid_from_json(const json& j, const std::string& path);

[[nodiscard]] FoliationSpec foliation_from_json(const json& j, const std::string& path = "$");
[[nodiscard]] json foliation_to_json(const FoliationSpec& spec);

[[nodiscard]] StateU state_from_json(const json& j, const std::string& path = "$");
[[nodiscard]] json state_to_json(const StateU& state);

[[nodiscard]] PlanarField field_from_json(const json& j, const std::string& path = "$");

}  // namespace shocklab
