#pragma once

// Scenario configuration: JSON schema, shape and forcing builders, presets.

#include <filesystem>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "setevo/evolution.hpp"
#include "setevo/forcing.hpp"
#include "setevo/shape.hpp"
#include "setevo/verify.hpp"

namespace setevo {

/// Schema violation; `pointer` is the JSON pointer of the offending value.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string pointer, const std::string& message);
  std::string pointer;
};

struct ObstacleSpec {
  std::string id;
  double beta = 0.0;
  double apex_height = 0.75;

  [[nodiscard]] std::function<double(double)> function() const;
  [[nodiscard]] std::string label() const;
};

struct ProfileConfig {
  int N = 100;
  std::vector<ObstacleSpec> obstacles;
  std::vector<double> a_values;
  double tolerance = 1e-10;
  double contact_tol = 1e-4;
};

struct OutputConfig {
  std::filesystem::path directory = "out";
  bool emit_plots = true;
  bool emit_telemetry = false;
  bool emit_masks = true;
};

enum class ScenarioKind { grid, profile };

struct LoadedConfig {
  ScenarioKind kind = ScenarioKind::grid;
  std::string name;
  /// Grid scenarios only.
  Scenario scenario;
  AuditOptions audit;
  std::vector<double> sweep_ks;
  /// Z(t_i) = F^c(t_i) instead of solving.
  bool prescribed = false;
  /// Profile scenarios only.
  ProfileConfig profile;
  OutputConfig outputs;
  /// The configuration with every default filled in; loading it again yields
  /// the same echo.
  nlohmann::json echo;
};

/// Parses and validates a configuration document. `base_dir` resolves
/// relative mask paths. Grid scenarios are fully validated (including
/// brittle-start feasibility and forcing monotonicity).
LoadedConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
LoadedConfig load_scenario(const std::filesystem::path& path);

/// Shape from its JSON description; `a` fills compatible-shape defaults.
Shape parse_shape(const nlohmann::json& j, double a, const std::string& pointer = "");

/// Forcing from a builder spec.
std::shared_ptr<const Forcing> build_forcing(const nlohmann::json& spec, double a, const GridSpec& grid,
                                             const std::string& pointer = "/forcing");

ObstacleSpec parse_obstacle(const nlohmann::json& j, const std::string& pointer = "");

/// Directory holding the shipped presets.
std::filesystem::path preset_directory();
/// Preset file for a figure id such as "f1" or "needle".
std::filesystem::path preset_path(const std::string& id);
std::vector<std::string> preset_ids();

}  // namespace setevo
