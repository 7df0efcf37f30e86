#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "voltacell/battery_model.hpp"
#include "voltacell/geometry.hpp"
#include "voltacell/materials.hpp"
#include "voltacell/units.hpp"

namespace voltacell {

/// Configuration errors, collected and reported together.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
};

/// One scenario in SI units.
struct ScenarioConfig {
  std::string name = "custom";
  double i_app = 5.0;     // A m^-2, positive in discharge
  double t_end = 14400.0;  // s
  double dt = 3.0;        // s
  double soc_anode = 0.5;
  double soc_cathode = 0.5;
  ModelMode mode = ModelMode::Full;
  HeatSign heat_sign = HeatSign::Physical;
  bool diffusional_conductivity = true;
  CellDimensions dims;
  MeshSpec mesh;
  double guard_eps_e = 2.0;  // mol m^-3
  double guard_eps_s_fraction = 1e-4;
  GuardAction guard_action = GuardAction::ClampAndLog;
  int extra_fp_iters = 4;
  double fp_tol = 1e-8;
  int warmup_steps = 2;
  double snapshot_interval = 60.0;  // s; 0 disables intermediate snapshots
  bool write_vtk = true;
  std::string output_dir = "out";
  double length_ref = 1e-4;  // m
  double time_ref = 60.0;    // s
  /// Overrides such as "anode.E" or "electrolyte.kappa", SI values.
  std::map<std::string, double> material_overrides;

  /// Every invariant violation, empty when valid.
  std::vector<std::string> violations() const;
  void validate() const;
  MaterialSet materials() const;
  /// Canonical `key = value` text; parse_scenario_text round-trips it.
  std::string to_text() const;
};

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);
ScenarioConfig preset(const std::string& name);

/// Flat `key = value` lines with `#` comments. A `preset` key selects the
/// base values regardless of where it appears.
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin = "<text>");
ScenarioConfig parse_scenario_file(const std::string& path);
/// A preset name or a path to a scenario file.
ScenarioConfig load_scenario(const std::string& preset_or_path);

/// Every accepted configuration key.
const std::vector<std::string>& config_keys();
/// Closest known keys by edit distance.
std::vector<std::string> suggest_keys(const std::string& key);

/// Nondimensional bundle for the solver.
struct ScaledScenario {
  ScaleSet scales;
  MaterialSet materials;  // internal units
  double i_app = 0.0;
  double dt = 0.0;
  double t_end = 0.0;
  GuardPolicy guard;
  ModelOptions options;
};

ScaleSet scales_for(const ScenarioConfig& config, const MaterialSet& si_materials);
ScaledScenario nondimensionalize(const ScenarioConfig& config);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

}  // namespace voltacell
