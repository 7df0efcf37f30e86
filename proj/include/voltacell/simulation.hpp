#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "voltacell/battery_model.hpp"
#include "voltacell/config.hpp"
#include "voltacell/postprocess.hpp"
#include "voltacell/time_integrator.hpp"

namespace voltacell {

/// Adapter exposing a BatteryModel to StaggeredMidpoint. Times are internal.
class BatteryProblem {
 public:
  using State = SimState;

  BatteryProblem(BatteryModel& model, std::function<double(double)> i_app);

  /// Unloaded problems apply zero current (warm-up).
  void set_loaded(bool loaded) { loaded_ = loaded; }
  bool loaded() const { return loaded_; }
  double current(double t) const { return loaded_ ? i_app_(t) : 0.0; }

  State stage1(const State& prev, const State& mid, double t, double dt);
  void stage2(State& cur, const State& lagged, double t);
  State euler_predict(const State& prev, double t, double dt);
  State combine(const State& a, double wa, const State& b, double wb) const;
  double relative_update(const State& a, const State& b) const;

 private:
  BatteryModel* model_;
  std::function<double(double)> i_app_;
  bool loaded_ = true;
};

static_assert(StaggeredProblem<BatteryProblem>);

/// Diagnostics of one accepted step (internal units unless noted).
struct StepStats {
  int index = 0;
  double t = 0.0;  // s
  int sweeps = 0;
  std::vector<double> updates;
  InterfaceReport interface;  // at the midpoint of the accepted iterate
  long long clamp_events = 0;  // cumulative
};

/// A scenario ready to step: mesh, scaled model and integrator.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config);
  ~Simulation();

  const ScenarioConfig& config() const { return config_; }
  const ScaledScenario& scaled() const { return scaled_; }
  const Mesh& mesh() const { return *mesh_; }
  BatteryModel& model() { return *model_; }
  const BatteryModel& model() const { return *model_; }
  const SimState& state() const;
  const SimState& initial_state() const { return initial_; }
  /// Simulated time in seconds.
  double time() const;
  int num_steps() const { return num_steps_; }
  int steps_taken() const { return steps_taken_; }
  bool done() const { return steps_taken_ >= num_steps_; }

  /// Unloaded relaxation steps; the clock stays at zero.
  void warmup();
  StepStats step();
  TimeSeriesRecord record() const;

 private:
  ScenarioConfig config_;
  ScaledScenario scaled_;
  std::unique_ptr<Mesh> mesh_;
  std::unique_ptr<BatteryModel> model_;
  std::unique_ptr<BatteryProblem> problem_;
  std::unique_ptr<StaggeredMidpoint<BatteryProblem>> integrator_;
  SimState initial_;
  int num_steps_ = 0;
  int steps_taken_ = 0;
};

struct RunOptions {
  bool write_outputs = true;
  std::ostream* log = nullptr;  // progress lines, one per step
};

struct RunResult {
  std::vector<TimeSeriesRecord> records;
  std::vector<StepStats> steps;
  std::vector<double> snapshot_times;  // s
  double p_avg = 0.0;                  // W m^-3
  double collector_length = 0.0;       // m
  double cell_area = 0.0;              // m^2
};

/// Warm-up, then every step. With outputs enabled the run directory gets
/// timeseries.csv, progress.log, manifest.json and VTK snapshots; on failure
/// the completed prefix is written before the error propagates.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Manifest JSON text for a run.
std::string run_manifest(const ScenarioConfig& config, const ScaleSet& scales,
                         const std::string& status, double p_avg);

std::string version_string();

}  // namespace voltacell
