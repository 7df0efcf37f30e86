#include "voltacell/simulation.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace voltacell {

namespace fs = std::filesystem;

BatteryProblem::BatteryProblem(BatteryModel& model, std::function<double(double)> i_app)
    : model_(&model), i_app_(std::move(i_app)) {}

SimState BatteryProblem::stage1(const SimState& prev, const SimState& mid, double, double dt) {
  return model_->advance_stage1(prev, mid, dt);
}

void BatteryProblem::stage2(SimState& cur, const SimState& lagged, double t) {
  model_->solve_stage2(cur, lagged, current(t));
}

SimState BatteryProblem::euler_predict(const SimState& prev, double, double dt) {
  return model_->euler_predict(prev, dt);
}

SimState BatteryProblem::combine(const SimState& a, double wa, const SimState& b, double wb) const {
  return voltacell::combine(a, wa, b, wb);
}

double BatteryProblem::relative_update(const SimState& a, const SimState& b) const {
  return model_->relative_update(a, b);
}

Simulation::Simulation(const ScenarioConfig& config)
    : config_(config), scaled_(nondimensionalize(config)) {
  const DomainGeometry geom = build_interdigitated_domain(config.dims);
  mesh_ = std::make_unique<Mesh>(generate_layered_mesh(geom, config.mesh, scaled_.scales.length()));
  model_ = std::make_unique<BatteryModel>(*mesh_, scaled_.materials, scaled_.options);
  const double i_app = scaled_.i_app;
  problem_ = std::make_unique<BatteryProblem>(*model_, [i_app](double) { return i_app; });
  initial_ = model_->initial_state(config.soc_anode, config.soc_cathode);
  IntegratorOptions io;
  io.extra_fp_iters = config.extra_fp_iters;
  io.fp_tol = config.fp_tol;
  io.warmup_steps = config.warmup_steps;
  integrator_ = std::make_unique<StaggeredMidpoint<BatteryProblem>>(*problem_, initial_, io);
  num_steps_ = config.t_end > 0.0 ? static_cast<int>(std::lround(config.t_end / config.dt)) : 0;
}

Simulation::~Simulation() = default;

const SimState& Simulation::state() const { return integrator_->state(); }

double Simulation::time() const { return steps_taken_ * config_.dt; }

void Simulation::warmup() {
  problem_->set_loaded(false);
  integrator_->warmup(scaled_.dt);
  problem_->set_loaded(true);
}

StepStats Simulation::step() {
  if (done()) throw std::logic_error("Simulation::step: all steps already taken");
  const StepInfo info = integrator_->step(scaled_.dt);
  ++steps_taken_;
  StepStats s;
  s.index = steps_taken_;
  s.t = time();
  s.sweeps = info.sweeps;
  s.updates = info.updates;
  s.interface = model_->last_interface_report();
  s.clamp_events = static_cast<long long>(model_->guard().count());
  return s;
}

TimeSeriesRecord Simulation::record() const {
  return record_quantities(*model_, state(), scaled_.scales, time(),
                           static_cast<long long>(model_->guard().count()));
}

std::string version_string() { return "0.1.0"; }

std::string run_manifest(const ScenarioConfig& config, const ScaleSet& scales,
                         const std::string& status, double p_avg) {
  nlohmann::ordered_json j;
  j["program"] = "voltacell";
  j["version"] = version_string();
  j["status"] = status;
  j["scenario"] = config.name;
  j["config_hash"] = config_hash(config);
  j["config"] = config.to_text();
  j["threads"] = thread_count();
  nlohmann::ordered_json sc;
  sc["length_m"] = scales.length();
  sc["time_s"] = scales.time();
  sc["potential_V"] = scales.potential();
  sc["temperature_K"] = scales.temperature();
  sc["concentration_mol_m3"] = scales.concentration();
  sc["stress_Pa"] = scales.stress();
  j["scales"] = sc;
  const MaterialSet m = config.materials();
  nlohmann::ordered_json mat;
  auto electrode = [](const ElectrodeMaterial& e) {
    return nlohmann::ordered_json{{"rho_cv", e.rho_cv}, {"lambda", e.lambda}, {"E", e.E},
                                  {"nu", e.nu},         {"alpha", e.alpha},   {"omega", e.omega},
                                  {"gamma", e.gamma},   {"D0", e.D0},         {"c_max", e.c_max}};
  };
  mat["anode"] = electrode(m.anode);
  mat["cathode"] = electrode(m.cathode);
  mat["electrolyte"] = {{"rho_cv", m.electrolyte.rho_cv}, {"lambda", m.electrolyte.lambda},
                        {"kappa", m.electrolyte.kappa},   {"D", m.electrolyte.D},
                        {"t_plus", m.electrolyte.t_plus}};
  mat["k_bv"] = m.k_bv;
  mat["alpha_D"] = m.alpha_D;
  mat["beta_D"] = m.beta_D;
  mat["pi_max"] = m.pi_max;
  mat["theta0"] = m.theta0;
  mat["c_e0"] = m.c_e0;
  mat["R"] = m.R;
  mat["F"] = m.F;
  j["materials"] = mat;
  j["p_avg_w_per_m3"] = p_avg;
  j["p_avg_w_per_dm3"] = p_avg * 1e-3;
  j["power_density_basis"] = "per unit out-of-plane depth, normalized by the 2D cell area";
  return j.dump(2) + "\n";
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

double result_power(RunResult& r, double i_app) {
  std::vector<double> t, v;
  for (const auto& rec : r.records) {
    t.push_back(rec.t);
    v.push_back(rec.v_out);
  }
  if (t.size() < 2 || !(t.back() > t.front())) return 0.0;
  return power_density(t, v, i_app, r.collector_length, r.cell_area);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  Simulation sim(config);
  const ScaleSet& scales = sim.scaled().scales;
  RunResult result;
  result.collector_length = boundary_measure(sim.model(), BoundaryPart::CcPlus) * scales.length();
  result.cell_area = sim.model().measure(Support::All) * scales.length() * scales.length();

  fs::path dir(config.output_dir);
  std::ofstream progress;
  if (options.write_outputs) {
    fs::create_directories(dir);
    if (config.write_vtk) fs::create_directories(dir / "snapshots");
    progress.open(dir / "progress.log");
  }
  auto log_line = [&](const std::string& line) {
    if (progress.is_open()) progress << line << "\n";
    if (options.log) *options.log << line << "\n";
  };
  int snapshot_id = 0;
  auto snapshot = [&] {
    result.snapshot_times.push_back(sim.time());
    if (options.write_outputs && config.write_vtk) {
      std::ostringstream name;
      name << "snapshot_" << std::setw(5) << std::setfill('0') << snapshot_id << ".vtk";
      export_vtk(sim.model(), sim.state(), scales, (dir / "snapshots" / name.str()).string());
    }
    ++snapshot_id;
  };
  auto finish = [&](const std::string& status) {
    result.p_avg = result_power(result, config.i_app);
    if (!options.write_outputs) return;
    write_timeseries_csv(result.records, (dir / "timeseries.csv").string());
    write_text(dir / "manifest.json", run_manifest(config, scales, status, result.p_avg));
  };

  try {
    sim.warmup();
    result.records.push_back(sim.record());
    snapshot();
    double next_snapshot = config.snapshot_interval;
    while (!sim.done()) {
      StepStats s = sim.step();
      result.records.push_back(sim.record());
      double max_update = 0.0;
      for (double u : s.updates) max_update = std::max(max_update, u);
      std::ostringstream line;
      line << "step " << s.index << " t=" << s.t << " sweeps=" << s.sweeps
           << " max_update=" << std::setprecision(3) << max_update << " clamps=" << s.clamp_events;
      log_line(line.str());
      result.steps.push_back(std::move(s));
      const bool last = sim.done();
      if (last || (config.snapshot_interval > 0.0 && sim.time() >= next_snapshot - 1e-9 * config.dt)) {
        snapshot();
        if (config.snapshot_interval > 0.0) {
          while (next_snapshot <= sim.time() + 1e-9 * config.dt) next_snapshot += config.snapshot_interval;
        }
      }
    }
  } catch (const std::exception& e) {
    log_line(std::string("error: ") + e.what());
    finish(std::string("failed: ") + e.what());
    throw;
  }
  finish("completed");
  return result;
}

}  // namespace voltacell
