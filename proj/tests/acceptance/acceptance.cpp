// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dense_oracle.hpp"
#include "voltacell/assembly.hpp"
#include "voltacell/config.hpp"
#include "voltacell/kinetics.hpp"
#include "voltacell/materials.hpp"
#include "voltacell/postprocess.hpp"
#include "voltacell/simulation.hpp"
#include "voltacell/verification.hpp"

using namespace voltacell;

namespace {

// Tolerances and limits.
constexpr double kTemporalMinOrder = 1.9;
constexpr double kTemporalMaxSeconds = 10.0;
constexpr double kSpatialRateTol = 0.15;
constexpr double kSpatialMaxSeconds = 60.0;
constexpr double kEquilibriumTol = 1e-7;
constexpr double kEquilibriumMaxSeconds = 60.0;
constexpr int kEquilibriumSteps = 10;
constexpr double kMassTol = 1e-8;
constexpr int kMassSteps = 20;
constexpr double kHeatRoundoff = 1e-10;  // K, allowance for the weighted mean step difference
constexpr double kVoltage0 = 3.988;
constexpr double kVoltage0Tol = 0.01;
constexpr double kTransient = 60.0;  // s
constexpr double kTheta0 = 298.15;
constexpr double kEcThetaTol = 1e-9;
constexpr double kSymmetryTol = 1e-12;
constexpr int kDenseMaxDofs = 500;
constexpr double kOracleTol = 1e-12;

// High-precision reference values.
constexpr double kKappaD = -6.546e-3, kKappaDTol = 1e-6;
constexpr double kOcpA = 0.13453, kOcpATol = 1e-5;
constexpr double kOcpC = 4.1225, kOcpCTol = 1e-3;
constexpr double kIc = 0.7478, kIcTol = 1e-3;
constexpr double kKappaDRef = -0.0065464691601566;
constexpr double kOcpARef = 0.13453181139592737;
constexpr double kOcpCRef = 4.122828504808762;
constexpr double kIcRef = 0.74773211920737291;
constexpr double kV0Ref = 3.9882966934128346;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ScenarioConfig desk(const std::string& name, ModelMode mode = ModelMode::Full) {
  ScenarioConfig c = preset(name);
  c.mode = mode;
  c.mesh = MeshSpec::coarse();
  c.dt = 6.0;
  c.t_end = 600.0;
  c.write_vtk = false;
  c.snapshot_interval = 0.0;
  return c;
}

struct Trace {
  std::vector<TimeSeriesRecord> records;
  std::vector<double> weighted_theta;  // K
  double min_heat = std::numeric_limits<double>::infinity();
  std::string error;
};

Trace run_trace(const ScenarioConfig& c) {
  Trace t;
  try {
    Simulation sim(c);
    sim.warmup();
    auto push = [&] {
      t.records.push_back(sim.record());
      t.weighted_theta.push_back(
          sim.scaled().scales.to_si(heat_weighted_mean_temperature(sim.model(), sim.state()), dim::temperature));
    };
    push();
    while (!sim.done()) {
      const StepStats s = sim.step();
      t.min_heat = std::min(t.min_heat, s.interface.min_heat);
      push();
    }
  } catch (const std::exception& e) {
    t.error = e.what();
  }
  return t;
}

Outcome temporal_order() {
  const auto t0 = std::chrono::steady_clock::now();
  const TemporalStudy s = temporal_convergence({8, 4, 2, 1});
  const double secs = seconds_since(t0);
  std::string orders;
  for (double o : s.order) orders += fmt("%.3f ", o);
  return {s.min_order >= kTemporalMinOrder && secs < kTemporalMaxSeconds,
          "orders " + orders + fmt("(min %.3f)", s.min_order) + fmt(", %.2f s", secs)};
}

Outcome spatial_order() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto studies = spatial_convergence({1, 2, 3}, {4, 8, 16, 32});
  const double secs = seconds_since(t0);
  bool ok = secs < kSpatialMaxSeconds;
  double worst = 0.0;
  std::string d;
  for (const SpatialStudy& s : studies) {
    d += s.problem + " p" + std::to_string(s.degree) + ":";
    for (double r : s.rate) {
      d += fmt(" %.3f", r);
      worst = std::max(worst, std::abs(r - s.degree));
      if (!(std::abs(r - s.degree) <= kSpatialRateTol)) ok = false;
    }
    d += "; ";
  }
  return {ok, d + fmt("max |rate-p| %.3f", worst) + fmt(", %.2f s", secs)};
}

Outcome equilibrium() {
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioConfig c = desk("low_discharge");
  c.i_app = 0.0;
  c.t_end = kEquilibriumSteps * c.dt;
  Simulation sim(c);
  sim.warmup();
  double worst = sim.model().relative_update(sim.state(), sim.initial_state());
  while (!sim.done()) {
    sim.step();
    worst = std::max(worst, sim.model().relative_update(sim.state(), sim.initial_state()));
  }
  const double secs = seconds_since(t0);
  return {worst < kEquilibriumTol && sim.steps_taken() == kEquilibriumSteps && secs < kEquilibriumMaxSeconds,
          fmt("max relative change %.3e", worst) + " over " + std::to_string(sim.steps_taken()) + " steps" +
              fmt(", %.2f s", secs)};
}

Outcome mass_bookkeeping() {
  ScenarioConfig c = desk("high_discharge");
  c.t_end = kMassSteps * c.dt;
  Simulation sim(c);
  sim.warmup();
  BatteryModel& m = sim.model();
  const double dt = sim.scaled().dt;
  const double F = m.materials().F;
  const double tp = m.materials().electrolyte.t_plus;
  double worst_a = 0.0, worst_c = 0.0, worst_e = 0.0;
  int steps = 0;
  while (!sim.done()) {
    const SimState before = sim.state();
    const StepStats s = sim.step();
    const SimState& after = sim.state();
    const InterfaceReport& r = s.interface;
    const double da = m.integrate(m.cs_space(), after.c_s - before.c_s, Support::Anode);
    const double dc = m.integrate(m.cs_space(), after.c_s - before.c_s, Support::Cathode);
    const double de = m.integrate(m.ce_space(), after.c_e - before.c_e, Support::Electrolyte);
    const double ea = -dt / F * r.i_bv_anode;
    const double ec = -dt / F * r.i_bv_cathode;
    const double ee = dt * (1.0 - tp) / F * (r.i_bv_anode + r.i_bv_cathode);
    // electrolyte residual against the gross exchange
    const double e_scale = dt * (1.0 - tp) / F * (std::abs(r.i_bv_anode) + std::abs(r.i_bv_cathode));
    worst_a = std::max(worst_a, std::abs(da - ea) / std::abs(ea));
    worst_c = std::max(worst_c, std::abs(dc - ec) / std::abs(ec));
    worst_e = std::max(worst_e, std::abs(de - ee) / e_scale);
    ++steps;
  }
  const double worst = std::max({worst_a, worst_c, worst_e});
  return {worst <= kMassTol && steps == kMassSteps,
          fmt("anode %.2e", worst_a) + fmt(", cathode %.2e", worst_c) + fmt(", electrolyte %.2e", worst_e) +
              " over " + std::to_string(steps) + " steps"};
}

Outcome heat_sign(const std::map<std::string, Trace>& runs) {
  bool ok = true;
  double min_heat = std::numeric_limits<double>::infinity();
  for (const auto& [key, t] : runs) {
    if (!t.error.empty()) ok = false;
    min_heat = std::min(min_heat, t.min_heat);
  }
  ok = ok && min_heat >= 0.0;
  ScenarioConfig c = desk("high_discharge");
  c.diffusional_conductivity = false;
  const Trace t = run_trace(c);
  double worst_drop = 0.0;
  for (std::size_t i = 1; i < t.weighted_theta.size(); ++i) {
    worst_drop = std::min(worst_drop, t.weighted_theta[i] - t.weighted_theta[i - 1]);
  }
  const bool mono = t.error.empty() && worst_drop >= -kHeatRoundoff && t.weighted_theta.size() > 1;
  const double rise = t.weighted_theta.empty() ? 0.0 : t.weighted_theta.back() - t.weighted_theta.front();
  return {ok && mono, fmt("min eta*I_BV %.3e", min_heat) + " across " + std::to_string(runs.size()) +
                          " runs; weighted mean temperature rise" + fmt(" %.4e K", rise) +
                          fmt(", worst step change %.2e K", worst_drop)};
}

Outcome golden_values() {
  const MaterialSet m;
  const double kd = diffusional_conductivity(298.15, m);
  const double oa = ocp_anode(0.5);
  const double oc = ocp_cathode(0.5);
  const double ic = exchange_current(0.5 * m.anode.c_max, 2000.0, m.anode, m);
  const bool tol = std::abs(kd - kKappaD) <= kKappaDTol && std::abs(oa - kOcpA) <= kOcpATol &&
                   std::abs(oc - kOcpC) <= kOcpCTol && std::abs(ic - kIc) <= kIcTol;
  const double ref = std::max({std::abs(kd - kKappaDRef) / std::abs(kKappaDRef), std::abs(oa - kOcpARef) / kOcpARef,
                               std::abs(oc - kOcpCRef) / kOcpCRef, std::abs(ic - kIcRef) / kIcRef});
  return {tol && ref < 1e-12, fmt("kappa_D %.7e", kd) + fmt(", U_a %.6f", oa) + fmt(", U_c %.6f", oc) +
                                  fmt(", I_c %.6f", ic) + fmt("; max rel. deviation from oracle %.1e", ref)};
}

Outcome initial_voltage() {
  ScenarioConfig c = preset("low_discharge");
  c.write_vtk = false;
  Simulation sim(c);
  const double v = sim.record().v_out;
  return {std::abs(v - kVoltage0) <= kVoltage0Tol,
          fmt("V_out(0) = %.6f V", v) + fmt(" (oracle %.6f)", kV0Ref) + " on " +
              std::to_string(sim.mesh().num_elements()) + " elements"};
}

Outcome qualitative(const std::map<std::string, Trace>& runs) {
  bool ok = true;
  std::string d;
  for (const std::string& name : preset_names()) {
    const bool discharge = preset(name).i_app > 0.0;
    const Trace& full = runs.at(name + "/full");
    const Trace& ec = runs.at(name + "/electrochemical");
    bool soc = full.error.empty() && ec.error.empty(), volt = soc, heat = soc, flat = soc;
    for (const Trace* t : {&full, &ec}) {
      const auto& r = t->records;
      for (std::size_t i = 1; i < r.size(); ++i) {
        const double da = r[i].soc_anode - r[i - 1].soc_anode;
        const double dc = r[i].soc_cathode - r[i - 1].soc_cathode;
        if (discharge ? !(da < 0.0 && dc > 0.0) : !(da > 0.0 && dc < 0.0)) soc = false;
        if (r[i].t >= kTransient && (discharge ? !(r[i].v_out < r[0].v_out) : !(r[i].v_out > r[0].v_out))) {
          volt = false;
        }
      }
    }
    for (std::size_t i = 1; i < full.records.size(); ++i) {
      if (!(full.records[i].temperature > full.records[i - 1].temperature)) heat = false;
    }
    for (const TimeSeriesRecord& r : ec.records) {
      if (!(std::abs(r.temperature - kTheta0) <= kEcThetaTol)) flat = false;
    }
    const bool all = soc && volt && heat && flat;
    ok = ok && all;
    const auto& last = full.records.empty() ? TimeSeriesRecord{} : full.records.back();
    d += name + (all ? " ok" : " FAIL") + (soc ? "" : "[soc]") + (volt ? "" : "[v]") + (heat ? "" : "[theta]") +
         (flat ? "" : "[ec theta]") + fmt(" (V %.4f", last.v_out) + fmt(", dT %.2e K); ", last.temperature - kTheta0);
    if (!full.error.empty()) d += "error: " + full.error + "; ";
    if (!ec.error.empty()) d += "error: " + ec.error + "; ";
  }
  return {ok, d};
}

Outcome comparison() {
  std::vector<ComparisonRow> rows;
  for (const char* n : {"low_discharge", "high_discharge"}) {
    const auto r = compare_models(desk(n), false);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  const double low = std::abs(rows[1].rel_diff);
  const double high = std::abs(rows[3].rel_diff);
  return {high > low, fmt("|rel dP| low %.3e", low) + fmt(", high %.3e", high) +
                          fmt("; P_full low %.4e", rows[0].p_avg * 1e-3) +
                          fmt(", high %.4e W/dm3", rows[2].p_avg * 1e-3)};
}

bool dense_spd(const SparseSym& a, double* min_eig) {
  const Eigen::MatrixXd d = a.dense();
  Eigen::LLT<Eigen::MatrixXd> llt(d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d, Eigen::EigenvaluesOnly);
  *min_eig = std::min(*min_eig, es.eigenvalues().minCoeff() / es.eigenvalues().maxCoeff());
  return llt.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0;
}

Outcome matrix_structure() {
  double worst = 0.0;
  int checked = 0;
  auto systems = [&](Simulation& sim, const std::function<void(const SparseSym&)>& visit) {
    BatteryModel& m = sim.model();
    const SimState& s = sim.state();
    const Stage1Systems st = m.build_stage1(s, s, sim.scaled().dt);
    const PotentialSystems ps = m.build_potentials(s, s, sim.scaled().i_app);
    for (const SparseSym* a : {&st.theta.lhs, &st.c_s.lhs, &st.c_e.lhs, &ps.phi_s.lhs, &ps.phi_e.lhs}) visit(*a);
    if (m.options().mode == ModelMode::Full) visit(m.build_elasticity(s).lhs);
  };
  ScenarioConfig c = desk("high_discharge");
  c.t_end = 5 * c.dt;
  Simulation loaded(c);
  loaded.warmup();
  while (!loaded.done()) loaded.step();
  systems(loaded, [&](const SparseSym& a) {
    worst = std::max(worst, a.asymmetry());
    ++checked;
  });

  ScenarioConfig t = desk("high_discharge");
  t.mesh.base_x = {1, 1, 1, 1, 1};
  t.mesh.base_y = {1, 1, 1};
  t.mesh.layers = 0;
  t.mesh.degree = 2;
  t.mesh.normal_degree = 2;
  t.t_end = 2 * t.dt;
  Simulation tiny(t);
  tiny.warmup();
  while (!tiny.done()) tiny.step();
  bool spd = true;
  int dense = 0, largest = 0;
  double min_eig = std::numeric_limits<double>::infinity();
  systems(tiny, [&](const SparseSym& a) {
    worst = std::max(worst, a.asymmetry());
    ++checked;
    largest = std::max(largest, a.size());
    if (a.size() <= kDenseMaxDofs) {
      spd = dense_spd(a, &min_eig) && spd;
      ++dense;
    }
  });
  return {worst <= kSymmetryTol && spd && dense == 6,
          fmt("max asymmetry %.2e", worst) + " over " + std::to_string(checked) + " matrices; " +
              std::to_string(dense) + " dense SPD checks on " + std::to_string(tiny.mesh().num_elements()) +
              " elements (largest " + std::to_string(largest) + fmt(" DOFs, min eig ratio %.2e)", min_eig)};
}

Outcome oracle_equivalence() {
  const Mesh mesh = oracle::small_cell_mesh();
  const QuadratureCache cache(mesh);
  const FieldSpace all(mesh, Support::All, 1);
  const FieldSpace solid(mesh, Support::Solid, 1);
  const FieldSpace ely(mesh, Support::Electrolyte, 1);
  const FieldSpace u(mesh, Support::Solid, 2);
  auto lin = [](const Point& x) { return 1.0 + 0.3 * x.x + 0.2 * x.y; };
  auto at = [&](int k, int q) { return lin(cache.element(k).x[q]); };
  auto oat = [&](int, const Point& x) { return lin(x); };
  std::map<std::string, double> diff;
  diff["mass"] = oracle::relative_difference(Eigen::MatrixXd(assemble_mass(all, cache, at)), oracle::mass(all, oat));
  diff["stiffness"] =
      oracle::relative_difference(Eigen::MatrixXd(assemble_stiffness(all, cache, at)), oracle::stiffness(all, oat));
  for (int side : {0, 1}) {
    const FieldSpace& s = side == 0 ? solid : ely;
    const auto sparse =
        assemble_interface_mass(s, cache, side, [&](int e, int q) { return lin(cache.edge(e, side).x[q]); });
    diff["interface" + std::to_string(side)] =
        oracle::relative_difference(Eigen::MatrixXd(sparse), oracle::interface_mass(s, side, oat));
  }
  const MaterialSet m;
  const ElasticModuli ma = lame_from_E_nu(m.anode.E, m.anode.nu);
  const ElasticModuli mc = lame_from_E_nu(m.cathode.E, m.cathode.nu);
  auto G = [&](int k) { return mesh.subdomain[k] == Subdomain::Anode ? ma.G : mc.G; };
  auto K = [&](int k) { return mesh.subdomain[k] == Subdomain::Anode ? ma.K : mc.K; };
  diff["elasticity"] = oracle::relative_difference(
      Eigen::MatrixXd(assemble_elasticity(u, cache, [&](int k, int) { return G(k); }, [&](int k, int) { return K(k); })),
      oracle::elasticity(u, [&](int k, const Point&) { return G(k); }, [&](int k, const Point&) { return K(k); }));
  bool ok = mesh.num_elements() <= 8;
  std::string d;
  for (const auto& [k, v] : diff) {
    ok = ok && v <= kOracleTol;
    d += k + fmt(" %.1e ", v);
  }
  return {ok, d + "on " + std::to_string(mesh.num_elements()) + " elements"};
}

}  // namespace

int main() {
  std::map<std::string, Trace> runs;
  for (const std::string& name : preset_names()) {
    for (ModelMode mode : {ModelMode::Full, ModelMode::Electrochemical}) {
      runs[name + "/" + to_string(mode)] = run_trace(desk(name, mode));
    }
  }

  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries{
      {1, "temporal order", temporal_order},
      {2, "spatial order", spatial_order},
      {3, "equilibrium preservation", equilibrium},
      {4, "interface mass bookkeeping", mass_bookkeeping},
      {5, "heat source sign", [&] { return heat_sign(runs); }},
      {6, "material golden values", golden_values},
      {7, "initial cell voltage", initial_voltage},
      {8, "scenario qualitative behavior", [&] { return qualitative(runs); }},
      {9, "model comparison pattern", comparison},
      {10, "matrix symmetry and definiteness", matrix_structure},
      {11, "dense oracle equivalence", oracle_equivalence},
  };
  int failures = 0;
  for (const Entry& e : entries) {
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", e.id, e.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failures, entries.size());
  return failures == 0 ? 0 : 1;
}
