#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "voltacell/assembly.hpp"
#include "voltacell/guard.hpp"
#include "voltacell/kinetics.hpp"
#include "voltacell/linear_solver.hpp"
#include "voltacell/materials.hpp"
#include "voltacell/space.hpp"

namespace voltacell {

enum class ModelMode { Full, Electrochemical };

const char* to_string(ModelMode m);

struct ModelOptions {
  ModelMode mode = ModelMode::Full;
  HeatSign heat_sign = HeatSign::Physical;
  /// false sets kappa_D to zero everywhere.
  bool diffusional_conductivity = true;
  /// Unset means GuardPolicy::defaults(c_e0) in the model's units.
  std::optional<GuardPolicy> guard;
  SolverOptions solver;
};

/// Coefficient vectors of all six fields at one time level, over all DOFs
/// of the respective spaces.
struct SimState {
  double t = 0.0;
  Vector theta;
  Vector c_s;
  Vector c_e;
  Vector phi_s;
  Vector phi_e;
  Vector u;
};

/// wa * a + wb * b, field by field (time included).
SimState combine(const SimState& a, double wa, const SimState& b, double wb);

/// Stage-1 system in increment form: lhs * (d_n - d_prev) = rhs on the free
/// DOFs, lhs = M + dt/2 K.
struct Stage1System {
  SparseSym lhs;
  Vector rhs;
  Vector prev_free;

  /// Right-hand side of the same system written for d_n itself.
  Vector rhs_standard() const;
};

struct Stage1Systems {
  Stage1System theta;
  Stage1System c_s;
  Stage1System c_e;
};

struct LinearSystem {
  SparseSym lhs;
  Vector rhs;
};

struct PotentialSystems {
  LinearSystem phi_s;
  LinearSystem phi_e;
};

/// Interface quantities at the evaluation state of the last stage-1 build.
struct InterfaceReport {
  double i_bv_anode = 0.0;    // integral of I_BV over the anode interface
  double i_bv_cathode = 0.0;  // integral over the cathode interface
  double min_heat = 0.0;      // min over quadrature points of eta * I_BV
  double max_abs_eta = 0.0;
};

class BatteryModel {
 public:
  /// Mesh coordinates and materials must share one system of units.
  BatteryModel(const Mesh& mesh, const MaterialSet& materials, ModelOptions options = {});
  ~BatteryModel();

  const Mesh& mesh() const { return *mesh_; }
  const MaterialSet& materials() const { return mats_; }
  const ModelOptions& options() const { return options_; }
  const QuadratureCache& cache() const { return cache_; }
  const FieldSpace& theta_space() const { return theta_; }
  const FieldSpace& cs_space() const { return cs_; }
  const FieldSpace& ce_space() const { return ce_; }
  const FieldSpace& phis_space() const { return phis_; }
  const FieldSpace& phie_space() const { return phie_; }
  const FieldSpace& u_space() const { return u_; }
  BoundGuard& guard() { return guard_; }
  const BoundGuard& guard() const { return guard_; }

  /// Electrochemical equilibrium at the given states of charge. Also fixes
  /// the strain-free reference concentrations.
  SimState initial_state(double soc_anode, double soc_cathode);
  void set_reference_concentrations(double c_sa0, double c_sc0);
  double reference_concentration(Subdomain electrode) const;

  Stage1Systems build_stage1(const SimState& prev, const SimState& mid, double dt);
  /// Potentials for the concentrations/temperature of `state`, with the
  /// cross-coupled potential taken from `lagged`.
  PotentialSystems build_potentials(const SimState& state, const SimState& lagged, double i_app);
  LinearSystem build_elasticity(const SimState& state);

  /// Solves stage 1; returns a state with new theta, c_s, c_e and the
  /// potentials/displacement copied from `mid`.
  SimState advance_stage1(const SimState& prev, const SimState& mid, double dt);
  /// Solves phi_s, phi_e (Jacobi against `lagged`) and u in place.
  void solve_stage2(SimState& state, const SimState& lagged, double i_app);
  /// prev + dt * f_d(prev) for the stage-1 fields.
  SimState euler_predict(const SimState& prev, double dt);

  const InterfaceReport& last_interface_report() const { return report_; }
  InterfaceReport interface_report(const SimState& state);
  std::vector<InterfaceSample> interface_samples(const SimState& state);

  /// Integral of a scalar field over the elements of `region` within its support.
  double integrate(const FieldSpace& space, const Vector& field, Support region) const;
  double measure(Support region) const;
  /// Von Mises stress at every element quadrature point of the solid.
  std::vector<double> von_mises_samples(const SimState& state) const;
  /// Von Mises stress at the points of `samples`, which belong to solid element k.
  std::vector<double> von_mises_at(const SimState& state, int k,
                                   const ElementQuadrature& samples) const;
  double max_displacement(const SimState& state) const;

  /// Per-field relative change max|a-b| / scale used for fixed-point exits.
  double relative_update(const SimState& a, const SimState& b) const;

 private:
  struct Caches;

  // Concentration/temperature traces from `s`, potentials from `potentials`.
  void sample_interface(const SimState& s, const SimState& potentials, bool with_kinetics,
                        std::vector<std::vector<InterfaceSample>>& out);
  InterfaceReport summarize(const std::vector<std::vector<InterfaceSample>>& samples) const;
  Vector stage1_load_theta(const SimState& s, const std::vector<std::vector<InterfaceSample>>& smp);
  SparseMatrix cs_stiffness(const SimState& s);
  StressState stress_at(const SimState& s, int k, const ElementQuadrature& eq, int q) const;
  Stage1System finish_stage1(const FieldSpace& space, const SparseMatrix& mass,
                             const SparseMatrix& stiff, const Vector& load, const Vector& prev,
                             double dt) const;

  const Mesh* mesh_;
  MaterialSet mats_;
  ModelOptions options_;
  QuadratureCache cache_;
  FieldSpace theta_, cs_, ce_, phis_, phie_, u_;
  BoundGuard guard_;
  double c_sa0_ = 0.0;
  double c_sc0_ = 0.0;
  std::vector<int> edge_slot_;
  InterfaceReport report_;
  std::unique_ptr<Caches> caches_;
};

}  // namespace voltacell
