#include "voltacell/battery_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace voltacell {

const char* to_string(ModelMode m) {
  return m == ModelMode::Full ? "full" : "electrochemical";
}

SimState combine(const SimState& a, double wa, const SimState& b, double wb) {
  SimState r;
  r.t = wa * a.t + wb * b.t;
  r.theta = wa * a.theta + wb * b.theta;
  r.c_s = wa * a.c_s + wb * b.c_s;
  r.c_e = wa * a.c_e + wb * b.c_e;
  r.phi_s = wa * a.phi_s + wb * b.phi_s;
  r.phi_e = wa * a.phi_e + wb * b.phi_e;
  r.u = wa * a.u + wb * b.u;
  return r;
}

Vector Stage1System::rhs_standard() const { return rhs + lhs.matrix * prev_free; }

struct BatteryModel::Caches {
  SparseMatrix m_theta, k_theta, m_c, m_ce, k_ce, k_phis, k_phie, k_u;
  SparseSym k_u_free;
  SpdSolver theta_step, cs_step, ce_step, phis, phie, u, m_theta_solver, m_cs_solver, m_ce_solver;
  double theta_dt = -1.0;
  double ce_dt = -1.0;
  bool u_ready = false;
  bool mass_ready = false;

  explicit Caches(const SolverOptions& o)
      : theta_step(o), cs_step(o), ce_step(o), phis(o), phie(o), u(o), m_theta_solver(o),
        m_cs_solver(o), m_ce_solver(o) {}
};

namespace {

std::vector<EssentialBC> phis_constraints() { return {{BoundaryPart::CcMinus, EssentialBC::kAll, {}}}; }

std::vector<EssentialBC> u_constraints() {
  std::vector<EssentialBC> bcs;
  for (BoundaryPart p : {BoundaryPart::CcMinus, BoundaryPart::CcPlus, BoundaryPart::Top,
                         BoundaryPart::Bottom}) {
    bcs.push_back({p, EssentialBC::kNormal, {}});
  }
  return bcs;
}

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

BatteryModel::BatteryModel(const Mesh& mesh, const MaterialSet& materials, ModelOptions options)
    : mesh_(&mesh),
      mats_(materials),
      options_(options),
      cache_(mesh),
      theta_(mesh, Support::All, 1),
      cs_(mesh, Support::Solid, 1),
      ce_(mesh, Support::Electrolyte, 1),
      phis_(mesh, Support::Solid, 1, phis_constraints()),
      phie_(mesh, Support::Electrolyte, 1),
      u_(mesh, Support::Solid, 2, u_constraints()),
      guard_(options.guard.value_or(GuardPolicy::defaults(materials.c_e0))),
      caches_(std::make_unique<Caches>(options.solver)) {
  mats_.validate();
  if (cache_.interface_edges().empty()) {
    throw std::invalid_argument("BatteryModel: mesh has no electrode-electrolyte interface");
  }
  edge_slot_.assign(mesh.num_edges(), -1);
  for (std::size_t i = 0; i < cache_.interface_edges().size(); ++i) {
    edge_slot_[cache_.interface_edges()[i]] = static_cast<int>(i);
  }
  const Mesh& m = mesh;
  auto per_domain = [&m](auto f) {
    return [&m, f](int k, int) { return f(m.subdomain[k]); };
  };
  Caches& c = *caches_;
  c.m_theta = assemble_mass(theta_, cache_, per_domain([this](Subdomain s) { return mats_.rho_cv(s); }));
  c.k_theta = assemble_stiffness(theta_, cache_, per_domain([this](Subdomain s) { return mats_.lambda(s); }));
  c.m_c = assemble_mass(cs_, cache_, constant_coefficient(1.0));
  c.m_ce = assemble_mass(ce_, cache_, constant_coefficient(1.0));
  c.k_ce = assemble_stiffness(ce_, cache_, constant_coefficient(mats_.electrolyte.D));
  c.k_phis = assemble_stiffness(phis_, cache_,
                                per_domain([this](Subdomain s) { return mats_.electrode(s).gamma; }));
  c.k_phie = assemble_stiffness(phie_, cache_, constant_coefficient(mats_.electrolyte.kappa));
  c.k_u = assemble_elasticity(
      u_, cache_, per_domain([this](Subdomain s) {
        const auto& e = mats_.electrode(s);
        return lame_from_E_nu(e.E, e.nu).G;
      }),
      per_domain([this](Subdomain s) {
        const auto& e = mats_.electrode(s);
        return lame_from_E_nu(e.E, e.nu).K;
      }));
  c.k_u_free = restrict_to_free(u_, c.k_u);
  set_reference_concentrations(0.5 * mats_.anode.c_max, 0.5 * mats_.cathode.c_max);
}

BatteryModel::~BatteryModel() = default;

void BatteryModel::set_reference_concentrations(double c_sa0, double c_sc0) {
  c_sa0_ = c_sa0;
  c_sc0_ = c_sc0;
}

double BatteryModel::reference_concentration(Subdomain electrode) const {
  if (electrode == Subdomain::Anode) return c_sa0_;
  if (electrode == Subdomain::Cathode) return c_sc0_;
  throw std::invalid_argument("reference_concentration: not an electrode");
}

SimState BatteryModel::initial_state(double soc_anode, double soc_cathode) {
  if (!(soc_anode > 0.0 && soc_anode < 1.0 && soc_cathode > 0.0 && soc_cathode < 1.0)) {
    throw std::invalid_argument("initial_state: states of charge must lie in (0, 1)");
  }
  const double c_sa0 = soc_anode * mats_.anode.c_max;
  const double c_sc0 = soc_cathode * mats_.cathode.c_max;
  set_reference_concentrations(c_sa0, c_sc0);
  const double ocp_a = open_circuit_potential(Subdomain::Anode, soc_anode, mats_);
  const double ocp_c = open_circuit_potential(Subdomain::Cathode, soc_cathode, mats_);

  SimState s;
  s.t = 0.0;
  s.theta = Vector::Constant(theta_.num_dofs(), mats_.theta0);
  s.c_s = Vector::Zero(cs_.num_dofs());
  s.phi_s = Vector::Zero(phis_.num_dofs());
  for (int k : cs_.elements()) {
    const bool anode = mesh_->subdomain[k] == Subdomain::Anode;
    for (int d : cs_.element_dofs(k)) s.c_s[d] = anode ? c_sa0 : c_sc0;
    for (int d : phis_.element_dofs(k)) s.phi_s[d] = anode ? 0.0 : ocp_c - ocp_a;
  }
  s.c_e = Vector::Constant(ce_.num_dofs(), mats_.c_e0);
  s.phi_e = Vector::Constant(phie_.num_dofs(), -ocp_a);
  s.u = Vector::Zero(u_.num_dofs());
  return s;
}

void BatteryModel::sample_interface(const SimState& s, const SimState& potentials, bool with_kinetics,
                                    std::vector<std::vector<InterfaceSample>>& out) {
  const std::vector<int>& edges = cache_.interface_edges();
  out.resize(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int e = edges[i];
    const EdgeSideQuadrature& sol = cache_.edge(e, 0);
    const EdgeSideQuadrature& ely = cache_.edge(e, 1);
    const Subdomain electrode = mesh_->subdomain[sol.element];
    const ElectrodeMaterial& em = mats_.electrode(electrode);
    out[i].resize(sol.num_points());
    for (int q = 0; q < sol.num_points(); ++q) {
      InterfaceSample& smp = out[i][q];
      smp.c_s = guard_.solid(field_at_edge(cs_, sol, q, s.c_s), em.c_max, e, q, sol.x[q]);
      smp.c_e = guard_.electrolyte(field_at_edge(ce_, ely, q, s.c_e), e, q, sol.x[q]);
      smp.theta = field_at_edge(theta_, sol, q, s.theta);
      smp.phi_s = field_at_edge(phis_, sol, q, potentials.phi_s);
      smp.phi_e = field_at_edge(phie_, ely, q, potentials.phi_e);
      if (with_kinetics) {
        evaluate_interface(smp, electrode, mats_);
      } else {
        smp.soc = smp.c_s / em.c_max;
        smp.ocp = open_circuit_potential(electrode, smp.soc, mats_);
        smp.i_c = exchange_current(smp.c_s, smp.c_e, em, mats_);
      }
    }
  }
}

InterfaceReport BatteryModel::summarize(const std::vector<std::vector<InterfaceSample>>& samples) const {
  InterfaceReport r;
  r.min_heat = std::numeric_limits<double>::infinity();
  const std::vector<int>& edges = cache_.interface_edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeSideQuadrature& sol = cache_.edge(edges[i], 0);
    const bool anode = mesh_->subdomain[sol.element] == Subdomain::Anode;
    for (int q = 0; q < sol.num_points(); ++q) {
      const InterfaceSample& s = samples[i][q];
      (anode ? r.i_bv_anode : r.i_bv_cathode) += sol.weight[q] * s.i_bv;
      r.min_heat = std::min(r.min_heat, s.eta * s.i_bv);
      r.max_abs_eta = std::max(r.max_abs_eta, std::abs(s.eta));
    }
  }
  return r;
}

StressState BatteryModel::stress_at(const SimState& s, int k, const ElementQuadrature& eq,
                                    int q) const {
  const auto g0 = field_gradient_at(u_, eq, k, q, s.u, 0);
  const auto g1 = field_gradient_at(u_, eq, k, q, s.u, 1);
  const std::array<double, 3> strain{g0[0], g1[1], 0.5 * (g0[1] + g1[0])};
  const double theta = field_at(theta_, eq, k, q, s.theta);
  const double c = field_at(cs_, eq, k, q, s.c_s);
  const Subdomain d = mesh_->subdomain[k];
  return hooke_plane_strain(strain, theta, c, reference_concentration(d), mats_.electrode(d), mats_);
}

SparseMatrix BatteryModel::cs_stiffness(const SimState& s) {
  return assemble_stiffness(cs_, cache_, [&](int k, int q) {
    const ElementQuadrature& eq = cache_.element(k);
    const ElectrodeMaterial& em = mats_.electrode(mesh_->subdomain[k]);
    const double c = guard_.solid(field_at(cs_, eq, k, q, s.c_s), em.c_max, k, q, eq.x[q]);
    const double pressure =
        options_.mode == ModelMode::Full ? hydrostatic_pressure(stress_at(s, k, eq, q)) : 0.0;
    return stress_diffusivity(c, pressure, em, mats_);
  });
}

Vector BatteryModel::stage1_load_theta(const SimState& s,
                                       const std::vector<std::vector<InterfaceSample>>& smp) {
  const double kd_factor = options_.diffusional_conductivity ? 1.0 : 0.0;
  const HeatSign sign = options_.heat_sign;
  Vector b = assemble_source(theta_, cache_, [&](int k, int q) {
    const ElementQuadrature& eq = cache_.element(k);
    const Subdomain d = mesh_->subdomain[k];
    if (is_electrode(d)) {
      const auto g = field_gradient_at(phis_, eq, k, q, s.phi_s);
      return ohmic_heat(solid_current_density(g, mats_.electrode(d).gamma), g, sign);
    }
    const auto g = field_gradient_at(phie_, eq, k, q, s.phi_e);
    const auto gc = field_gradient_at(ce_, eq, k, q, s.c_e);
    const double c = guard_.electrolyte(field_at(ce_, eq, k, q, s.c_e), k, q, eq.x[q]);
    const double theta = field_at(theta_, eq, k, q, s.theta);
    const double kd = kd_factor * diffusional_conductivity(theta, mats_);
    const double ke = mats_.electrolyte.kappa;
    const std::array<double, 2> i{-ke * g[0] - kd * gc[0] / c, -ke * g[1] - kd * gc[1] / c};
    return ohmic_heat(i, g, sign);
  });
  const double isign = sign == HeatSign::Physical ? 1.0 : -1.0;
  b += assemble_edge_load(theta_, cache_, cache_.interface_edges(), 0, [&](int e, int q) {
    const InterfaceSample& x = smp[edge_slot_[e]][q];
    return isign * x.eta * x.i_bv;
  });
  return b;
}

Stage1System BatteryModel::finish_stage1(const FieldSpace& space, const SparseMatrix& mass,
                                         const SparseMatrix& stiff, const Vector& load,
                                         const Vector& prev, double dt) const {
  Stage1System s;
  const SparseMatrix lhs = mass + (0.5 * dt) * stiff;
  s.lhs = restrict_to_free(space, lhs);
  s.rhs = dt * free_part(space, load - stiff * prev);
  s.prev_free = free_part(space, prev);
  return s;
}

Stage1Systems BatteryModel::build_stage1(const SimState& prev, const SimState& mid, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("build_stage1: time step must be positive");
  std::vector<std::vector<InterfaceSample>> smp;
  sample_interface(mid, mid, true, smp);
  report_ = summarize(smp);
  const Caches& c = *caches_;
  const double F = mats_.F;
  const double tp = mats_.electrolyte.t_plus;
  const std::vector<int>& iface = cache_.interface_edges();

  Stage1Systems out;
  const Vector b_theta = stage1_load_theta(mid, smp);
  out.theta = finish_stage1(theta_, c.m_theta, c.k_theta, b_theta, prev.theta, dt);

  const Vector b_cs = assemble_edge_load(cs_, cache_, iface, 0, [&](int e, int q) {
    return -smp[edge_slot_[e]][q].i_bv / F;
  });
  out.c_s = finish_stage1(cs_, c.m_c, cs_stiffness(mid), b_cs, prev.c_s, dt);

  const Vector b_ce = assemble_edge_load(ce_, cache_, iface, 1, [&](int e, int q) {
    return (1.0 - tp) * smp[edge_slot_[e]][q].i_bv / F;
  });
  out.c_e = finish_stage1(ce_, c.m_ce, c.k_ce, b_ce, prev.c_e, dt);
  return out;
}

namespace {

Vector apply_increment(const FieldSpace& space, const Vector& prev, const Vector& delta_free) {
  Vector out = prev;
  const std::vector<int>& dofs = space.free_dofs();
  for (int i = 0; i < space.num_free(); ++i) out[dofs[i]] += delta_free[i];
  return out;
}

}  // namespace

SimState BatteryModel::advance_stage1(const SimState& prev, const SimState& mid, double dt) {
  Stage1Systems sys = build_stage1(prev, mid, dt);
  Caches& c = *caches_;
  SimState next = mid;
  next.t = prev.t + dt;
  if (options_.mode == ModelMode::Full) {
    if (c.theta_dt != dt) {
      c.theta_step.factorize(sys.theta.lhs);
      c.theta_dt = dt;
    }
    next.theta = apply_increment(theta_, prev.theta, c.theta_step.solve(sys.theta.rhs));
  } else {
    next.theta = prev.theta;
  }
  c.cs_step.factorize(sys.c_s.lhs);
  next.c_s = apply_increment(cs_, prev.c_s, c.cs_step.solve(sys.c_s.rhs));
  if (c.ce_dt != dt) {
    c.ce_step.factorize(sys.c_e.lhs);
    c.ce_dt = dt;
  }
  next.c_e = apply_increment(ce_, prev.c_e, c.ce_step.solve(sys.c_e.rhs));
  return next;
}

PotentialSystems BatteryModel::build_potentials(const SimState& state, const SimState& lagged,
                                                double i_app) {
  std::vector<std::vector<InterfaceSample>> smp;
  sample_interface(state, lagged, false, smp);
  const double F = mats_.F;
  const double R = mats_.R;
  auto coef = [&](int e, int q) {
    const InterfaceSample& x = smp[edge_slot_[e]][q];
    return x.i_c * F / (R * x.theta);
  };
  bool any = false;
  for (const auto& edge : smp) {
    for (const auto& x : edge) any = any || x.i_c > 0.0;
  }
  if (!any) {
    throw std::runtime_error(
        "build_potentials: interface coefficient vanishes everywhere; electrolyte potential is singular");
  }
  const Caches& c = *caches_;
  const std::vector<int>& iface = cache_.interface_edges();
  PotentialSystems out;

  const SparseMatrix a_s = c.k_phis + assemble_interface_mass(phis_, cache_, 0, coef);
  Vector b_s = assemble_edge_load(phis_, cache_, iface, 0, [&](int e, int q) {
    const InterfaceSample& x = smp[edge_slot_[e]][q];
    return coef(e, q) * (x.phi_e + x.ocp);
  });
  b_s -= assemble_edge_load(phis_, cache_, cache_.boundary_edges(BoundaryPart::CcPlus), 0,
                            constant_edge_coefficient(i_app));
  out.phi_s.lhs = restrict_to_free(phis_, a_s);
  out.phi_s.rhs = lifted_rhs(phis_, a_s, b_s);

  const SparseMatrix a_e = c.k_phie + assemble_interface_mass(phie_, cache_, 1, coef);
  Vector b_e = assemble_edge_load(phie_, cache_, iface, 1, [&](int e, int q) {
    const InterfaceSample& x = smp[edge_slot_[e]][q];
    return coef(e, q) * (x.phi_s - x.ocp);
  });
  if (options_.diffusional_conductivity) {
    b_e -= assemble_flux_load(phie_, cache_, [&](int k, int q) -> std::array<double, 2> {
      const ElementQuadrature& eq = cache_.element(k);
      const auto gc = field_gradient_at(ce_, eq, k, q, state.c_e);
      const double ce = guard_.electrolyte(field_at(ce_, eq, k, q, state.c_e), k, q, eq.x[q]);
      const double kd = diffusional_conductivity(field_at(theta_, eq, k, q, state.theta), mats_);
      return {kd * gc[0] / ce, kd * gc[1] / ce};
    });
  }
  out.phi_e.lhs = restrict_to_free(phie_, a_e);
  out.phi_e.rhs = lifted_rhs(phie_, a_e, b_e);
  return out;
}

LinearSystem BatteryModel::build_elasticity(const SimState& state) {
  const Vector b = assemble_divergence_load(u_, cache_, [&](int k, int q) {
    const ElementQuadrature& eq = cache_.element(k);
    const Subdomain d = mesh_->subdomain[k];
    const ElectrodeMaterial& em = mats_.electrode(d);
    const double K = lame_from_E_nu(em.E, em.nu).K;
    const double dtheta = field_at(theta_, eq, k, q, state.theta) - mats_.theta0;
    const double dc = field_at(cs_, eq, k, q, state.c_s) - reference_concentration(d);
    return 3.0 * K * (em.alpha * dtheta + em.omega * dc);
  });
  LinearSystem s;
  s.lhs = caches_->k_u_free;
  s.rhs = lifted_rhs(u_, caches_->k_u, b);
  return s;
}

void BatteryModel::solve_stage2(SimState& state, const SimState& lagged, double i_app) {
  Caches& c = *caches_;
  const PotentialSystems p = build_potentials(state, lagged, i_app);
  c.phis.factorize(p.phi_s.lhs);
  c.phie.factorize(p.phi_e.lhs);
  state.phi_s = expand_free(phis_, c.phis.solve(p.phi_s.rhs));
  state.phi_e = expand_free(phie_, c.phie.solve(p.phi_e.rhs));
  if (options_.mode == ModelMode::Full) {
    const LinearSystem e = build_elasticity(state);
    if (!c.u_ready) {
      c.u.factorize(e.lhs);
      c.u_ready = true;
    }
    state.u = expand_free(u_, c.u.solve(e.rhs));
  } else {
    state.u = Vector::Zero(u_.num_dofs());
  }
}

SimState BatteryModel::euler_predict(const SimState& prev, double dt) {
  Caches& c = *caches_;
  if (!c.mass_ready) {
    c.m_theta_solver.factorize(restrict_to_free(theta_, c.m_theta));
    c.m_cs_solver.factorize(restrict_to_free(cs_, c.m_c));
    c.m_ce_solver.factorize(restrict_to_free(ce_, c.m_ce));
    c.mass_ready = true;
  }
  std::vector<std::vector<InterfaceSample>> smp;
  sample_interface(prev, prev, true, smp);
  const double F = mats_.F;
  const double tp = mats_.electrolyte.t_plus;
  const std::vector<int>& iface = cache_.interface_edges();
  SimState next = prev;
  next.t = prev.t + dt;
  if (options_.mode == ModelMode::Full) {
    const Vector r = stage1_load_theta(prev, smp) - c.k_theta * prev.theta;
    next.theta = apply_increment(theta_, prev.theta, dt * c.m_theta_solver.solve(free_part(theta_, r)));
  }
  const Vector b_cs = assemble_edge_load(cs_, cache_, iface, 0, [&](int e, int q) {
    return -smp[edge_slot_[e]][q].i_bv / F;
  });
  const Vector r_cs = b_cs - cs_stiffness(prev) * prev.c_s;
  next.c_s = apply_increment(cs_, prev.c_s, dt * c.m_cs_solver.solve(free_part(cs_, r_cs)));
  const Vector b_ce = assemble_edge_load(ce_, cache_, iface, 1, [&](int e, int q) {
    return (1.0 - tp) * smp[edge_slot_[e]][q].i_bv / F;
  });
  const Vector r_ce = b_ce - c.k_ce * prev.c_e;
  next.c_e = apply_increment(ce_, prev.c_e, dt * c.m_ce_solver.solve(free_part(ce_, r_ce)));
  return next;
}

InterfaceReport BatteryModel::interface_report(const SimState& state) {
  std::vector<std::vector<InterfaceSample>> smp;
  sample_interface(state, state, true, smp);
  return summarize(smp);
}

std::vector<InterfaceSample> BatteryModel::interface_samples(const SimState& state) {
  std::vector<std::vector<InterfaceSample>> smp;
  sample_interface(state, state, true, smp);
  std::vector<InterfaceSample> flat;
  for (auto& e : smp) flat.insert(flat.end(), e.begin(), e.end());
  return flat;
}

double BatteryModel::integrate(const FieldSpace& space, const Vector& field, Support region) const {
  double sum = 0.0;
  for (int k : space.elements()) {
    if (!in_support(region, mesh_->subdomain[k])) continue;
    const ElementQuadrature& eq = cache_.element(k);
    for (int q = 0; q < eq.num_points(); ++q) sum += eq.weight[q] * field_at(space, eq, k, q, field);
  }
  return sum;
}

double BatteryModel::measure(Support region) const {
  double sum = 0.0;
  for (int k = 0; k < mesh_->num_elements(); ++k) {
    if (!in_support(region, mesh_->subdomain[k])) continue;
    for (double w : cache_.element(k).weight) sum += w;
  }
  return sum;
}

std::vector<double> BatteryModel::von_mises_samples(const SimState& state) const {
  std::vector<double> out;
  for (int k : u_.elements()) {
    const ElementQuadrature& eq = cache_.element(k);
    for (int q = 0; q < eq.num_points(); ++q) out.push_back(von_mises(stress_at(state, k, eq, q)));
  }
  return out;
}

std::vector<double> BatteryModel::von_mises_at(const SimState& state, int k,
                                               const ElementQuadrature& samples) const {
  if (!u_.has_element(k)) throw std::invalid_argument("von_mises_at: element is not solid");
  std::vector<double> out;
  for (int q = 0; q < samples.num_points(); ++q) {
    out.push_back(von_mises(stress_at(state, k, samples, q)));
  }
  return out;
}

double BatteryModel::max_displacement(const SimState& state) const {
  double m = 0.0;
  for (Eigen::Index i = 0; i + 1 < state.u.size(); i += 2) {
    m = std::max(m, std::hypot(state.u[i], state.u[i + 1]));
  }
  return m;
}

double BatteryModel::relative_update(const SimState& a, const SimState& b) const {
  const double volt = 1.0 / mats_.potential_unit;
  const double c_floor = 1e-3 * std::min(mats_.anode.c_max, mats_.cathode.c_max);
  // Displacement floor: 0.1% of the free swelling of the whole cell.
  double extent = 0.0;
  for (const Point& x : mesh_->nodes) extent = std::max({extent, std::abs(x.x), std::abs(x.y)});
  double swell = 0.0;
  for (const ElectrodeMaterial* e : {&mats_.anode, &mats_.cathode}) {
    swell = std::max(swell, e->alpha * mats_.theta0 + e->omega * e->c_max);
  }
  const double u_floor = 1e-3 * extent * swell;
  auto rel = [](const Vector& x, const Vector& y, double floor) {
    return inf_norm(x - y) / std::max(inf_norm(y), floor);
  };
  double r = 0.0;
  r = std::max(r, rel(a.theta, b.theta, mats_.theta0));
  r = std::max(r, rel(a.c_s, b.c_s, c_floor));
  r = std::max(r, rel(a.c_e, b.c_e, mats_.c_e0));
  r = std::max(r, rel(a.phi_s, b.phi_s, volt));
  r = std::max(r, rel(a.phi_e, b.phi_e, volt));
  r = std::max(r, rel(a.u, b.u, u_floor));
  return r;
}

}  // namespace voltacell
