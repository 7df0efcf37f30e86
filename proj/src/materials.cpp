#include "voltacell/materials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace voltacell {

namespace {

void require(bool ok, const char* what, std::string& errors) {
  if (!ok) {
    if (!errors.empty()) errors += "; ";
    errors += what;
  }
}

void validate_electrode(const ElectrodeMaterial& e, const char* name, std::string& errors) {
  const std::string n(name);
  for (double v : {e.rho_cv, e.lambda, e.E, e.alpha, e.omega, e.gamma, e.D0, e.c_max}) {
    require(v > 0.0 && std::isfinite(v), (n + ": parameters must be positive").c_str(), errors);
  }
  require(e.nu > 0.0 && e.nu < 0.5, (n + ": Poisson ratio must lie in (0, 0.5)").c_str(), errors);
}

ElectrodeMaterial scale(const ElectrodeMaterial& e, const ScaleSet& s, bool inward) {
  auto f = [&](double v, const Dimension& d) { return inward ? s.to_internal(v, d) : s.to_si(v, d); };
  ElectrodeMaterial r;
  r.rho_cv = f(e.rho_cv, dim::volumetric_heat_capacity);
  r.lambda = f(e.lambda, dim::thermal_conductivity);
  r.E = f(e.E, dim::stress);
  r.nu = e.nu;
  r.alpha = f(e.alpha, dim::inverse_temperature);
  r.omega = f(e.omega, dim::molar_volume);
  r.gamma = f(e.gamma, dim::conductivity);
  r.D0 = f(e.D0, dim::diffusivity);
  r.c_max = f(e.c_max, dim::concentration);
  return r;
}

MaterialSet rescale(const MaterialSet& m, const ScaleSet& s, bool inward) {
  auto f = [&](double v, const Dimension& d) { return inward ? s.to_internal(v, d) : s.to_si(v, d); };
  MaterialSet r = m;
  r.anode = scale(m.anode, s, inward);
  r.cathode = scale(m.cathode, s, inward);
  r.electrolyte.rho_cv = f(m.electrolyte.rho_cv, dim::volumetric_heat_capacity);
  r.electrolyte.lambda = f(m.electrolyte.lambda, dim::thermal_conductivity);
  r.electrolyte.kappa = f(m.electrolyte.kappa, dim::conductivity);
  r.electrolyte.D = f(m.electrolyte.D, dim::diffusivity);
  r.k_bv = f(m.k_bv, dim::reaction_rate);
  r.pi_max = f(m.pi_max, dim::stress);
  r.theta0 = f(m.theta0, dim::temperature);
  r.c_e0 = f(m.c_e0, dim::concentration);
  r.R = f(m.R, dim::gas_constant);
  r.F = f(m.F, dim::faraday);
  r.potential_unit = inward ? m.potential_unit * s.reference(dim::potential)
                            : m.potential_unit / s.reference(dim::potential);
  return r;
}

}  // namespace

void MaterialSet::validate() const {
  std::string errors;
  validate_electrode(anode, "anode", errors);
  validate_electrode(cathode, "cathode", errors);
  for (double v : {electrolyte.rho_cv, electrolyte.lambda, electrolyte.kappa, electrolyte.D, k_bv,
                   alpha_D, beta_D, pi_max, theta0, c_e0, R, F, potential_unit}) {
    require(v > 0.0 && std::isfinite(v), "material parameters must be positive", errors);
  }
  require(electrolyte.t_plus > 0.0 && electrolyte.t_plus < 1.0,
          "transference number must lie in (0, 1)", errors);
  if (!errors.empty()) throw std::invalid_argument("MaterialSet: " + errors);
}

const ElectrodeMaterial& MaterialSet::electrode(Subdomain s) const {
  switch (s) {
    case Subdomain::Anode: return anode;
    case Subdomain::Cathode: return cathode;
    case Subdomain::Electrolyte: break;
  }
  throw std::invalid_argument("MaterialSet::electrode: electrolyte is not an electrode");
}

double MaterialSet::rho_cv(Subdomain s) const {
  return s == Subdomain::Electrolyte ? electrolyte.rho_cv : electrode(s).rho_cv;
}

double MaterialSet::lambda(Subdomain s) const {
  return s == Subdomain::Electrolyte ? electrolyte.lambda : electrode(s).lambda;
}

MaterialSet MaterialSet::to_internal(const ScaleSet& scales) const { return rescale(*this, scales, true); }
MaterialSet MaterialSet::to_si(const ScaleSet& scales) const { return rescale(*this, scales, false); }

double diffusional_conductivity(double theta, const MaterialSet& m) {
  return -(2.0 * m.R * theta * m.electrolyte.kappa / m.F) * (1.0 - m.electrolyte.t_plus);
}

double ocp_anode(double soc) {
  return -0.16 + 1.32 * std::exp(-3.0 * soc) + 10.0 * std::exp(-2000.0 * soc);
}

double ocp_cathode(double soc) {
  if (!(soc < kCathodePole)) {
    throw std::domain_error("ocp_cathode: state of charge " + std::to_string(soc) +
                            " at or beyond the pole of the fit");
  }
  return 4.06279 + 0.0677504 * std::tanh(-21.8502 * soc + 12.8262) -
         0.105734 * (1.0 / std::pow(kCathodePole - soc, 0.379571) - 1.576) -
         0.045 * std::exp(-71.69 * std::pow(soc, 8)) + 0.01 * std::exp(-200.0 * (soc - 0.19));
}

double open_circuit_potential(Subdomain electrode, double soc, const MaterialSet& m, bool* clamped) {
  const double lo = 1e-6;
  const double hi = electrode == Subdomain::Cathode ? kCathodePole - 1e-6 : 1.0;
  const double s = std::clamp(soc, lo, hi);
  if (clamped) *clamped = s != soc;
  switch (electrode) {
    case Subdomain::Anode: return ocp_anode(s) / m.potential_unit;
    case Subdomain::Cathode: return ocp_cathode(s) / m.potential_unit;
    case Subdomain::Electrolyte: break;
  }
  throw std::invalid_argument("open_circuit_potential: electrolyte has no open-circuit potential");
}

double stress_diffusivity(double c_s, double pressure, const ElectrodeMaterial& e,
                          const MaterialSet& m) {
  const double chem = m.alpha_D * c_s / e.c_max;
  if (pressure <= 0.0) return e.D0 * std::exp(chem);
  if (pressure < m.pi_max) return e.D0 * std::exp(chem - m.beta_D * pressure / m.pi_max);
  return e.D0 * std::exp(chem - m.beta_D);
}

ElasticModuli lame_from_E_nu(double E, double nu) {
  if (!(E > 0.0) || !(nu > 0.0 || nu == 0.0) || !(nu < 0.5)) {
    throw std::invalid_argument("lame_from_E_nu: need E > 0 and 0 <= nu < 0.5");
  }
  return {E / (2.0 * (1.0 + nu)), E / (3.0 * (1.0 - 2.0 * nu))};
}

StressState hooke_plane_strain(const std::array<double, 3>& strain, double theta, double c_s,
                               double c_s0, const ElectrodeMaterial& e, const MaterialSet& m) {
  const ElasticModuli mod = lame_from_E_nu(e.E, e.nu);
  const double eigen = e.alpha * (theta - m.theta0) + e.omega * (c_s - c_s0);
  const double lambda = mod.K - 2.0 * mod.G / 3.0;
  // Mechanical strain is strain - eigen*I in 3D with e33 = 0.
  const double tr = strain[0] + strain[1] - 3.0 * eigen;
  StressState s;
  s.s11 = 2.0 * mod.G * (strain[0] - eigen) + lambda * tr;
  s.s22 = 2.0 * mod.G * (strain[1] - eigen) + lambda * tr;
  s.s12 = 2.0 * mod.G * strain[2];
  s.s33 = 2.0 * mod.G * (-eigen) + lambda * tr;
  return s;
}

double hydrostatic_pressure(const StressState& s) { return -(s.s11 + s.s22 + s.s33) / 3.0; }

double von_mises(const StressState& s) {
  const double a = s.s11 - s.s22;
  const double b = s.s22 - s.s33;
  const double c = s.s33 - s.s11;
  return std::sqrt(0.5 * (a * a + b * b + c * c) + 3.0 * s.s12 * s.s12);
}

}  // namespace voltacell
