#include "voltacell/kinetics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace voltacell {

double exchange_current(double c_s, double c_e, const ElectrodeMaterial& e, const MaterialSet& m) {
  if (c_e < 0.0 || c_s < 0.0 || c_s > e.c_max) {
    std::ostringstream os;
    os << "exchange_current: concentrations out of range (c_s = " << c_s << ", c_e = " << c_e
       << ", c_max = " << e.c_max << ")";
    throw std::domain_error(os.str());
  }
  return m.k_bv * m.F * std::sqrt(c_e) * std::sqrt(e.c_max - c_s) * std::sqrt(c_s);
}

double butler_volmer(double i_c, double eta, double theta, const MaterialSet& m) {
  if (!(theta > 0.0)) throw std::domain_error("butler_volmer: temperature must be positive");
  const double arg = m.F * eta / (2.0 * m.R * theta);
  if (!(std::abs(arg) <= 500.0)) {
    std::ostringstream os;
    os << "butler_volmer: sinh argument " << arg << " overflows (eta = " << eta << ")";
    throw std::overflow_error(os.str());
  }
  return 2.0 * i_c * std::sinh(arg);
}

void evaluate_interface(InterfaceSample& s, Subdomain electrode, const MaterialSet& m) {
  const ElectrodeMaterial& e = m.electrode(electrode);
  s.soc = s.c_s / e.c_max;
  s.ocp = open_circuit_potential(electrode, s.soc, m);
  s.eta = s.phi_s - s.phi_e - s.ocp;
  s.i_c = exchange_current(s.c_s, s.c_e, e, m);
  s.i_bv = butler_volmer(s.i_c, s.eta, s.theta, m);
}

std::array<double, 2> solid_current_density(const std::array<double, 2>& grad_phi, double gamma) {
  return {-gamma * grad_phi[0], -gamma * grad_phi[1]};
}

std::array<double, 2> electrolyte_current_density(const std::array<double, 2>& grad_phi,
                                                  const std::array<double, 2>& grad_c, double c_e,
                                                  double theta, const MaterialSet& m) {
  if (!(c_e > 0.0)) throw std::domain_error("electrolyte_current_density: c_e must be positive");
  const double kd = diffusional_conductivity(theta, m);
  const double ke = m.electrolyte.kappa;
  return {-ke * grad_phi[0] - kd * grad_c[0] / c_e, -ke * grad_phi[1] - kd * grad_c[1] / c_e};
}

double ohmic_heat(const std::array<double, 2>& current, const std::array<double, 2>& grad_phi,
                  HeatSign sign) {
  const double dot = current[0] * grad_phi[0] + current[1] * grad_phi[1];
  return sign == HeatSign::Physical ? -dot : dot;
}

}  // namespace voltacell
