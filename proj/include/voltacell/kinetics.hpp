#pragma once

#include <array>

#include "voltacell/materials.hpp"

namespace voltacell {

enum class HeatSign { Physical, Literal };

/// I_c = k_BV F sqrt(c_e) sqrt(c_max - c_s) sqrt(c_s).
double exchange_current(double c_s, double c_e, const ElectrodeMaterial& e, const MaterialSet& m);

/// I_BV = 2 I_c sinh(F eta / (2 R theta)); throws std::overflow_error when
/// the sinh argument exceeds 500 in magnitude.
double butler_volmer(double i_c, double eta, double theta, const MaterialSet& m);

/// Traces of the fields at one interface quadrature point and the derived
/// reaction quantities.
struct InterfaceSample {
  double c_s = 0.0;
  double c_e = 0.0;
  double phi_s = 0.0;
  double phi_e = 0.0;
  double theta = 0.0;
  double soc = 0.0;
  double ocp = 0.0;
  double eta = 0.0;
  double i_c = 0.0;
  double i_bv = 0.0;
};

/// Fills soc, ocp, eta, i_c and i_bv from the traces. Concentrations are
/// expected to be bound-guarded already.
void evaluate_interface(InterfaceSample& s, Subdomain electrode, const MaterialSet& m);

/// i = -gamma grad(phi).
std::array<double, 2> solid_current_density(const std::array<double, 2>& grad_phi, double gamma);

/// i = -kappa_e grad(phi_e) - kappa_D grad(c_e) / c_e.
std::array<double, 2> electrolyte_current_density(const std::array<double, 2>& grad_phi,
                                                  const std::array<double, 2>& grad_c, double c_e,
                                                  double theta, const MaterialSet& m);

/// Physical: Q = -i . grad(phi). Literal: Q = i . grad(phi).
double ohmic_heat(const std::array<double, 2>& current, const std::array<double, 2>& grad_phi,
                  HeatSign sign);

}  // namespace voltacell
