#pragma once

#include <array>
#include <functional>

#include "voltacell/geometry.hpp"
#include "voltacell/units.hpp"

namespace voltacell {

struct ElectrodeMaterial {
  double rho_cv = 0.0;  // J m^-3 K^-1
  double lambda = 0.0;  // W m^-1 K^-1
  double E = 0.0;       // Pa
  double nu = 0.0;
  double alpha = 0.0;   // K^-1
  double omega = 0.0;   // m^3 mol^-1
  double gamma = 0.0;   // S m^-1
  double D0 = 0.0;      // m^2 s^-1
  double c_max = 0.0;   // mol m^-3
};

struct ElectrolyteMaterial {
  double rho_cv = 0.0;
  double lambda = 0.0;
  double kappa = 0.0;  // S m^-1
  double D = 0.0;      // m^2 s^-1
  double t_plus = 0.0;
};

/// Material parameters. Defaults are SI; `to_internal` rescales every entry
/// to the units of a ScaleSet.
struct MaterialSet {
  ElectrodeMaterial anode{3.8235e6, 1.04, 3.64e9, 0.3, 1e-5, 3.499e-6, 100.0, 3.9e-14, 3.1507e4};
  ElectrodeMaterial cathode{9.0371e5, 6.2, 2.5e9, 0.3, 1e-5, 3.499e-6, 3.8, 1e-13, 2.286e4};
  ElectrolyteMaterial electrolyte{1.9979e6, 0.344, 0.2, 7.5e-11, 0.363};
  double k_bv = 1.1e-11;  // m^2.5 mol^-0.5 s^-1
  double alpha_D = 6.0;
  double beta_D = 1.5;
  double pi_max = 1e9;  // Pa
  double theta0 = 298.15;
  double c_e0 = 2e3;
  double R = 8.314462618;
  double F = 96485.33212;
  /// Volts per potential unit; open-circuit potentials are divided by it.
  double potential_unit = 1.0;

  void validate() const;
  const ElectrodeMaterial& electrode(Subdomain s) const;
  double rho_cv(Subdomain s) const;
  double lambda(Subdomain s) const;

  MaterialSet to_internal(const ScaleSet& scales) const;
  MaterialSet to_si(const ScaleSet& scales) const;
};

/// kappa_D = -(2 R theta kappa_e / F)(1 - t_+).
double diffusional_conductivity(double theta, const MaterialSet& m);

/// Open-circuit potential fits in volts of the state of charge.
double ocp_anode(double soc);
/// Throws std::domain_error at or beyond the pole at 1.00167.
double ocp_cathode(double soc);
inline constexpr double kCathodePole = 1.00167;

/// Guarded OCP in potential units of `m`: the state of charge is clamped to
/// [1e-6, pole - 1e-6] (anode: [1e-6, 1]). `clamped` is set when that happens.
double open_circuit_potential(Subdomain electrode, double soc, const MaterialSet& m,
                              bool* clamped = nullptr);

/// Stress-assisted diffusivity with the three pressure branches.
double stress_diffusivity(double c_s, double pressure, const ElectrodeMaterial& e,
                          const MaterialSet& m);

struct ElasticModuli {
  double G = 0.0;
  double K = 0.0;
};

ElasticModuli lame_from_E_nu(double E, double nu);

struct StressState {
  double s11 = 0.0;
  double s22 = 0.0;
  double s12 = 0.0;
  double s33 = 0.0;
};

/// Plane-strain Hooke law with thermal and chemical eigenstrains.
/// `strain` = (e11, e22, e12) of the total in-plane strain.
StressState hooke_plane_strain(const std::array<double, 3>& strain, double theta, double c_s,
                               double c_s0, const ElectrodeMaterial& e, const MaterialSet& m);

double hydrostatic_pressure(const StressState& s);
double von_mises(const StressState& s);

}  // namespace voltacell
