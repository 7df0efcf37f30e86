#pragma once

#include <string>
#include <vector>

#include "voltacell/battery_model.hpp"
#include "voltacell/config.hpp"

namespace voltacell {

/// One row of the time series, SI units.
struct TimeSeriesRecord {
  double t = 0.0;          // s
  double v_out = 0.0;      // V
  double phi_e_avg = 0.0;  // V
  double soc_anode = 0.0;
  double soc_cathode = 0.0;
  double temperature = 0.0;  // K
  double u_max = 0.0;        // m
  double vm_max = 0.0;       // Pa
  long long clamp_events = 0;
};

struct ComparisonRow {
  std::string scenario;
  std::string model;
  double p_avg = 0.0;  // W m^-3
  double rel_diff = 0.0;
};

// All quantities below are in the model's internal units unless noted.

/// (1/|part|) * integral of a scalar field over a boundary part.
double boundary_average(const BatteryModel& model, const FieldSpace& space, const Vector& field,
                        BoundaryPart part);
double boundary_measure(const BatteryModel& model, BoundaryPart part);
/// (1/|region|) * integral of a scalar field over a region within its support.
double subdomain_average(const BatteryModel& model, const FieldSpace& space, const Vector& field,
                         Support region);

/// Area-average of phi_s over the positive current collector.
double cell_voltage(const BatteryModel& model, const SimState& state);
double electrolyte_potential_average(const BatteryModel& model, const SimState& state);
double state_of_charge(const BatteryModel& model, const SimState& state, Subdomain electrode);
double mean_temperature(const BatteryModel& model, const SimState& state);
/// Mean temperature weighted by the volumetric heat capacity.
double heat_weighted_mean_temperature(const BatteryModel& model, const SimState& state);

struct VonMisesSummary {
  std::vector<double> samples;  // per solid quadrature point
  double max = 0.0;
  Point location;
};

/// Zero everywhere in electrochemical mode, where mechanics is not solved.
VonMisesSummary von_mises_field(const BatteryModel& model, const SimState& state);

/// Quantities of interest at `state`, re-dimensionalized.
TimeSeriesRecord record_quantities(const BatteryModel& model, const SimState& state,
                                   const ScaleSet& scales, double t_si, long long clamp_events);

/// (1/(t_end |Omega|)) * integral of V_out I_app |Gamma_cc+| dt by the
/// trapezoidal rule, SI in and out (per unit depth).
double power_density(const std::vector<double>& t, const std::vector<double>& v_out, double i_app,
                     double collector_length, double cell_area);

void write_timeseries_csv(const std::vector<TimeSeriesRecord>& records, const std::string& path);
std::vector<TimeSeriesRecord> read_timeseries_csv(const std::string& path);

struct VtkCounts {
  long long points = 0;
  long long cells = 0;
};

/// Points and cells of the subcell decomposition: per element (px+1)(py+1)
/// points and px*py quads.
VtkCounts vtk_counts(const Mesh& mesh);

/// Legacy ASCII unstructured grid. Coordinates in meters, fields in SI.
void export_vtk(const BatteryModel& model, const SimState& state, const ScaleSet& scales,
                const std::string& path);

/// Runs the scenario in both model modes; rel_diff of the electrochemical
/// row is (P_ec - P_full)/|P_full|, the full row carries 0.
std::vector<ComparisonRow> compare_models(const ScenarioConfig& config, bool write_outputs = false);

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path);
std::string format_comparison(const std::vector<ComparisonRow>& rows);

}  // namespace voltacell
