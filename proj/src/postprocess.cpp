#include "voltacell/postprocess.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "voltacell/basis.hpp"
#include "voltacell/simulation.hpp"

namespace voltacell {

double boundary_measure(const BatteryModel& model, BoundaryPart part) {
  double len = 0.0;
  for (int e : model.cache().boundary_edges(part)) {
    for (double w : model.cache().edge(e, 0).weight) len += w;
  }
  return len;
}

double boundary_average(const BatteryModel& model, const FieldSpace& space, const Vector& field,
                        BoundaryPart part) {
  double sum = 0.0;
  double len = 0.0;
  for (int e : model.cache().boundary_edges(part)) {
    const EdgeSideQuadrature& q = model.cache().edge(e, 0);
    if (!space.has_element(q.element)) continue;
    for (int i = 0; i < q.num_points(); ++i) {
      sum += q.weight[i] * field_at_edge(space, q, i, field);
      len += q.weight[i];
    }
  }
  if (!(len > 0.0)) {
    throw std::invalid_argument(std::string("boundary_average: field has no support on ") + to_string(part));
  }
  return sum / len;
}

double subdomain_average(const BatteryModel& model, const FieldSpace& space, const Vector& field,
                         Support region) {
  const double m = model.measure(region);
  if (!(m > 0.0)) {
    throw std::invalid_argument(std::string("subdomain_average: empty region ") + to_string(region));
  }
  return model.integrate(space, field, region) / m;
}

double cell_voltage(const BatteryModel& model, const SimState& state) {
  return boundary_average(model, model.phis_space(), state.phi_s, BoundaryPart::CcPlus);
}

double electrolyte_potential_average(const BatteryModel& model, const SimState& state) {
  return subdomain_average(model, model.phie_space(), state.phi_e, Support::Electrolyte);
}

double state_of_charge(const BatteryModel& model, const SimState& state, Subdomain electrode) {
  const Support region = electrode == Subdomain::Anode ? Support::Anode : Support::Cathode;
  return subdomain_average(model, model.cs_space(), state.c_s, region) /
         model.materials().electrode(electrode).c_max;
}

double mean_temperature(const BatteryModel& model, const SimState& state) {
  return subdomain_average(model, model.theta_space(), state.theta, Support::All);
}

double heat_weighted_mean_temperature(const BatteryModel& model, const SimState& state) {
  const Mesh& mesh = model.mesh();
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const double rc = model.materials().rho_cv(mesh.subdomain[k]);
    const ElementQuadrature& eq = model.cache().element(k);
    for (int q = 0; q < eq.num_points(); ++q) {
      num += rc * eq.weight[q] * field_at(model.theta_space(), eq, k, q, state.theta);
      den += rc * eq.weight[q];
    }
  }
  return num / den;
}

VonMisesSummary von_mises_field(const BatteryModel& model, const SimState& state) {
  VonMisesSummary s;
  const bool full = model.options().mode == ModelMode::Full;
  if (full) s.samples = model.von_mises_samples(state);
  std::size_t i = 0;
  for (int k : model.u_space().elements()) {
    const ElementQuadrature& eq = model.cache().element(k);
    for (int q = 0; q < eq.num_points(); ++q, ++i) {
      if (!full) {
        s.samples.push_back(0.0);
        continue;
      }
      if (s.samples[i] > s.max) {
        s.max = s.samples[i];
        s.location = eq.x[q];
      }
    }
  }
  return s;
}

TimeSeriesRecord record_quantities(const BatteryModel& model, const SimState& state,
                                   const ScaleSet& scales, double t_si, long long clamp_events) {
  TimeSeriesRecord r;
  r.t = t_si;
  r.v_out = scales.to_si(cell_voltage(model, state), dim::potential);
  r.phi_e_avg = scales.to_si(electrolyte_potential_average(model, state), dim::potential);
  r.soc_anode = state_of_charge(model, state, Subdomain::Anode);
  r.soc_cathode = state_of_charge(model, state, Subdomain::Cathode);
  r.temperature = scales.to_si(mean_temperature(model, state), dim::temperature);
  r.u_max = scales.to_si(model.max_displacement(state), dim::length);
  r.vm_max = scales.to_si(von_mises_field(model, state).max, dim::stress);
  r.clamp_events = clamp_events;
  return r;
}

double power_density(const std::vector<double>& t, const std::vector<double>& v_out, double i_app,
                     double collector_length, double cell_area) {
  if (t.size() != v_out.size() || t.size() < 2) {
    throw std::invalid_argument("power_density: need at least two samples of matching length");
  }
  const double span = t.back() - t.front();
  if (!(span > 0.0) || !(cell_area > 0.0)) {
    throw std::invalid_argument("power_density: empty time span or cell area");
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) integral += 0.5 * (t[i] - t[i - 1]) * (v_out[i] + v_out[i - 1]);
  return integral * i_app * collector_length / (span * cell_area);
}

namespace {

const char* kCsvHeader = "t_s,V_out_V,phi_e_avg_V,soc_anode,soc_cathode,temp_K,u_max_m,vm_max_Pa,clamp_events";

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f.imbue(std::locale::classic());
  return f;
}

void check_written(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

void write_timeseries_csv(const std::vector<TimeSeriesRecord>& records, const std::string& path) {
  std::ofstream f = open_out(path);
  f << kCsvHeader << "\n" << std::setprecision(17);
  for (const TimeSeriesRecord& r : records) {
    f << r.t << ',' << r.v_out << ',' << r.phi_e_avg << ',' << r.soc_anode << ',' << r.soc_cathode
      << ',' << r.temperature << ',' << r.u_max << ',' << r.vm_max << ',' << r.clamp_events << "\n";
  }
  check_written(f, path);
}

std::vector<TimeSeriesRecord> read_timeseries_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line) || line != kCsvHeader) {
    throw std::runtime_error("'" + path + "': unexpected header");
  }
  std::vector<TimeSeriesRecord> out;
  int number = 1;
  while (std::getline(f, line)) {
    ++number;
    if (line.empty()) continue;
    std::stringstream ss(line);
    ss.imbue(std::locale::classic());
    TimeSeriesRecord r;
    char c[8];
    ss >> r.t >> c[0] >> r.v_out >> c[1] >> r.phi_e_avg >> c[2] >> r.soc_anode >> c[3] >> r.soc_cathode >>
        c[4] >> r.temperature >> c[5] >> r.u_max >> c[6] >> r.vm_max >> c[7] >> r.clamp_events;
    if (!ss) throw std::runtime_error("'" + path + "':" + std::to_string(number) + ": malformed row");
    out.push_back(r);
  }
  return out;
}

VtkCounts vtk_counts(const Mesh& mesh) {
  VtkCounts c;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const int px = mesh.degree[k][0];
    const int py = mesh.degree[k][1];
    c.points += (px + 1) * (py + 1);
    c.cells += px * py;
  }
  return c;
}

void export_vtk(const BatteryModel& model, const SimState& state, const ScaleSet& scales,
                const std::string& path) {
  const Mesh& mesh = model.mesh();
  const VtkCounts counts = vtk_counts(mesh);
  std::vector<Point> points;
  std::vector<std::array<long long, 4>> cells;
  std::vector<std::pair<int, int>> owner;  // (element, local node)
  std::vector<double> vm;
  const bool full = model.options().mode == ModelMode::Full;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const int px = mesh.degree[k][0];
    const int py = mesh.degree[k][1];
    const auto gx = gauss_lobatto_nodes(px);
    const auto gy = gauss_lobatto_nodes(py);
    const long long base = static_cast<long long>(points.size());
    std::vector<std::array<double, 2>> ref;
    for (int b = 0; b <= py; ++b) {
      for (int a = 0; a <= px; ++a) ref.push_back({gx[a], gy[b]});
    }
    const ElementQuadrature samples = element_samples(mesh, k, ref);
    for (int i = 0; i < samples.num_points(); ++i) {
      points.push_back(samples.x[i]);
      owner.push_back({k, i});
    }
    if (full && model.u_space().has_element(k)) {
      const auto v = model.von_mises_at(state, k, samples);
      vm.insert(vm.end(), v.begin(), v.end());
    } else {
      vm.insert(vm.end(), samples.num_points(), 0.0);
    }
    for (int b = 0; b < py; ++b) {
      for (int a = 0; a < px; ++a) {
        const long long n0 = base + b * (px + 1) + a;
        cells.push_back({n0, n0 + 1, n0 + 1 + (px + 1), n0 + (px + 1)});
      }
    }
  }
  if (static_cast<long long>(points.size()) != counts.points ||
      static_cast<long long>(cells.size()) != counts.cells) {
    throw std::logic_error("export_vtk: subcell count mismatch");
  }

  auto value = [&](const FieldSpace& space, const Vector& field, std::size_t p, int comp) {
    const auto [k, node] = owner[p];
    if (!space.has_element(k)) return 0.0;
    return field[space.element_dofs(k)[node * space.arity() + comp]];
  };

  std::ofstream f = open_out(path);
  f << std::setprecision(12);
  f << "# vtk DataFile Version 3.0\nvoltacell snapshot t=" << state.t << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  const double L = scales.length();
  f << "POINTS " << points.size() << " double\n";
  for (const Point& p : points) f << p.x * L << ' ' << p.y * L << " 0\n";
  f << "CELLS " << cells.size() << ' ' << cells.size() * 5 << "\n";
  for (const auto& c : cells) f << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << "\n";
  f << "CELL_TYPES " << cells.size() << "\n";
  for (std::size_t i = 0; i < cells.size(); ++i) f << "9\n";

  f << "POINT_DATA " << points.size() << "\n";
  auto scalar = [&](const char* name, const FieldSpace& space, const Vector& field, const Dimension& d) {
    f << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t p = 0; p < points.size(); ++p) f << scales.to_si(value(space, field, p, 0), d) << "\n";
  };
  scalar("phi_s", model.phis_space(), state.phi_s, dim::potential);
  scalar("phi_e", model.phie_space(), state.phi_e, dim::potential);
  scalar("c_s", model.cs_space(), state.c_s, dim::concentration);
  scalar("c_e", model.ce_space(), state.c_e, dim::concentration);
  scalar("theta", model.theta_space(), state.theta, dim::temperature);
  f << "VECTORS u double\n";
  for (std::size_t p = 0; p < points.size(); ++p) {
    f << scales.to_si(value(model.u_space(), state.u, p, 0), dim::length) << ' '
      << scales.to_si(value(model.u_space(), state.u, p, 1), dim::length) << " 0\n";
  }
  f << "SCALARS von_mises double 1\nLOOKUP_TABLE default\n";
  for (double v : vm) f << scales.to_si(v, dim::stress) << "\n";
  check_written(f, path);
}

std::vector<ComparisonRow> compare_models(const ScenarioConfig& config, bool write_outputs) {
  std::vector<ComparisonRow> rows;
  for (ModelMode mode : {ModelMode::Full, ModelMode::Electrochemical}) {
    ScenarioConfig c = config;
    c.mode = mode;
    c.output_dir = config.output_dir + "/" + to_string(mode);
    RunOptions o;
    o.write_outputs = write_outputs;
    const RunResult r = run_scenario(c, o);
    rows.push_back({config.name, to_string(mode), r.p_avg, 0.0});
  }
  const double full = rows[0].p_avg;
  rows[1].rel_diff = full != 0.0 ? (rows[1].p_avg - full) / std::abs(full)
                                 : std::numeric_limits<double>::quiet_NaN();
  return rows;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path) {
  std::ofstream f = open_out(path);
  f << "scenario,model,p_avg_w_per_dm3,rel_diff\n" << std::setprecision(17);
  for (const ComparisonRow& r : rows) {
    f << r.scenario << ',' << r.model << ',' << r.p_avg * 1e-3 << ',' << r.rel_diff << "\n";
  }
  check_written(f, path);
}

std::string format_comparison(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "scenario" << std::setw(17) << "model" << std::right
     << std::setw(16) << "P [W/dm3]" << std::setw(14) << "rel. diff" << "\n";
  for (const ComparisonRow& r : rows) {
    os << std::left << std::setw(16) << r.scenario << std::setw(17) << r.model << std::right
       << std::setw(16) << std::setprecision(8) << r.p_avg * 1e-3 << std::setw(13)
       << std::setprecision(4) << r.rel_diff * 100.0 << "%\n";
  }
  return os.str();
}

}  // namespace voltacell
