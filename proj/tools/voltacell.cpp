#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "voltacell/config.hpp"
#include "voltacell/geometry.hpp"
#include "voltacell/linear_solver.hpp"
#include "voltacell/postprocess.hpp"
#include "voltacell/simulation.hpp"
#include "voltacell/verification.hpp"

namespace fs = std::filesystem;
using namespace voltacell;

namespace {

void apply_overrides(ScenarioConfig& c, const std::string& out, const std::string& model, double dt,
                     double tend, bool coarse) {
  c.output_dir = out;
  if (model == "full") c.mode = ModelMode::Full;
  if (model == "electrochemical") c.mode = ModelMode::Electrochemical;
  if (dt > 0.0) c.dt = dt;
  if (tend >= 0.0) c.t_end = tend;
  if (coarse) c.mesh = MeshSpec::coarse();
  c.validate();
}

MeshSpec parse_mesh_spec(const std::string& path) {
  if (path == "default") return MeshSpec{};
  if (path == "coarse") return MeshSpec::coarse();
  return parse_scenario_file(path).mesh;
}

void write_mesh_dump(const Mesh& mesh, const DomainGeometry& geom, const fs::path& dir) {
  std::ofstream nodes(dir / "nodes.csv");
  nodes << "id,x_m,y_m\n" << std::setprecision(17);
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    nodes << i << ',' << mesh.nodes[i].x * mesh.length_unit << ',' << mesh.nodes[i].y * mesh.length_unit << "\n";
  }
  std::ofstream elems(dir / "elements.csv");
  elems << "id,v0,v1,v2,v3,subdomain,px,py\n";
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& q = mesh.quads[k];
    elems << k << ',' << q[0] << ',' << q[1] << ',' << q[2] << ',' << q[3] << ',' << to_string(mesh.subdomain[k])
          << ',' << mesh.degree[k][0] << ',' << mesh.degree[k][1] << "\n";
  }
  // Outline diagram of the layout.
  const double W = geom.width;
  const double H = geom.height;
  const double s = 800.0 / W;
  std::ofstream svg(dir / "layout.svg");
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W * s + 20 << "\" height=\"" << H * s + 20
      << "\">\n";
  auto poly = [&](const Polygon& p, const char* color) {
    svg << "<polygon fill=\"" << color << "\" stroke=\"black\" stroke-width=\"0.5\" points=\"";
    for (const Point& v : p.vertices) svg << 10 + v.x * s << ',' << 10 + (H - v.y) * s << ' ';
    svg << "\"/>\n";
  };
  poly(geom.anode, "#8fb3d9");
  poly(geom.cathode, "#d98f8f");
  poly(geom.electrolyte, "#e8e3a1");
  svg << "</svg>\n";
}

int run_cmd(const std::string& scenario, const std::string& out, const std::string& model, double dt,
            double tend, bool coarse, bool quiet) {
  ScenarioConfig c = load_scenario(scenario);
  apply_overrides(c, out, model, dt, tend, coarse);
  RunOptions o;
  if (!quiet) o.log = &std::cerr;
  const RunResult r = run_scenario(c, o);
  const TimeSeriesRecord& last = r.records.back();
  std::cout << std::setprecision(6) << "scenario " << c.name << " (" << to_string(c.mode) << "): " << r.steps.size()
            << " steps, V_out " << r.records.front().v_out << " -> " << last.v_out << " V, mean temperature "
            << last.temperature - 273.15 << " C, P_avg " << r.p_avg * 1e-3 << " W/dm3\n";
  return 0;
}

int compare_cmd(const std::string& scenario, const std::string& out, double dt, double tend, bool coarse) {
  ScenarioConfig c = load_scenario(scenario);
  apply_overrides(c, out, "", dt, tend, coarse);
  const auto rows = compare_models(c, true);
  fs::create_directories(out);
  write_comparison_csv(rows, (fs::path(out) / "comparison.csv").string());
  std::cout << format_comparison(rows);
  return 0;
}

int convergence_cmd(const std::string& which, const std::string& out) {
  fs::create_directories(out);
  if (which == "temporal") {
    const TemporalStudy s = temporal_convergence();
    write_temporal_csv(s, (fs::path(out) / "temporal.csv").string());
    for (std::size_t i = 0; i < s.dt.size(); ++i) {
      std::cout << "dt " << s.dt[i] << " s  error " << s.error[i];
      if (i > 0) std::cout << "  order " << s.order[i - 1];
      std::cout << "\n";
    }
    return 0;
  }
  const auto studies = spatial_convergence();
  write_spatial_csv(studies, (fs::path(out) / "spatial.csv").string());
  for (const SpatialStudy& s : studies) {
    std::cout << s.problem << " p=" << s.degree << " rates:";
    for (double r : s.rate) std::cout << ' ' << std::setprecision(4) << r;
    std::cout << "\n";
  }
  return 0;
}

int mesh_cmd(const std::string& spec_path, const std::string& out) {
  const MeshSpec spec = parse_mesh_spec(spec_path);
  ScenarioConfig dims_src;
  if (spec_path != "default" && spec_path != "coarse") dims_src = parse_scenario_file(spec_path);
  const DomainGeometry geom = build_interdigitated_domain(dims_src.dims);
  const Mesh mesh = generate_layered_mesh(geom, spec, 1e-6);
  const QualityReport q = validate_mesh(mesh, spec.max_aspect_ratio);
  fs::create_directories(out);
  write_mesh_dump(mesh, geom, out);
  std::cout << "elements " << mesh.num_elements() << " (anode " << q.elements[0] << ", cathode " << q.elements[1]
            << ", electrolyte " << q.elements[2] << "), nodes " << mesh.nodes.size() << ", interface edges "
            << q.interface_edges << ", max aspect ratio " << q.max_aspect_ratio << "\n";
  for (const std::string& v : q.violations) std::cout << "violation: " << v << "\n";
  return q.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voltacell: 2D thermo-electro-chemo-mechanical battery cell simulator"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Thread cap for linear algebra (default: VOLTACELL_THREADS or 1)");

  std::string scenario, out = "out", model, which, spec;
  double dt = -1.0, tend = -1.0;
  bool coarse = false, quiet = false;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--scenario", scenario, "Preset name or scenario file")->required();
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--model", model, "full or electrochemical")->check(CLI::IsMember({"full", "electrochemical"}));
  run->add_option("--dt", dt, "Time step in seconds");
  run->add_option("--tend", tend, "End time in seconds");
  run->add_flag("--coarse", coarse, "Use the coarse mesh");
  run->add_flag("--quiet", quiet, "No per-step progress on stderr");

  auto* cmp = app.add_subcommand("compare", "Run a scenario in both model modes");
  cmp->add_option("--scenario", scenario, "Preset name or scenario file")->required();
  cmp->add_option("--out", out, "Output directory")->required();
  cmp->add_option("--dt", dt, "Time step in seconds");
  cmp->add_option("--tend", tend, "End time in seconds");
  cmp->add_flag("--coarse", coarse, "Use the coarse mesh");

  auto* conv = app.add_subcommand("convergence", "Temporal or spatial convergence study");
  conv->add_option("--case", which, "temporal or spatial")->required()->check(CLI::IsMember({"temporal", "spatial"}));
  conv->add_option("--out", out, "Output directory")->required();

  auto* msh = app.add_subcommand("mesh", "Generate and dump the cell mesh");
  msh->add_option("--spec", spec, "Scenario file with mesh.* keys, or default/coarse")->required();
  msh->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (threads <= 0) {
      const char* env = std::getenv("VOLTACELL_THREADS");
      threads = env ? std::atoi(env) : 1;
    }
    set_thread_count(std::max(1, threads));
    if (*run) return run_cmd(scenario, out, model, dt, tend, coarse, quiet);
    if (*cmp) return compare_cmd(scenario, out, dt, tend, coarse);
    if (*conv) return convergence_cmd(which, out);
    if (*msh) return mesh_cmd(spec, out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
