#include "voltacell/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace voltacell {

const char* to_string(Subdomain s) {
  switch (s) {
    case Subdomain::Anode: return "anode";
    case Subdomain::Cathode: return "cathode";
    case Subdomain::Electrolyte: return "electrolyte";
  }
  return "?";
}

const char* to_string(BoundaryPart p) {
  switch (p) {
    case BoundaryPart::CcMinus: return "cc-";
    case BoundaryPart::CcPlus: return "cc+";
    case BoundaryPart::Top: return "top";
    case BoundaryPart::Bottom: return "bottom";
  }
  return "?";
}

void CellDimensions::validate() const {
  const double v[] = {electrode_half_thickness, channel_thickness, digit_length, tip_gap,
                      end_cap_length};
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("CellDimensions: all dimensions must be positive");
    }
  }
  if (tip_gap >= digit_length) {
    throw std::invalid_argument("CellDimensions: tip gap w must be smaller than digit length L");
  }
  if (end_cap_length + tip_gap >= digit_length) {
    throw std::invalid_argument(
        "CellDimensions: digits do not overlap (need l + w < L); polygons would be degenerate");
  }
}

double Polygon::signed_area() const {
  double a = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = vertices[i];
    const Point& q = vertices[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

namespace {

constexpr Subdomain A = Subdomain::Anode;
constexpr Subdomain C = Subdomain::Cathode;
constexpr Subdomain E = Subdomain::Electrolyte;

// [row][column], rows bottom to top.
constexpr Subdomain kBlockLayout[3][5] = {
    {A, A, A, E, C},
    {A, E, E, E, C},
    {A, E, C, C, C},
};

std::vector<Segment> polyline(std::initializer_list<Point> pts) {
  std::vector<Segment> out;
  const std::vector<Point> v(pts);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) out.push_back({v[i], v[i + 1]});
  return out;
}

}  // namespace

Subdomain DomainGeometry::block_subdomain(int column, int row) const {
  if (column < 0 || column >= 5 || row < 0 || row >= 3) {
    throw std::out_of_range("block_subdomain: block index out of range");
  }
  return kBlockLayout[row][column];
}

DomainGeometry build_interdigitated_domain(const CellDimensions& d) {
  d.validate();
  const double hs = d.electrode_half_thickness;
  const double he = d.channel_thickness;
  const double L = d.digit_length;
  const double w = d.tip_gap;
  const double l = d.end_cap_length;

  DomainGeometry g;
  g.dims = d;
  g.width = L + w + l;
  g.height = 2.0 * hs + he;
  const double W = g.width;
  const double H = g.height;

  g.anode.vertices = {{0, 0}, {L, 0}, {L, hs}, {l, hs}, {l, H}, {0, H}};
  g.cathode.vertices = {{W, H}, {l + w, H}, {l + w, H - hs}, {L + w, H - hs}, {L + w, 0}, {W, 0}};
  g.electrolyte.vertices = {{L, 0},          {L + w, 0}, {L + w, H - hs}, {l + w, H - hs},
                            {l + w, H},      {l, H},     {l, hs},         {L, hs}};

  g.anode_interface = polyline({{L, 0}, {L, hs}, {l, hs}, {l, H}});
  g.cathode_interface = polyline({{l + w, H}, {l + w, H - hs}, {L + w, H - hs}, {L + w, 0}});
  g.cc_minus = polyline({{0, H}, {0, 0}});
  g.cc_plus = polyline({{W, 0}, {W, H}});
  g.bottom = polyline({{0, 0}, {W, 0}});
  g.top = polyline({{W, H}, {0, H}});

  g.x_breaks = {0.0, l, l + w, L, L + w, W};
  g.y_breaks = {0.0, hs, hs + he, H};

  for (const Polygon* p : {&g.anode, &g.cathode, &g.electrolyte}) {
    if (!(p->signed_area() > 0.0)) {
      throw std::invalid_argument("build_interdigitated_domain: degenerate subdomain polygon");
    }
  }
  for (std::size_t i = 0; i + 1 < g.x_breaks.size(); ++i) {
    if (!(g.x_breaks[i + 1] > g.x_breaks[i])) {
      throw std::invalid_argument("build_interdigitated_domain: degenerate block column");
    }
  }
  const double total =
      g.anode.signed_area() + g.cathode.signed_area() + g.electrolyte.signed_area();
  if (std::abs(total - W * H) > 1e-12 * W * H) {
    throw std::logic_error("build_interdigitated_domain: subdomains do not tile the bounding box");
  }
  return g;
}

void MeshSpec::validate() const {
  if (base_x.size() != 5 || base_y.size() != 3) {
    throw std::invalid_argument("MeshSpec: need 5 column and 3 row base counts");
  }
  for (int n : base_x) {
    if (n < 1) throw std::invalid_argument("MeshSpec: base counts must be >= 1");
  }
  for (int n : base_y) {
    if (n < 1) throw std::invalid_argument("MeshSpec: base counts must be >= 1");
  }
  if (layers < 0) throw std::invalid_argument("MeshSpec: layers must be >= 0");
  if (!(grading > 0.0 && grading < 1.0)) {
    throw std::invalid_argument("MeshSpec: grading ratio must lie in (0,1)");
  }
  if (degree < 1 || normal_degree < 1) {
    throw std::invalid_argument("MeshSpec: polynomial degrees must be >= 1");
  }
  if (!(max_aspect_ratio > 1.0)) {
    throw std::invalid_argument("MeshSpec: aspect ratio bound must exceed 1");
  }
}

MeshSpec MeshSpec::coarse() {
  MeshSpec s;
  s.base_x = {1, 2, 2, 2, 1};
  s.base_y = {1, 2, 1};
  s.layers = 1;
  s.grading = 0.5;
  s.degree = 2;
  s.normal_degree = 2;
  return s;
}

namespace {

struct Subdivision {
  std::vector<double> breaks;
  std::vector<int> degree;  // per sub-interval
};

// Uniform base elements; each graded end has its outermost base element
// replaced by layers+1 elements whose thicknesses shrink geometrically
// toward that end.
void subdivide(double a, double b, int n_base, bool grade_lo, bool grade_hi, const MeshSpec& spec,
               Subdivision& out) {
  const int graded_ends = (grade_lo ? 1 : 0) + (grade_hi ? 1 : 0);
  if (spec.layers > 0 && graded_ends > n_base) {
    std::ostringstream os;
    os << "generate_layered_mesh: layer budget cannot fit in region [" << a << ", " << b
       << "] with " << n_base << " base element(s) and " << graded_ends << " graded side(s)";
    throw std::invalid_argument(os.str());
  }
  const double hb = (b - a) / n_base;
  std::vector<double> graded;  // fractions of hb, from the graded end inward
  if (spec.layers > 0) {
    double sum = 0.0;
    for (int k = 0; k <= spec.layers; ++k) sum += std::pow(spec.grading, k);
    double acc = 0.0;
    for (int k = spec.layers; k >= 0; --k) {
      acc += std::pow(spec.grading, k) / sum;
      graded.push_back(acc);
    }
  }
  auto push = [&](double x, int p) {
    out.breaks.push_back(x);
    out.degree.push_back(p);
  };
  const int boost = spec.normal_degree;
  const bool layered = spec.layers > 0;
  // out.breaks already holds `a`.
  for (int e = 0; e < n_base; ++e) {
    const double x0 = a + e * hb;
    const double x1 = (e + 1 == n_base) ? b : a + (e + 1) * hb;
    if (layered && grade_lo && e == 0) {
      for (std::size_t k = 0; k < graded.size(); ++k) {
        const double x = (k + 1 == graded.size()) ? x1 : x0 + graded[k] * hb;
        push(x, k == 0 ? boost : spec.degree);
      }
    } else if (layered && grade_hi && e + 1 == n_base) {
      for (std::size_t k = graded.size(); k-- > 0;) {
        const double x = (k == 0) ? x1 : x1 - graded[k - 1] * hb;
        push(x, k == 0 ? boost : spec.degree);
      }
    } else {
      push(x1, spec.degree);
    }
  }
}

}  // namespace

Mesh generate_layered_mesh(const DomainGeometry& geom, const MeshSpec& spec, double length_unit) {
  spec.validate();
  if (!(length_unit > 0.0)) throw std::invalid_argument("generate_layered_mesh: bad length unit");
  // Which ends of each block column/row touch an interface line.
  const bool x_lo[5] = {false, true, true, true, true};
  const bool x_hi[5] = {true, true, true, true, false};
  const bool y_lo[3] = {false, true, true};
  const bool y_hi[3] = {true, true, false};

  Subdivision sx, sy;
  sx.breaks.push_back(geom.x_breaks[0]);
  sy.breaks.push_back(geom.y_breaks[0]);
  std::vector<int> col_block, row_block;
  for (int i = 0; i < 5; ++i) {
    const std::size_t before = sx.degree.size();
    subdivide(geom.x_breaks[i], geom.x_breaks[i + 1], spec.base_x[i], x_lo[i], x_hi[i], spec, sx);
    col_block.insert(col_block.end(), sx.degree.size() - before, i);
  }
  for (int j = 0; j < 3; ++j) {
    const std::size_t before = sy.degree.size();
    subdivide(geom.y_breaks[j], geom.y_breaks[j + 1], spec.base_y[j], y_lo[j], y_hi[j], spec, sy);
    row_block.insert(row_block.end(), sy.degree.size() - before, j);
  }

  const int nx = static_cast<int>(sx.degree.size());
  const int ny = static_cast<int>(sy.degree.size());
  std::vector<Point> nodes;
  nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      nodes.push_back({sx.breaks[i] / length_unit, sy.breaks[j] / length_unit});
    }
  }
  std::vector<std::array<int, 4>> quads;
  std::vector<Subdomain> tags;
  std::vector<std::array<int, 2>> degrees;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v0 = j * (nx + 1) + i;
      quads.push_back({v0, v0 + 1, v0 + nx + 2, v0 + nx + 1});
      tags.push_back(geom.block_subdomain(col_block[i], row_block[j]));
      degrees.push_back({sx.degree[i], sy.degree[j]});
    }
  }
  return Mesh::from_quads(std::move(nodes), std::move(quads), std::move(tags), std::move(degrees),
                          length_unit);
}

Mesh make_rectangle_mesh(double width, double height, int nx, int ny, int degree, Subdomain tag) {
  if (nx < 1 || ny < 1 || degree < 1 || !(width > 0) || !(height > 0)) {
    throw std::invalid_argument("make_rectangle_mesh: invalid arguments");
  }
  std::vector<Point> nodes;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) nodes.push_back({width * i / nx, height * j / ny});
  }
  std::vector<std::array<int, 4>> quads;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v0 = j * (nx + 1) + i;
      quads.push_back({v0, v0 + 1, v0 + nx + 2, v0 + nx + 1});
    }
  }
  const std::size_t n = quads.size();
  return Mesh::from_quads(std::move(nodes), std::move(quads), std::vector<Subdomain>(n, tag),
                          std::vector<std::array<int, 2>>(n, {degree, degree}));
}

std::array<int, 2> Mesh::local_edge_vertices(int k, int e) const {
  const auto& q = quads[k];
  switch (e) {
    case 0: return {q[0], q[1]};
    case 1: return {q[1], q[2]};
    case 2: return {q[3], q[2]};
    case 3: return {q[0], q[3]};
  }
  throw std::out_of_range("local_edge_vertices: bad local edge");
}

int Mesh::edge_degree(int k, int e) const { return (e % 2 == 0) ? degree[k][0] : degree[k][1]; }

double Mesh::element_area(int k) const {
  double a = 0.0;
  const auto& q = quads[k];
  for (int i = 0; i < 4; ++i) {
    const Point& p = nodes[q[i]];
    const Point& r = nodes[q[(i + 1) % 4]];
    a += p.x * r.y - r.x * p.y;
  }
  return 0.5 * a;
}

double Mesh::subdomain_area(Subdomain s) const {
  double a = 0.0;
  for (int k = 0; k < num_elements(); ++k) {
    if (subdomain[k] == s) a += element_area(k);
  }
  return a;
}

Mesh Mesh::from_quads(std::vector<Point> nodes, std::vector<std::array<int, 4>> quads,
                      std::vector<Subdomain> subdomain, std::vector<std::array<int, 2>> degree,
                      double length_unit) {
  if (quads.size() != subdomain.size() || quads.size() != degree.size()) {
    throw std::invalid_argument("Mesh::from_quads: per-element arrays differ in length");
  }
  Mesh m;
  m.nodes = std::move(nodes);
  m.quads = std::move(quads);
  m.subdomain = std::move(subdomain);
  m.degree = std::move(degree);
  m.length_unit = length_unit;
  m.element_edges.assign(m.quads.size(), {-1, -1, -1, -1});

  std::map<std::pair<int, int>, int> lookup;
  for (int k = 0; k < m.num_elements(); ++k) {
    for (int e = 0; e < 4; ++e) {
      auto [a, b] = m.local_edge_vertices(k, e);
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        MeshEdge edge;
        edge.v = {key.first, key.second};
        edge.elem[0] = k;
        edge.local[0] = e;
        lookup.emplace(key, m.num_edges());
        m.element_edges[k][e] = m.num_edges();
        m.edges.push_back(edge);
      } else {
        MeshEdge& edge = m.edges[it->second];
        if (edge.elem[1] >= 0) {
          throw std::invalid_argument("Mesh::from_quads: edge shared by more than two elements");
        }
        edge.elem[1] = k;
        edge.local[1] = e;
        m.element_edges[k][e] = it->second;
      }
    }
  }

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Point& p : m.nodes) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double tol = 1e-12 * std::max(xmax - xmin, ymax - ymin);
  for (MeshEdge& edge : m.edges) {
    if (edge.elem[1] < 0) {
      edge.kind = EdgeKind::Boundary;
      const Point& a = m.nodes[edge.v[0]];
      const Point& b = m.nodes[edge.v[1]];
      if (std::abs(a.x - xmin) <= tol && std::abs(b.x - xmin) <= tol) {
        edge.part = BoundaryPart::CcMinus;
      } else if (std::abs(a.x - xmax) <= tol && std::abs(b.x - xmax) <= tol) {
        edge.part = BoundaryPart::CcPlus;
      } else if (std::abs(a.y - ymin) <= tol && std::abs(b.y - ymin) <= tol) {
        edge.part = BoundaryPart::Bottom;
      } else {
        edge.part = BoundaryPart::Top;  // validate_mesh checks it really lies there
      }
      continue;
    }
    const Subdomain s0 = m.subdomain[edge.elem[0]];
    const Subdomain s1 = m.subdomain[edge.elem[1]];
    if (is_electrode(s0) != is_electrode(s1)) {
      edge.kind = EdgeKind::Interface;
      if (!is_electrode(s0)) {
        std::swap(edge.elem[0], edge.elem[1]);
        std::swap(edge.local[0], edge.local[1]);
      }
    } else {
      edge.kind = EdgeKind::Interior;
    }
  }
  return m;
}

namespace {

double corner_jacobian(const Mesh& m, int k, int corner) {
  const auto& q = m.quads[k];
  const Point& p = m.nodes[q[corner]];
  const Point& next = m.nodes[q[(corner + 1) % 4]];
  const Point& prev = m.nodes[q[(corner + 3) % 4]];
  const double ax = next.x - p.x, ay = next.y - p.y;
  const double bx = prev.x - p.x, by = prev.y - p.y;
  return 0.25 * (ax * by - ay * bx);  // det of reference-to-physical map at the corner
}

double length(const Point& a, const Point& b) { return std::hypot(b.x - a.x, b.y - a.y); }

}  // namespace

QualityReport validate_mesh(const Mesh& mesh, double max_aspect_ratio) {
  QualityReport r;
  if (mesh.num_elements() == 0) {
    r.violations.push_back("no elements");
    return r;
  }
  r.min_jacobian = 1e300;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    r.elements[static_cast<int>(mesh.subdomain[k])]++;
    for (int c = 0; c < 4; ++c) {
      const double j = corner_jacobian(mesh, k, c);
      r.min_jacobian = std::min(r.min_jacobian, j);
      if (!(j > 0.0)) {
        std::ostringstream os;
        os << "negative Jacobian in element " << k << " at corner " << c;
        r.violations.push_back(os.str());
      }
    }
    double lmin = 1e300, lmax = 0.0;
    for (int e = 0; e < 4; ++e) {
      auto [a, b] = mesh.local_edge_vertices(k, e);
      const double len = length(mesh.nodes[a], mesh.nodes[b]);
      lmin = std::min(lmin, len);
      lmax = std::max(lmax, len);
    }
    const double ar = lmin > 0.0 ? lmax / lmin : 1e300;
    r.max_aspect_ratio = std::max(r.max_aspect_ratio, ar);
    if (ar > max_aspect_ratio) {
      std::ostringstream os;
      os << "aspect ratio " << ar << " of element " << k << " exceeds bound " << max_aspect_ratio;
      r.violations.push_back(os.str());
    }
    if (mesh.degree[k][0] < 1 || mesh.degree[k][1] < 1) {
      r.violations.push_back("element " + std::to_string(k) + " has degree < 1");
    }
  }

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Point& p : mesh.nodes) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double tol = 1e-9 * std::max(xmax - xmin, ymax - ymin);
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const MeshEdge& e = mesh.edges[i];
    switch (e.kind) {
      case EdgeKind::Interior: {
        r.interior_edges++;
        const Subdomain s0 = mesh.subdomain[e.elem[0]];
        const Subdomain s1 = mesh.subdomain[e.elem[1]];
        if (s0 != s1) {
          r.violations.push_back("edge " + std::to_string(i) + " joins anode and cathode");
        }
        break;
      }
      case EdgeKind::Interface: {
        r.interface_edges++;
        if (!is_electrode(mesh.subdomain[e.elem[0]]) ||
            mesh.subdomain[e.elem[1]] != Subdomain::Electrolyte) {
          r.violations.push_back("interface edge " + std::to_string(i) + " is mis-paired");
        }
        break;
      }
      case EdgeKind::Boundary: {
        r.boundary_edges[static_cast<int>(e.part)]++;
        const Point& a = mesh.nodes[e.v[0]];
        const Point& b = mesh.nodes[e.v[1]];
        bool on_side = false;
        switch (e.part) {
          case BoundaryPart::CcMinus: on_side = std::abs(a.x - xmin) + std::abs(b.x - xmin) <= tol; break;
          case BoundaryPart::CcPlus: on_side = std::abs(a.x - xmax) + std::abs(b.x - xmax) <= tol; break;
          case BoundaryPart::Bottom: on_side = std::abs(a.y - ymin) + std::abs(b.y - ymin) <= tol; break;
          case BoundaryPart::Top: on_side = std::abs(a.y - ymax) + std::abs(b.y - ymax) <= tol; break;
        }
        if (!on_side) {
          r.violations.push_back("boundary edge " + std::to_string(i) +
                                 " is not on the exterior boundary (hanging node?)");
        }
        break;
      }
    }
    if (e.elem[1] >= 0 && mesh.edge_degree(e.elem[0], e.local[0]) !=
                              mesh.edge_degree(e.elem[1], e.local[1])) {
      r.violations.push_back("edge " + std::to_string(i) + " has mismatched degrees");
    }
  }
  return r;
}

double max_interface_normal_thickness(const Mesh& mesh) {
  double t = 0.0;
  for (const MeshEdge& e : mesh.edges) {
    if (e.kind != EdgeKind::Interface) continue;
    const double len = length(mesh.nodes[e.v[0]], mesh.nodes[e.v[1]]);
    for (int s = 0; s < 2; ++s) t = std::max(t, mesh.element_area(e.elem[s]) / len);
  }
  return t;
}

}  // namespace voltacell
