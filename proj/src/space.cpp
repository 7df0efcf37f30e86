#include "voltacell/space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "voltacell/basis.hpp"

namespace voltacell {

bool in_support(Support s, Subdomain d) {
  switch (s) {
    case Support::All: return true;
    case Support::Solid: return is_electrode(d);
    case Support::Electrolyte: return d == Subdomain::Electrolyte;
    case Support::Anode: return d == Subdomain::Anode;
    case Support::Cathode: return d == Subdomain::Cathode;
  }
  return false;
}

const char* to_string(Support s) {
  switch (s) {
    case Support::All: return "all";
    case Support::Solid: return "solid";
    case Support::Electrolyte: return "electrolyte";
    case Support::Anode: return "anode";
    case Support::Cathode: return "cathode";
  }
  return "?";
}

namespace {

// Local node indices lying on local edge e, in increasing local coordinate.
std::vector<int> edge_local_nodes(int px, int py, int e) {
  std::vector<int> out;
  switch (e) {
    case 0:
      for (int a = 0; a <= px; ++a) out.push_back(a);
      break;
    case 1:
      for (int b = 0; b <= py; ++b) out.push_back(b * (px + 1) + px);
      break;
    case 2:
      for (int a = 0; a <= px; ++a) out.push_back(py * (px + 1) + a);
      break;
    case 3:
      for (int b = 0; b <= py; ++b) out.push_back(b * (px + 1));
      break;
  }
  return out;
}

}  // namespace

NodeNumbering::NodeNumbering(const Mesh& mesh) {
  const int nv = static_cast<int>(mesh.nodes.size());
  std::vector<int> edge_offset(mesh.num_edges());
  int next = nv;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const MeshEdge& edge = mesh.edges[e];
    edge_offset[e] = next;
    next += mesh.edge_degree(edge.elem[0], edge.local[0]) - 1;
  }
  element_nodes_.resize(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const int px = mesh.degree[k][0];
    const int py = mesh.degree[k][1];
    std::vector<int>& ids = element_nodes_[k];
    ids.assign((px + 1) * (py + 1), -1);
    const auto& q = mesh.quads[k];
    ids[0] = q[0];
    ids[px] = q[1];
    ids[py * (px + 1) + px] = q[2];
    ids[py * (px + 1)] = q[3];
    for (int le = 0; le < 4; ++le) {
      const int e = mesh.element_edges[k][le];
      const int p = mesh.edge_degree(k, le);
      const auto [start, end] = mesh.local_edge_vertices(k, le);
      (void)end;
      const bool forward = start == mesh.edges[e].v[0];
      const std::vector<int> loc = edge_local_nodes(px, py, le);
      for (int a = 1; a < p; ++a) {
        const int kk = forward ? a : p - a;
        ids[loc[a]] = edge_offset[e] + kk - 1;
      }
    }
    for (int b = 1; b < py; ++b) {
      for (int a = 1; a < px; ++a) ids[b * (px + 1) + a] = next++;
    }
  }
  num_nodes_ = next;
}

FieldSpace::FieldSpace(const Mesh& mesh, Support support, int arity,
                       const std::vector<EssentialBC>& constraints)
    : mesh_(&mesh), support_(support), arity_(arity) {
  if (arity != 1 && arity != 2) throw std::invalid_argument("FieldSpace: arity must be 1 or 2");
  local_.assign(mesh.num_elements(), 0);
  for (int k = 0; k < mesh.num_elements(); ++k) {
    if (in_support(support, mesh.subdomain[k])) {
      elements_.push_back(k);
      local_[k] = 1;
    }
  }
  if (elements_.empty()) {
    throw std::invalid_argument(std::string("FieldSpace: selector '") + to_string(support) +
                                "' has no elements");
  }

  const NodeNumbering numbering(mesh);
  std::vector<int> node_dof(numbering.num_nodes(), -1);
  element_dofs_.resize(mesh.num_elements());
  int nnodes = 0;
  std::vector<Point> node_coords;
  for (int k : elements_) {
    const int px = mesh.degree[k][0];
    const int py = mesh.degree[k][1];
    const Lagrange1D lx(px), ly(py);
    const BilinearMap map = element_map(mesh, k);
    const std::vector<int>& ids = numbering.element_nodes(k);
    std::vector<int>& dofs = element_dofs_[k];
    dofs.resize(ids.size() * arity);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      int& n = node_dof[ids[i]];
      if (n < 0) {
        n = nnodes++;
        const int a = static_cast<int>(i) % (px + 1);
        const int b = static_cast<int>(i) / (px + 1);
        node_coords.push_back(map.map(lx.nodes()[a], ly.nodes()[b]));
      }
      for (int c = 0; c < arity; ++c) dofs[i * arity + c] = n * arity + c;
    }
  }
  dof_coords_.resize(static_cast<std::size_t>(nnodes) * arity);
  dof_component_.resize(dof_coords_.size());
  for (int n = 0; n < nnodes; ++n) {
    for (int c = 0; c < arity; ++c) {
      dof_coords_[n * arity + c] = node_coords[n];
      dof_component_[n * arity + c] = c;
    }
  }

  std::vector<char> constrained(dof_coords_.size(), 0);
  constraint_values_ = Vector::Zero(static_cast<Eigen::Index>(dof_coords_.size()));
  for (const EssentialBC& bc : constraints) {
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const MeshEdge& edge = mesh.edges[e];
      if (edge.kind != EdgeKind::Boundary || edge.part != bc.part) continue;
      const int k = edge.elem[0];
      if (!local_[k]) continue;
      std::vector<int> comps;
      if (bc.component == EssentialBC::kAll) {
        for (int c = 0; c < arity; ++c) comps.push_back(c);
      } else if (bc.component == EssentialBC::kNormal) {
        if (arity != 2) throw std::invalid_argument("FieldSpace: normal constraint needs a vector space");
        const Point& a = mesh.nodes[edge.v[0]];
        const Point& b = mesh.nodes[edge.v[1]];
        const double scale = std::hypot(b.x - a.x, b.y - a.y);
        if (std::abs(a.x - b.x) <= 1e-12 * scale) {
          comps.push_back(0);
        } else if (std::abs(a.y - b.y) <= 1e-12 * scale) {
          comps.push_back(1);
        } else {
          throw std::invalid_argument("FieldSpace: normal constraint on a non axis-aligned edge");
        }
      } else {
        if (bc.component < 0 || bc.component >= arity) {
          throw std::invalid_argument("FieldSpace: constraint component out of range");
        }
        comps.push_back(bc.component);
      }
      const std::vector<int> loc =
          edge_local_nodes(mesh.degree[k][0], mesh.degree[k][1], edge.local[0]);
      for (int i : loc) {
        for (int c : comps) {
          const int d = element_dofs_[k][i * arity + c];
          constrained[d] = 1;
          constraint_values_[d] = bc.value ? bc.value(dof_coords_[d]) : 0.0;
        }
      }
    }
  }
  free_index_.assign(dof_coords_.size(), -1);
  for (int d = 0; d < num_dofs(); ++d) {
    if (!constrained[d]) {
      free_index_[d] = static_cast<int>(free_dofs_.size());
      free_dofs_.push_back(d);
    }
  }
}

namespace {

void physical_gradients(const std::array<double, 4>& J, const ShapeValues& s, std::vector<double>& gx,
                        std::vector<double>& gy, double& det) {
  det = J[0] * J[3] - J[1] * J[2];
  const double inv[4] = {J[3] / det, -J[1] / det, -J[2] / det, J[0] / det};
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double gxi = s.gradients[i][0];
    const double geta = s.gradients[i][1];
    // grad_x N = J^{-T} grad_ref N
    gx.push_back(inv[0] * gxi + inv[2] * geta);
    gy.push_back(inv[1] * gxi + inv[3] * geta);
  }
}

}  // namespace

QuadratureCache::QuadratureCache(const Mesh& mesh, int extra_order) : mesh_(&mesh) {
  elements_.resize(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const int px = mesh.degree[k][0];
    const int py = mesh.degree[k][1];
    const int n = quadrature_points_for(px, py) + extra_order;
    const QuadratureRule rule = square_rule(n, n);
    const BilinearMap map = element_map(mesh, k);
    ElementQuadrature& eq = elements_[k];
    eq.num_basis = (px + 1) * (py + 1);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto [xi, eta] = rule.points[q];
      const ShapeValues s = shape_eval(px, py, xi, eta);
      double det = 0.0;
      physical_gradients(map.jacobian(xi, eta), s, eq.dNx, eq.dNy, det);
      if (!(det > 0.0)) {
        throw std::invalid_argument("QuadratureCache: non-positive Jacobian in element " +
                                    std::to_string(k));
      }
      eq.x.push_back(map.map(xi, eta));
      eq.weight.push_back(rule.weights[q] * det);
      eq.N.insert(eq.N.end(), s.values.begin(), s.values.end());
    }
  }

  edges_.resize(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const MeshEdge& edge = mesh.edges[e];
    if (edge.kind == EdgeKind::Interior) continue;
    if (edge.kind == EdgeKind::Interface) {
      interface_edges_.push_back(e);
    } else {
      boundary_edges_[static_cast<int>(edge.part)].push_back(e);
    }
    const Point& ga = mesh.nodes[edge.v[0]];
    const Point& gb = mesh.nodes[edge.v[1]];
    const double len = std::hypot(gb.x - ga.x, gb.y - ga.y);
    for (int side = 0; side < 2; ++side) {
      const int k = edge.elem[side];
      if (k < 0) continue;
      const int le = edge.local[side];
      const int px = mesh.degree[k][0];
      const int py = mesh.degree[k][1];
      const int n = quadrature_points_for(px, py) + extra_order;
      const Rule1D rule = gauss_legendre(n);
      const BilinearMap map = element_map(mesh, k);
      const auto [start, end] = mesh.local_edge_vertices(k, le);
      const bool forward = start == edge.v[0];
      EdgeSideQuadrature sq;
      sq.element = k;
      sq.local_edge = le;
      sq.num_basis = (px + 1) * (py + 1);
      const Point& ps = mesh.nodes[start];
      const Point& pe = mesh.nodes[end];
      const double tx = (pe.x - ps.x) / len;
      const double ty = (pe.y - ps.y) / len;
      const double sign = (le == 0 || le == 1) ? 1.0 : -1.0;
      sq.normal = {sign * ty, -sign * tx};
      for (int q = 0; q < n; ++q) {
        const double t = forward ? rule.x[q] : -rule.x[q];
        const auto [xi, eta] = edge_reference_point(le, t);
        const ShapeValues s = shape_eval(px, py, xi, eta);
        double det = 0.0;
        physical_gradients(map.jacobian(xi, eta), s, sq.dNx, sq.dNy, det);
        sq.x.push_back(map.map(xi, eta));
        sq.weight.push_back(rule.w[q] * 0.5 * len);
        sq.N.insert(sq.N.end(), s.values.begin(), s.values.end());
      }
      edges_[e][side] = std::move(sq);
    }
  }
}

ElementQuadrature element_samples(const Mesh& mesh, int k,
                                  const std::vector<std::array<double, 2>>& ref_points) {
  const int px = mesh.degree[k][0];
  const int py = mesh.degree[k][1];
  const BilinearMap map = element_map(mesh, k);
  ElementQuadrature eq;
  eq.num_basis = (px + 1) * (py + 1);
  for (const auto& [xi, eta] : ref_points) {
    const ShapeValues s = shape_eval(px, py, xi, eta);
    double det = 0.0;
    physical_gradients(map.jacobian(xi, eta), s, eq.dNx, eq.dNy, det);
    eq.x.push_back(map.map(xi, eta));
    eq.weight.push_back(det);
    eq.N.insert(eq.N.end(), s.values.begin(), s.values.end());
  }
  return eq;
}

const EdgeSideQuadrature& QuadratureCache::edge(int e, int side) const {
  if (!has_edge(e, side)) {
    throw std::out_of_range("QuadratureCache: no quadrature for edge " + std::to_string(e) +
                            " side " + std::to_string(side));
  }
  return *edges_[e][side];
}

bool QuadratureCache::has_edge(int e, int side) const {
  return e >= 0 && e < static_cast<int>(edges_.size()) && side >= 0 && side < 2 &&
         edges_[e][side].has_value();
}

double field_at(const FieldSpace& space, const ElementQuadrature& q, int k, int point,
                const Vector& coeffs, int component) {
  const std::vector<int>& dofs = space.element_dofs(k);
  const int a = space.arity();
  const double* N = &q.N[static_cast<std::size_t>(point) * q.num_basis];
  double v = 0.0;
  for (int i = 0; i < q.num_basis; ++i) v += N[i] * coeffs[dofs[i * a + component]];
  return v;
}

std::array<double, 2> field_gradient_at(const FieldSpace& space, const ElementQuadrature& q, int k,
                                        int point, const Vector& coeffs, int component) {
  const std::vector<int>& dofs = space.element_dofs(k);
  const int a = space.arity();
  const std::size_t off = static_cast<std::size_t>(point) * q.num_basis;
  std::array<double, 2> g{0.0, 0.0};
  for (int i = 0; i < q.num_basis; ++i) {
    const double c = coeffs[dofs[i * a + component]];
    g[0] += q.dNx[off + i] * c;
    g[1] += q.dNy[off + i] * c;
  }
  return g;
}

double field_at_edge(const FieldSpace& space, const EdgeSideQuadrature& q, int point,
                     const Vector& coeffs, int component) {
  const std::vector<int>& dofs = space.element_dofs(q.element);
  const int a = space.arity();
  const double* N = &q.N[static_cast<std::size_t>(point) * q.num_basis];
  double v = 0.0;
  for (int i = 0; i < q.num_basis; ++i) v += N[i] * coeffs[dofs[i * a + component]];
  return v;
}

Vector interpolate(const FieldSpace& space, const std::function<double(const Point&)>& f) {
  Vector v(space.num_dofs());
  for (int d = 0; d < space.num_dofs(); ++d) v[d] = f(space.dof_coord(d));
  return v;
}

}  // namespace voltacell
