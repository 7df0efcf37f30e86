#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "voltacell/geometry.hpp"

namespace voltacell {

using Vector = Eigen::VectorXd;

enum class Support { All, Solid, Electrolyte, Anode, Cathode };

bool in_support(Support s, Subdomain d);
const char* to_string(Support s);

/// Essential condition on the DOFs lying on a boundary part. `component`
/// selects a vector component, kAll constrains every component and kNormal
/// the component normal to the (axis-aligned) boundary edge.
struct EssentialBC {
  static constexpr int kAll = -1;
  static constexpr int kNormal = -2;

  BoundaryPart part = BoundaryPart::CcMinus;
  int component = kAll;
  std::function<double(const Point&)> value;  // empty means homogeneous
};

/// Global H1 node numbering shared by every field on a mesh: vertices, then
/// edge-interior nodes, then element-interior nodes.
class NodeNumbering {
 public:
  explicit NodeNumbering(const Mesh& mesh);
  int num_nodes() const { return num_nodes_; }
  const std::vector<int>& element_nodes(int k) const { return element_nodes_[k]; }

 private:
  int num_nodes_ = 0;
  std::vector<std::vector<int>> element_nodes_;
};

class FieldSpace {
 public:
  FieldSpace(const Mesh& mesh, Support support, int arity,
             const std::vector<EssentialBC>& constraints = {});

  const Mesh& mesh() const { return *mesh_; }
  Support support() const { return support_; }
  int arity() const { return arity_; }
  const std::vector<int>& elements() const { return elements_; }
  bool has_element(int k) const { return local_[k]; }

  int num_dofs() const { return static_cast<int>(dof_coords_.size()); }
  int num_free() const { return static_cast<int>(free_dofs_.size()); }
  int num_constrained() const { return num_dofs() - num_free(); }

  /// Local DOF l = node * arity + component.
  const std::vector<int>& element_dofs(int k) const { return element_dofs_[k]; }
  const Point& dof_coord(int d) const { return dof_coords_[d]; }
  int dof_component(int d) const { return dof_component_[d]; }
  bool is_constrained(int d) const { return free_index_[d] < 0; }
  int free_index(int d) const { return free_index_[d]; }
  const std::vector<int>& free_dofs() const { return free_dofs_; }
  /// Prescribed values at constrained DOFs, zero elsewhere.
  const Vector& constraint_values() const { return constraint_values_; }

 private:
  const Mesh* mesh_;
  Support support_;
  int arity_;
  std::vector<int> elements_;
  std::vector<char> local_;
  std::vector<std::vector<int>> element_dofs_;
  std::vector<Point> dof_coords_;
  std::vector<int> dof_component_;
  std::vector<int> free_index_;
  std::vector<int> free_dofs_;
  Vector constraint_values_;
};

/// Cached element quadrature: physical points, weights (|J| w) and basis
/// values/physical gradients, shared by every field on a mesh.
struct ElementQuadrature {
  int num_basis = 0;
  std::vector<Point> x;
  std::vector<double> weight;
  std::vector<double> N;    // [q * num_basis + i]
  std::vector<double> dNx;  // physical gradients
  std::vector<double> dNy;

  int num_points() const { return static_cast<int>(weight.size()); }
};

/// Edge quadrature seen from one adjacent element. Points are ordered along
/// the global edge direction so both sides of an interface edge line up.
struct EdgeSideQuadrature {
  int element = -1;
  int local_edge = -1;
  int num_basis = 0;
  Point normal;  // outward from `element`
  std::vector<Point> x;
  std::vector<double> weight;
  std::vector<double> N;  // [q * num_basis + i]
  std::vector<double> dNx;
  std::vector<double> dNy;

  int num_points() const { return static_cast<int>(weight.size()); }
};

/// Basis data of element k at arbitrary reference points; `weight` holds
/// the Jacobian determinant.
ElementQuadrature element_samples(const Mesh& mesh, int k,
                                  const std::vector<std::array<double, 2>>& ref_points);

class QuadratureCache {
 public:
  /// `extra_order` adds Gauss points beyond the default max(p)+2.
  explicit QuadratureCache(const Mesh& mesh, int extra_order = 0);

  const Mesh& mesh() const { return *mesh_; }
  const ElementQuadrature& element(int k) const { return elements_[k]; }
  /// Side 0 of an interface edge is the electrode, side 1 the electrolyte.
  /// Boundary edges only have side 0. Interior edges have no data.
  const EdgeSideQuadrature& edge(int e, int side) const;
  bool has_edge(int e, int side) const;
  const std::vector<int>& interface_edges() const { return interface_edges_; }
  const std::vector<int>& boundary_edges(BoundaryPart part) const {
    return boundary_edges_[static_cast<int>(part)];
  }

 private:
  const Mesh* mesh_;
  std::vector<ElementQuadrature> elements_;
  std::vector<std::array<std::optional<EdgeSideQuadrature>, 2>> edges_;
  std::vector<int> interface_edges_;
  std::array<std::vector<int>, 4> boundary_edges_;
};

/// Evaluates a field (arity 1) or one component of it at an element quadrature point.
double field_at(const FieldSpace& space, const ElementQuadrature& q, int k, int point,
                const Vector& coeffs, int component = 0);
std::array<double, 2> field_gradient_at(const FieldSpace& space, const ElementQuadrature& q, int k,
                                        int point, const Vector& coeffs,
                                        int component = 0);
double field_at_edge(const FieldSpace& space, const EdgeSideQuadrature& q, int point,
                     const Vector& coeffs, int component = 0);

/// Nodal interpolation of f at the DOF coordinates (arity 1).
Vector interpolate(const FieldSpace& space, const std::function<double(const Point&)>& f);

}  // namespace voltacell
