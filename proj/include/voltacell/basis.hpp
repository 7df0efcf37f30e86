#pragma once

#include <array>
#include <vector>

#include "voltacell/geometry.hpp"

namespace voltacell {

/// Gauss-Lobatto-Legendre nodes on [-1,1], ascending, p+1 of them.
std::vector<double> gauss_lobatto_nodes(int p);

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [-1,1] (exact to degree 2n-1).
Rule1D gauss_legendre(int n);

struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
};

/// Tensor Gauss-Legendre rule on the reference square.
QuadratureRule square_rule(int nx, int ny);

/// Number of Gauss points per direction used for an element of degree (px, py).
inline int quadrature_points_for(int px, int py) { return (px > py ? px : py) + 2; }

/// 1D Lagrange basis on GLL nodes.
class Lagrange1D {
 public:
  explicit Lagrange1D(int p);
  int degree() const { return static_cast<int>(nodes_.size()) - 1; }
  const std::vector<double>& nodes() const { return nodes_; }
  void eval(double x, double* values, double* derivatives) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> denom_;
};

/// Values and reference gradients of the tensor-product basis. Local index
/// of node (a, b) is b * (px + 1) + a.
struct ShapeValues {
  std::vector<double> values;
  std::vector<std::array<double, 2>> gradients;
};

ShapeValues shape_eval(int px, int py, double xi, double eta);

/// Bilinear reference-to-physical map of a quadrilateral.
struct BilinearMap {
  std::array<Point, 4> v;

  Point map(double xi, double eta) const;
  /// Jacobian [[dx/dxi, dx/deta], [dy/dxi, dy/deta]].
  std::array<double, 4> jacobian(double xi, double eta) const;
};

BilinearMap element_map(const Mesh& mesh, int k);

/// Reference coordinates on local edge `e` for parameter t in [-1,1]
/// running along increasing local coordinate.
std::array<double, 2> edge_reference_point(int e, double t);

}  // namespace voltacell
