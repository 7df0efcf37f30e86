#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "voltacell/assembly.hpp"
#include "voltacell/geometry.hpp"
#include "voltacell/space.hpp"

namespace oracle {

using voltacell::Point;

/// Gauss-Legendre via Golub-Welsch.
void gauss(int n, std::vector<double>& x, std::vector<double>& w);
/// Gauss-Lobatto-Legendre nodes: endpoints plus the eigenvalues of the
/// Jacobi(1,1) tridiagonal matrix.
std::vector<double> gll(int p);

using Coef = std::function<double(int element, const Point& x)>;
using EdgeCoef = std::function<double(int edge, const Point& x)>;

// Dense brute-force assembly over axis-aligned rectangular elements, with
// Lagrange bases built directly in physical coordinates. Results are in the
// DOF numbering of `space`, matched by coordinates.
Eigen::MatrixXd mass(const voltacell::FieldSpace& space, const Coef& rho);
Eigen::MatrixXd stiffness(const voltacell::FieldSpace& space, const Coef& kappa);
Eigen::MatrixXd interface_mass(const voltacell::FieldSpace& space, int side, const EdgeCoef& coef);
Eigen::MatrixXd elasticity(const voltacell::FieldSpace& space, const Coef& shear, const Coef& bulk);

/// 4 x 2 block mesh with anode / electrolyte / electrolyte / cathode columns,
/// mixed degrees and non-uniform spacing.
voltacell::Mesh small_cell_mesh();

/// max|A - B| / max|B|.
double relative_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace oracle
