#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "voltacell/space.hpp"

namespace voltacell {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Coefficients are sampled at cached quadrature points.
using ElementCoefficient = std::function<double(int element, int point)>;
using ElementVectorCoefficient = std::function<std::array<double, 2>(int element, int point)>;
using EdgeCoefficient = std::function<double(int edge, int point)>;

ElementCoefficient constant_coefficient(double value);
EdgeCoefficient constant_edge_coefficient(double value);

/// Symmetric matrix on the free DOFs of a space (full storage).
struct SparseSym {
  SparseMatrix matrix;

  int size() const { return static_cast<int>(matrix.rows()); }
  /// max|A - A^T| / max|A|.
  double asymmetry() const;
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

// Matrices over all DOFs of the space (constraints not applied).
SparseMatrix assemble_mass(const FieldSpace& space, const QuadratureCache& cache,
                           const ElementCoefficient& rho);
SparseMatrix assemble_stiffness(const FieldSpace& space, const QuadratureCache& cache,
                                const ElementCoefficient& kappa);
/// Boundary mass over the interface edges, integrated on the given side
/// (0 electrode, 1 electrolyte).
SparseMatrix assemble_interface_mass(const FieldSpace& space, const QuadratureCache& cache,
                                     int side, const EdgeCoefficient& coefficient);
/// Plane-strain elasticity (grad_sym v, C : grad_sym u) for a 2-vector space.
SparseMatrix assemble_elasticity(const FieldSpace& space, const QuadratureCache& cache,
                                 const ElementCoefficient& shear_modulus,
                                 const ElementCoefficient& bulk_modulus);

// Load vectors over all DOFs.
Vector assemble_source(const FieldSpace& space, const QuadratureCache& cache,
                       const ElementCoefficient& f);
/// (grad psi, g).
Vector assemble_flux_load(const FieldSpace& space, const QuadratureCache& cache,
                          const ElementVectorCoefficient& g);
/// (div v, s) for a 2-vector space.
Vector assemble_divergence_load(const FieldSpace& space, const QuadratureCache& cache,
                                const ElementCoefficient& s);
/// <psi, f> over the listed edges, seen from `side`.
Vector assemble_edge_load(const FieldSpace& space, const QuadratureCache& cache,
                          const std::vector<int>& edges, int side, const EdgeCoefficient& f);

// Constraint handling by reduction to the free DOFs.
SparseSym restrict_to_free(const FieldSpace& space, const SparseMatrix& full);
/// b_free - A_fc * g where g are the prescribed values.
Vector lifted_rhs(const FieldSpace& space, const SparseMatrix& full, const Vector& b_full);
Vector free_part(const FieldSpace& space, const Vector& full);
/// Full vector from free values plus the prescribed constraint values.
Vector expand_free(const FieldSpace& space, const Vector& free);

}  // namespace voltacell
