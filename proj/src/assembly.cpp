#include "voltacell/assembly.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace voltacell {

ElementCoefficient constant_coefficient(double value) {
  return [value](int, int) { return value; };
}

EdgeCoefficient constant_edge_coefficient(double value) {
  return [value](int, int) { return value; };
}

double SparseSym::asymmetry() const {
  const SparseMatrix diff = SparseMatrix(matrix.transpose()) - matrix;
  double amax = 0.0, dmax = 0.0;
  for (int c = 0; c < matrix.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(matrix, c); it; ++it) amax = std::max(amax, std::abs(it.value()));
  }
  for (int c = 0; c < diff.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(diff, c); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  }
  return amax > 0.0 ? dmax / amax : 0.0;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

[[noreturn]] void bad_coefficient(const char* what, double v, int k, int q, const Point& x) {
  std::ostringstream os;
  os << what << ": coefficient " << v << " out of range at element " << k << ", quadrature point "
     << q << " (" << x.x << ", " << x.y << ")";
  throw std::domain_error(os.str());
}

SparseMatrix build(const FieldSpace& space, Triplets& t) {
  SparseMatrix m(space.num_dofs(), space.num_dofs());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Scalar bilinear form replicated on each component.
template <class Local>
SparseMatrix assemble_scalar_form(const FieldSpace& space, const QuadratureCache& cache,
                                  Local&& local) {
  Triplets t;
  const int a = space.arity();
  Eigen::MatrixXd ke;
  for (int k : space.elements()) {
    const ElementQuadrature& eq = cache.element(k);
    ke.setZero(eq.num_basis, eq.num_basis);
    local(k, eq, ke);
    const std::vector<int>& dofs = space.element_dofs(k);
    for (int i = 0; i < eq.num_basis; ++i) {
      for (int j = 0; j < eq.num_basis; ++j) {
        if (ke(i, j) == 0.0) continue;
        for (int c = 0; c < a; ++c) t.emplace_back(dofs[i * a + c], dofs[j * a + c], ke(i, j));
      }
    }
  }
  return build(space, t);
}

}  // namespace

SparseMatrix assemble_mass(const FieldSpace& space, const QuadratureCache& cache,
                           const ElementCoefficient& rho) {
  return assemble_scalar_form(space, cache, [&](int k, const ElementQuadrature& eq, Eigen::MatrixXd& ke) {
    const int nb = eq.num_basis;
    for (int q = 0; q < eq.num_points(); ++q) {
      const double c = rho(k, q);
      if (!(c > 0.0) || !std::isfinite(c)) bad_coefficient("assemble_mass", c, k, q, eq.x[q]);
      const double w = c * eq.weight[q];
      const double* N = &eq.N[q * nb];
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j) ke(i, j) += w * N[i] * N[j];
      }
    }
  });
}

SparseMatrix assemble_stiffness(const FieldSpace& space, const QuadratureCache& cache,
                                const ElementCoefficient& kappa) {
  return assemble_scalar_form(space, cache, [&](int k, const ElementQuadrature& eq, Eigen::MatrixXd& ke) {
    const int nb = eq.num_basis;
    for (int q = 0; q < eq.num_points(); ++q) {
      const double c = kappa(k, q);
      if (!(c > 0.0) || !std::isfinite(c)) bad_coefficient("assemble_stiffness", c, k, q, eq.x[q]);
      const double w = c * eq.weight[q];
      const double* gx = &eq.dNx[q * nb];
      const double* gy = &eq.dNy[q * nb];
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j) ke(i, j) += w * (gx[i] * gx[j] + gy[i] * gy[j]);
      }
    }
  });
}

SparseMatrix assemble_interface_mass(const FieldSpace& space, const QuadratureCache& cache,
                                     int side, const EdgeCoefficient& coefficient) {
  Triplets t;
  const int a = space.arity();
  for (int e : cache.interface_edges()) {
    const EdgeSideQuadrature& sq = cache.edge(e, side);
    if (!space.has_element(sq.element)) {
      throw std::invalid_argument("assemble_interface_mass: interface side does not match the space support");
    }
    const std::vector<int>& dofs = space.element_dofs(sq.element);
    const int nb = sq.num_basis;
    Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(nb, nb);
    for (int q = 0; q < sq.num_points(); ++q) {
      const double c = coefficient(e, q);
      if (!(c >= 0.0) || !std::isfinite(c)) {
        bad_coefficient("assemble_interface_mass", c, sq.element, q, sq.x[q]);
      }
      const double w = c * sq.weight[q];
      const double* N = &sq.N[q * nb];
      for (int i = 0; i < nb; ++i) {
        if (N[i] == 0.0) continue;
        for (int j = 0; j < nb; ++j) ke(i, j) += w * N[i] * N[j];
      }
    }
    for (int i = 0; i < nb; ++i) {
      for (int j = 0; j < nb; ++j) {
        if (ke(i, j) == 0.0) continue;
        for (int c = 0; c < a; ++c) t.emplace_back(dofs[i * a + c], dofs[j * a + c], ke(i, j));
      }
    }
  }
  return build(space, t);
}

SparseMatrix assemble_elasticity(const FieldSpace& space, const QuadratureCache& cache,
                                 const ElementCoefficient& shear_modulus,
                                 const ElementCoefficient& bulk_modulus) {
  if (space.arity() != 2) throw std::invalid_argument("assemble_elasticity: needs a 2-vector space");
  Triplets t;
  Eigen::MatrixXd ke;
  for (int k : space.elements()) {
    const ElementQuadrature& eq = cache.element(k);
    const int nb = eq.num_basis;
    ke.setZero(2 * nb, 2 * nb);
    for (int q = 0; q < eq.num_points(); ++q) {
      const double G = shear_modulus(k, q);
      const double K = bulk_modulus(k, q);
      if (!(G > 0.0)) bad_coefficient("assemble_elasticity", G, k, q, eq.x[q]);
      if (!(K > 0.0)) bad_coefficient("assemble_elasticity", K, k, q, eq.x[q]);
      const double lambda = K - 2.0 * G / 3.0;
      const double w = eq.weight[q];
      const double* g[2] = {&eq.dNx[q * nb], &eq.dNy[q * nb]};
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j) {
          const double dot = g[0][i] * g[0][j] + g[1][i] * g[1][j];
          for (int ca = 0; ca < 2; ++ca) {
            for (int cb = 0; cb < 2; ++cb) {
              double v = G * g[cb][i] * g[ca][j] + lambda * g[ca][i] * g[cb][j];
              if (ca == cb) v += G * dot;
              ke(2 * i + ca, 2 * j + cb) += w * v;
            }
          }
        }
      }
    }
    const std::vector<int>& dofs = space.element_dofs(k);
    for (int i = 0; i < 2 * nb; ++i) {
      for (int j = 0; j < 2 * nb; ++j) {
        if (ke(i, j) != 0.0) t.emplace_back(dofs[i], dofs[j], ke(i, j));
      }
    }
  }
  return build(space, t);
}

Vector assemble_source(const FieldSpace& space, const QuadratureCache& cache,
                       const ElementCoefficient& f) {
  if (space.arity() != 1) throw std::invalid_argument("assemble_source: scalar space expected");
  Vector b = Vector::Zero(space.num_dofs());
  for (int k : space.elements()) {
    const ElementQuadrature& eq = cache.element(k);
    const std::vector<int>& dofs = space.element_dofs(k);
    const int nb = eq.num_basis;
    for (int q = 0; q < eq.num_points(); ++q) {
      const double w = f(k, q) * eq.weight[q];
      if (w == 0.0) continue;
      const double* N = &eq.N[q * nb];
      for (int i = 0; i < nb; ++i) b[dofs[i]] += w * N[i];
    }
  }
  return b;
}

Vector assemble_flux_load(const FieldSpace& space, const QuadratureCache& cache,
                          const ElementVectorCoefficient& g) {
  if (space.arity() != 1) throw std::invalid_argument("assemble_flux_load: scalar space expected");
  Vector b = Vector::Zero(space.num_dofs());
  for (int k : space.elements()) {
    const ElementQuadrature& eq = cache.element(k);
    const std::vector<int>& dofs = space.element_dofs(k);
    const int nb = eq.num_basis;
    for (int q = 0; q < eq.num_points(); ++q) {
      const auto v = g(k, q);
      const double w = eq.weight[q];
      for (int i = 0; i < nb; ++i) {
        b[dofs[i]] += w * (eq.dNx[q * nb + i] * v[0] + eq.dNy[q * nb + i] * v[1]);
      }
    }
  }
  return b;
}

Vector assemble_divergence_load(const FieldSpace& space, const QuadratureCache& cache,
                                const ElementCoefficient& s) {
  if (space.arity() != 2) {
    throw std::invalid_argument("assemble_divergence_load: vector space expected");
  }
  Vector b = Vector::Zero(space.num_dofs());
  for (int k : space.elements()) {
    const ElementQuadrature& eq = cache.element(k);
    const std::vector<int>& dofs = space.element_dofs(k);
    const int nb = eq.num_basis;
    for (int q = 0; q < eq.num_points(); ++q) {
      const double w = s(k, q) * eq.weight[q];
      if (w == 0.0) continue;
      for (int i = 0; i < nb; ++i) {
        b[dofs[2 * i]] += w * eq.dNx[q * nb + i];
        b[dofs[2 * i + 1]] += w * eq.dNy[q * nb + i];
      }
    }
  }
  return b;
}

Vector assemble_edge_load(const FieldSpace& space, const QuadratureCache& cache,
                          const std::vector<int>& edges, int side, const EdgeCoefficient& f) {
  if (space.arity() != 1) throw std::invalid_argument("assemble_edge_load: scalar space expected");
  Vector b = Vector::Zero(space.num_dofs());
  for (int e : edges) {
    const EdgeSideQuadrature& sq = cache.edge(e, side);
    if (!space.has_element(sq.element)) {
      throw std::invalid_argument("assemble_edge_load: edge side does not match the space support");
    }
    const std::vector<int>& dofs = space.element_dofs(sq.element);
    const int nb = sq.num_basis;
    for (int q = 0; q < sq.num_points(); ++q) {
      const double w = f(e, q) * sq.weight[q];
      if (w == 0.0) continue;
      const double* N = &sq.N[q * nb];
      for (int i = 0; i < nb; ++i) b[dofs[i]] += w * N[i];
    }
  }
  return b;
}

SparseSym restrict_to_free(const FieldSpace& space, const SparseMatrix& full) {
  Triplets t;
  t.reserve(full.nonZeros());
  for (int c = 0; c < full.outerSize(); ++c) {
    const int fc = space.free_index(c);
    if (fc < 0) continue;
    for (SparseMatrix::InnerIterator it(full, c); it; ++it) {
      const int fr = space.free_index(static_cast<int>(it.row()));
      if (fr >= 0) t.emplace_back(fr, fc, it.value());
    }
  }
  SparseSym s;
  s.matrix.resize(space.num_free(), space.num_free());
  s.matrix.setFromTriplets(t.begin(), t.end());
  return s;
}

Vector lifted_rhs(const FieldSpace& space, const SparseMatrix& full, const Vector& b_full) {
  Vector b = free_part(space, b_full);
  const Vector& g = space.constraint_values();
  if (space.num_constrained() == 0) return b;
  for (int c = 0; c < full.outerSize(); ++c) {
    if (!space.is_constrained(c) || g[c] == 0.0) continue;
    for (SparseMatrix::InnerIterator it(full, c); it; ++it) {
      const int fr = space.free_index(static_cast<int>(it.row()));
      if (fr >= 0) b[fr] -= it.value() * g[c];
    }
  }
  return b;
}

Vector free_part(const FieldSpace& space, const Vector& full) {
  Vector f(space.num_free());
  const std::vector<int>& dofs = space.free_dofs();
  for (int i = 0; i < space.num_free(); ++i) f[i] = full[dofs[i]];
  return f;
}

Vector expand_free(const FieldSpace& space, const Vector& free) {
  Vector full = space.constraint_values();
  const std::vector<int>& dofs = space.free_dofs();
  for (int i = 0; i < space.num_free(); ++i) full[dofs[i]] = free[i];
  return full;
}

}  // namespace voltacell
