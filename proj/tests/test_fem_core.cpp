#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "support/dense_oracle.hpp"
#include "voltacell/assembly.hpp"
#include "voltacell/basis.hpp"
#include "voltacell/linear_solver.hpp"
#include "voltacell/space.hpp"

using namespace voltacell;

TEST(Basis, BilinearCentre) {
  const ShapeValues s = shape_eval(1, 1, 0.0, 0.0);
  ASSERT_EQ(s.values.size(), 4u);
  for (double v : s.values) EXPECT_NEAR(v, 0.25, 1e-15);
}

TEST(Basis, PartitionOfUnity) {
  for (int px = 1; px <= 4; ++px) {
    for (int py = 1; py <= 4; ++py) {
      for (auto [x, y] : {std::pair{0.3, -0.7}, std::pair{-1.0, 1.0}, std::pair{0.91, 0.05}}) {
        const ShapeValues s = shape_eval(px, py, x, y);
        double sum = 0.0, gx = 0.0, gy = 0.0;
        for (std::size_t i = 0; i < s.values.size(); ++i) {
          sum += s.values[i];
          gx += s.gradients[i][0];
          gy += s.gradients[i][1];
        }
        EXPECT_NEAR(sum, 1.0, 1e-13);
        EXPECT_NEAR(gx, 0.0, 1e-12);
        EXPECT_NEAR(gy, 0.0, 1e-12);
      }
    }
  }
}

TEST(Basis, NodalIndicator) {
  const auto n = gauss_lobatto_nodes(2);
  for (int b = 0; b <= 2; ++b) {
    for (int a = 0; a <= 2; ++a) {
      const ShapeValues s = shape_eval(2, 2, n[a], n[b]);
      for (int i = 0; i < 9; ++i) EXPECT_NEAR(s.values[i], i == b * 3 + a ? 1.0 : 0.0, 1e-14);
    }
  }
}

TEST(Basis, LobattoNodesMatchIndependentConstruction) {
  for (int p = 1; p <= 6; ++p) {
    const auto a = gauss_lobatto_nodes(p);
    const auto b = oracle::gll(p);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
  }
}

TEST(Quadrature, GaussExactness) {
  for (int n = 1; n <= 8; ++n) {
    const Rule1D r = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.w[i] * std::pow(r.x[i], d);
      EXPECT_NEAR(s, d % 2 ? 0.0 : 2.0 / (d + 1), 1e-13) << n << " " << d;
    }
  }
}

TEST(Space, SupportsAndCollectorConstraint) {
  const Mesh m = generate_layered_mesh(build_interdigitated_domain({}), MeshSpec::coarse(), 1e-4);
  const FieldSpace theta(m, Support::All, 1);
  EXPECT_EQ(static_cast<int>(theta.elements().size()), m.num_elements());
  const FieldSpace phis(m, Support::Solid, 1, {{BoundaryPart::CcMinus, EssentialBC::kAll, {}}});
  EXPECT_GT(phis.num_constrained(), 0);
  for (int d = 0; d < phis.num_dofs(); ++d) {
    if (phis.is_constrained(d)) {
      EXPECT_NEAR(phis.dof_coord(d).x, 0.0, 1e-14);
      EXPECT_EQ(phis.constraint_values()[d], 0.0);
    }
  }
}

TEST(Space, NormalDisplacementConstraintsOnTwoElements) {
  // [0,2]x[0,1], two bilinear elements: every boundary side is x- or y-constant.
  const Mesh m = make_rectangle_mesh(2.0, 1.0, 2, 1, 1);
  std::vector<EssentialBC> bcs;
  for (BoundaryPart p : {BoundaryPart::CcMinus, BoundaryPart::CcPlus, BoundaryPart::Top, BoundaryPart::Bottom}) {
    bcs.push_back({p, EssentialBC::kNormal, {}});
  }
  const FieldSpace u(m, Support::All, 2, bcs);
  ASSERT_EQ(u.num_dofs(), 12);
  // x-component fixed on x = 0 and x = 2 (4 nodes); y-component fixed on all 6 nodes.
  int cx = 0, cy = 0;
  for (int d = 0; d < u.num_dofs(); ++d) {
    if (!u.is_constrained(d)) continue;
    (u.dof_component(d) == 0 ? cx : cy)++;
    if (u.dof_component(d) == 0) EXPECT_TRUE(u.dof_coord(d).x == 0.0 || u.dof_coord(d).x == 2.0);
  }
  EXPECT_EQ(cx, 4);
  EXPECT_EQ(cy, 6);
}

namespace {

struct SmallCell {
  Mesh mesh = oracle::small_cell_mesh();
  QuadratureCache cache{mesh};
};

double lin(const Point& x) { return 1.0 + 0.3 * x.x + 0.2 * x.y; }

}  // namespace

TEST(Assembly, MassRowSumsGiveArea) {
  const Mesh m = make_rectangle_mesh(0.7, 0.4, 1, 1, 1);
  const QuadratureCache c(m);
  const FieldSpace s(m, Support::All, 1);
  const SparseMatrix M = assemble_mass(s, c, constant_coefficient(1.0));
  EXPECT_NEAR(M.sum(), 0.28, 1e-15);
  const SparseMatrix M3 = assemble_mass(s, c, constant_coefficient(3.0));
  EXPECT_NEAR((Eigen::MatrixXd(M3) - 3.0 * Eigen::MatrixXd(M)).norm(), 0.0, 1e-14);
}

TEST(Assembly, NonPositiveCoefficientNamesLocation) {
  const Mesh m = make_rectangle_mesh(1.0, 1.0, 1, 1, 1);
  const QuadratureCache c(m);
  const FieldSpace s(m, Support::All, 1);
  try {
    assemble_stiffness(s, c, constant_coefficient(-1.0));
    FAIL() << "expected domain_error";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("element 0"), std::string::npos);
  }
}

TEST(Assembly, StiffnessAnnihilatesConstants) {
  SmallCell sc;
  const FieldSpace s(sc.mesh, Support::All, 1);
  const SparseMatrix K = assemble_stiffness(s, sc.cache, [&](int k, int q) { return lin(sc.cache.element(k).x[q]); });
  EXPECT_LT((K * Vector::Ones(s.num_dofs())).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Assembly, InterfaceMassUnitRowSumsGiveLength) {
  SmallCell sc;
  const FieldSpace s(sc.mesh, Support::Solid, 1);
  const SparseMatrix B = assemble_interface_mass(s, sc.cache, 0, constant_edge_coefficient(1.0));
  double len = 0.0;
  for (int e : sc.cache.interface_edges()) len += sc.mesh.edges[e].elem[0] >= 0 ? 1.0 : 0.0;
  EXPECT_NEAR(B.sum(), 2.0 * 1.0, 1e-14);  // two vertical interfaces of height 1
  EXPECT_EQ(len, 4.0);
  const SparseMatrix Z = assemble_interface_mass(s, sc.cache, 0, constant_edge_coefficient(0.0));
  EXPECT_EQ(Z.norm(), 0.0);
}

TEST(Assembly, ElasticityRigidModes) {
  SmallCell sc;
  const FieldSpace u(sc.mesh, Support::Solid, 2);
  const SparseMatrix K = assemble_elasticity(u, sc.cache, constant_coefficient(9.6154e8), constant_coefficient(2.0833e9));
  Vector tx(u.num_dofs()), ty(u.num_dofs()), rot(u.num_dofs());
  for (int d = 0; d < u.num_dofs(); ++d) {
    const Point& x = u.dof_coord(d);
    const int c = u.dof_component(d);
    tx[d] = c == 0;
    ty[d] = c == 1;
    rot[d] = c == 0 ? -x.y : x.x;
  }
  const double scale = Eigen::MatrixXd(K).cwiseAbs().maxCoeff();
  for (const Vector* v : {&tx, &ty, &rot}) EXPECT_LT((K * *v).cwiseAbs().maxCoeff() / scale, 1e-13);
}

TEST(Assembly, MatchesDenseOracle) {
  SmallCell sc;
  const FieldSpace all(sc.mesh, Support::All, 1);
  const FieldSpace solid(sc.mesh, Support::Solid, 1);
  const FieldSpace ely(sc.mesh, Support::Electrolyte, 1);
  const FieldSpace u(sc.mesh, Support::Solid, 2);
  auto at = [&](int k, int q) { return lin(sc.cache.element(k).x[q]); };
  auto oat = [](int, const Point& x) { return lin(x); };
  EXPECT_LT(oracle::relative_difference(Eigen::MatrixXd(assemble_mass(all, sc.cache, at)), oracle::mass(all, oat)), 1e-12);
  EXPECT_LT(oracle::relative_difference(Eigen::MatrixXd(assemble_stiffness(all, sc.cache, at)),
                                        oracle::stiffness(all, oat)),
            1e-12);
  for (int side : {0, 1}) {
    const FieldSpace& s = side == 0 ? solid : ely;
    const auto sparse = assemble_interface_mass(s, sc.cache, side, [&](int e, int q) {
      return lin(sc.cache.edge(e, side).x[q]);
    });
    EXPECT_LT(oracle::relative_difference(Eigen::MatrixXd(sparse),
                                          oracle::interface_mass(s, side, [](int, const Point& x) { return lin(x); })),
              1e-12);
  }
  auto G = [&](int k) { return sc.mesh.subdomain[k] == Subdomain::Anode ? 1.4e9 : 9.6154e8; };
  auto K = [&](int k) { return sc.mesh.subdomain[k] == Subdomain::Anode ? 3.0333e9 : 2.0833e9; };
  const auto sparse = assemble_elasticity(u, sc.cache, [&](int k, int) { return G(k); }, [&](int k, int) { return K(k); });
  EXPECT_LT(oracle::relative_difference(Eigen::MatrixXd(sparse),
                                        oracle::elasticity(u, [&](int k, const Point&) { return G(k); },
                                                           [&](int k, const Point&) { return K(k); })),
            1e-12);
}

TEST(Assembly, ReducedMatricesSymmetricPositiveDefinite) {
  SmallCell sc;
  const FieldSpace s(sc.mesh, Support::All, 1, {{BoundaryPart::CcMinus, EssentialBC::kAll, {}}});
  const SparseSym K = restrict_to_free(s, assemble_stiffness(s, sc.cache, constant_coefficient(2.0)));
  EXPECT_LT(K.asymmetry(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.dense());
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Assembly, DirichletLiftingReproducesLinearField) {
  const Mesh m = make_rectangle_mesh(1.0, 1.0, 3, 3, 2);
  const QuadratureCache c(m);
  auto g = [](const Point& x) { return 2.0 + 3.0 * x.x - x.y; };
  std::vector<EssentialBC> bcs;
  for (BoundaryPart p : {BoundaryPart::CcMinus, BoundaryPart::CcPlus, BoundaryPart::Top, BoundaryPart::Bottom}) {
    bcs.push_back({p, EssentialBC::kAll, g});
  }
  const FieldSpace s(m, Support::All, 1, bcs);
  const SparseMatrix K = assemble_stiffness(s, c, constant_coefficient(1.0));
  const Vector uh = expand_free(s, solve_spd(restrict_to_free(s, K), lifted_rhs(s, K, Vector::Zero(s.num_dofs()))));
  for (int d = 0; d < s.num_dofs(); ++d) EXPECT_NEAR(uh[d], g(s.dof_coord(d)), 1e-12);
}

TEST(Solver, SmallSystems) {
  SparseSym I;
  I.matrix = SparseMatrix(3, 3);
  I.matrix.setIdentity();
  const Vector b = Vector::LinSpaced(3, 1.0, 3.0);
  EXPECT_NEAR((solve_spd(I, b) - b).norm(), 0.0, 1e-15);
  SparseSym A;
  A.matrix = SparseMatrix(2, 2);
  A.matrix.insert(0, 0) = 2;
  A.matrix.insert(0, 1) = 1;
  A.matrix.insert(1, 0) = 1;
  A.matrix.insert(1, 1) = 2;
  const Vector x = solve_spd(A, Vector::Constant(2, 3.0));
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 1.0, 1e-14);
}

TEST(Solver, MatchesDenseFactorization) {
  const Mesh m = generate_layered_mesh(build_interdigitated_domain({}), MeshSpec::coarse(), 1e-4);
  const QuadratureCache c(m);
  const FieldSpace s(m, Support::All, 1);
  const SparseMatrix M = assemble_mass(s, c, constant_coefficient(3.8));
  const SparseMatrix K = assemble_stiffness(s, c, constant_coefficient(1.04));
  const SparseSym A = restrict_to_free(s, M + 0.05 * K);
  Vector b(A.size());
  for (int i = 0; i < A.size(); ++i) b[i] = std::sin(0.37 * i);
  const Vector x = solve_spd(A, b);
  const Vector xd = A.dense().llt().solve(b);
  EXPECT_LT((x - xd).norm() / xd.norm(), 1e-8);
}

TEST(Solver, IterativeFallbackPath) {
  const Mesh m = make_rectangle_mesh(1.0, 1.0, 6, 6, 2);
  const QuadratureCache c(m);
  const FieldSpace s(m, Support::All, 1);
  const SparseSym A = restrict_to_free(s, assemble_mass(s, c, constant_coefficient(1.0)) +
                                              assemble_stiffness(s, c, constant_coefficient(1.0)));
  const Vector b = Vector::Ones(A.size());
  SolverOptions o;
  o.direct = false;
  SpdSolver solver(o);
  solver.factorize(A);
  const Vector x = solver.solve(b);
  EXPECT_TRUE(solver.last_report().used_iterative);
  EXPECT_LT((A.matrix * x - b).norm(), 1e-9 * b.norm());
}

TEST(Solver, InconsistentSingularSystemRaises) {
  SparseSym A;
  A.matrix = SparseMatrix(2, 2);
  A.matrix.insert(0, 0) = 1;
  A.matrix.insert(0, 1) = 1;
  A.matrix.insert(1, 0) = 1;
  A.matrix.insert(1, 1) = 1;
  Vector b(2);
  b << 1.0, 0.0;
  try {
    solve_spd(A, b);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GT(e.residual(), 1e-10);
  }
}
