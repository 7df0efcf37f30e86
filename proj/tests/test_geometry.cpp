#include <gtest/gtest.h>

#include <cmath>

#include "voltacell/geometry.hpp"

using namespace voltacell;

TEST(Geometry, DefaultCellBoundingBoxAndAreas) {
  const DomainGeometry g = build_interdigitated_domain(CellDimensions{});
  EXPECT_NEAR(g.width, 1000e-6, 1e-15);
  EXPECT_NEAR(g.height, 100e-6, 1e-15);
  const double total = g.anode.signed_area() + g.cathode.signed_area() + g.electrolyte.signed_area();
  EXPECT_NEAR(total, g.width * g.height, 1e-18);
  EXPECT_NEAR(g.anode.signed_area(), g.cathode.signed_area(), 1e-20);
  EXPECT_GT(g.electrolyte.signed_area(), 0.0);
}

TEST(Geometry, InterfacesHaveTwoComponents) {
  const DomainGeometry g = build_interdigitated_domain(CellDimensions{});
  ASSERT_FALSE(g.anode_interface.empty());
  ASSERT_FALSE(g.cathode_interface.empty());
  double la = 0.0, lc = 0.0;
  for (const Segment& s : g.anode_interface) la += std::hypot(s.b.x - s.a.x, s.b.y - s.a.y);
  for (const Segment& s : g.cathode_interface) lc += std::hypot(s.b.x - s.a.x, s.b.y - s.a.y);
  EXPECT_NEAR(la, lc, 1e-15);
}

TEST(Geometry, SymmetricVariantIsValid) {
  CellDimensions d;
  d.electrode_half_thickness = 40e-6;
  d.channel_thickness = 40e-6;
  d.tip_gap = 50e-6;
  d.end_cap_length = 50e-6;
  d.digit_length = 600e-6;
  EXPECT_NO_THROW(build_interdigitated_domain(d));
}

TEST(Geometry, DegenerateDigitRejected) {
  CellDimensions d;
  d.tip_gap = d.digit_length;
  EXPECT_THROW(build_interdigitated_domain(d), std::invalid_argument);
  CellDimensions n;
  n.channel_thickness = -1.0;
  EXPECT_THROW(build_interdigitated_domain(n), std::invalid_argument);
}

TEST(Mesh, DefaultSpecElementCount) {
  const Mesh m = generate_layered_mesh(build_interdigitated_domain({}), MeshSpec{}, 1e-6);
  EXPECT_EQ(m.num_elements(), 1144);
  const QualityReport q = validate_mesh(m);
  EXPECT_TRUE(q.ok()) << (q.violations.empty() ? "" : q.violations.front());
}

TEST(Mesh, UniformBlockMeshCountsBlocks) {
  MeshSpec s;
  s.base_x = {1, 1, 1, 1, 1};
  s.base_y = {1, 1, 1};
  s.layers = 0;
  s.degree = 1;
  s.normal_degree = 1;
  const Mesh m = generate_layered_mesh(build_interdigitated_domain({}), s, 1e-6);
  EXPECT_EQ(m.num_elements(), 15);
  const QualityReport q = validate_mesh(m);
  EXPECT_EQ(q.elements[0], 5);
  EXPECT_EQ(q.elements[1], 5);
  EXPECT_EQ(q.elements[2], 5);
}

TEST(Mesh, EdgeTagsPartition) {
  const Mesh m = generate_layered_mesh(build_interdigitated_domain({}), MeshSpec::coarse(), 1e-6);
  const QualityReport q = validate_mesh(m);
  ASSERT_TRUE(q.ok());
  int boundary = 0;
  for (int b : q.boundary_edges) boundary += b;
  EXPECT_EQ(q.interior_edges + q.interface_edges + boundary, m.num_edges());
  for (const MeshEdge& e : m.edges) {
    const int sides = (e.elem[0] >= 0) + (e.elem[1] >= 0);
    EXPECT_EQ(sides, e.kind == EdgeKind::Boundary ? 1 : 2);
  }
}

TEST(Mesh, CollectorsAreSolidOnly) {
  const Mesh m = generate_layered_mesh(build_interdigitated_domain({}), MeshSpec::coarse(), 1e-6);
  for (const MeshEdge& e : m.edges) {
    if (e.kind != EdgeKind::Boundary) continue;
    if (e.part == BoundaryPart::CcMinus) EXPECT_EQ(m.subdomain[e.elem[0]], Subdomain::Anode);
    if (e.part == BoundaryPart::CcPlus) EXPECT_EQ(m.subdomain[e.elem[0]], Subdomain::Cathode);
  }
}

TEST(Mesh, GradingRefinesTowardInterface) {
  MeshSpec s = MeshSpec{};
  const Mesh fine = generate_layered_mesh(build_interdigitated_domain({}), s, 1e-6);
  s.layers = 0;
  s.normal_degree = s.degree;
  const Mesh flat = generate_layered_mesh(build_interdigitated_domain({}), s, 1e-6);
  EXPECT_LT(max_interface_normal_thickness(fine), max_interface_normal_thickness(flat));
}

TEST(Mesh, LayerBudgetChecked) {
  MeshSpec s;
  s.base_x = {1, 1, 1, 1, 1};
  s.layers = 2;
  EXPECT_THROW(generate_layered_mesh(build_interdigitated_domain({}), s, 1e-6), std::invalid_argument);
}

TEST(Mesh, InvertedElementFlagged) {
  Mesh m = make_rectangle_mesh(1.0, 1.0, 2, 2, 1);
  m.nodes[4] = {1.4, 1.4};  // centre node pulled past the far corner
  const QualityReport q = validate_mesh(m);
  EXPECT_FALSE(q.ok());
  EXPECT_LE(q.min_jacobian, 0.0);
}

TEST(Mesh, EmptyMeshReported) {
  const QualityReport q = validate_mesh(Mesh{});
  ASSERT_EQ(q.violations.size(), 1u);
  EXPECT_EQ(q.violations[0], "no elements");
}

TEST(Mesh, LengthUnitScalesCoordinates) {
  const Mesh a = generate_layered_mesh(build_interdigitated_domain({}), MeshSpec::coarse(), 1e-6);
  const Mesh b = generate_layered_mesh(build_interdigitated_domain({}), MeshSpec::coarse(), 1e-4);
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) EXPECT_NEAR(a.nodes[i].x, 100.0 * b.nodes[i].x, 1e-9);
  EXPECT_NEAR(b.subdomain_area(Subdomain::Anode) + b.subdomain_area(Subdomain::Cathode) +
                  b.subdomain_area(Subdomain::Electrolyte),
              10.0, 1e-12);
}
