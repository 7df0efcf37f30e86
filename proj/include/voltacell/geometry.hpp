#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace voltacell {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class Subdomain : std::uint8_t { Anode, Cathode, Electrolyte };
enum class BoundaryPart : std::uint8_t { CcMinus, CcPlus, Top, Bottom };
enum class EdgeKind : std::uint8_t { Interior, Interface, Boundary };

inline bool is_electrode(Subdomain s) { return s != Subdomain::Electrolyte; }
const char* to_string(Subdomain s);
const char* to_string(BoundaryPart p);

/// Dimensions of the representative interdigitated cell, in meters.
struct CellDimensions {
  double electrode_half_thickness = 30e-6;  // H_s
  double channel_thickness = 40e-6;         // H_e
  double digit_length = 900e-6;             // L
  double tip_gap = 40e-6;                   // w
  double end_cap_length = 60e-6;            // l

  void validate() const;
};

struct Polygon {
  std::vector<Point> vertices;  // counter-clockwise

  double signed_area() const;
};

struct Segment {
  Point a;
  Point b;
};

/// Canonical layout: the anode is an L-shaped region made of an end cap
/// [0,l] x [0,H] and a digit [0,L] x [0,H_s] entering from the left wall.
/// The cathode is its point reflection through the cell centre. The
/// electrolyte fills the S-shaped channel in between.
struct DomainGeometry {
  CellDimensions dims;
  double width = 0.0;   // L + w + l
  double height = 0.0;  // 2 H_s + H_e
  Polygon anode;
  Polygon cathode;
  Polygon electrolyte;
  // Oriented so that the right-hand normal points from the electrode into
  // the electrolyte.
  std::vector<Segment> anode_interface;
  std::vector<Segment> cathode_interface;
  std::vector<Segment> cc_minus;
  std::vector<Segment> cc_plus;
  std::vector<Segment> top;
  std::vector<Segment> bottom;
  // Tensor-product block decomposition; every block lies in one subdomain.
  std::vector<double> x_breaks;
  std::vector<double> y_breaks;

  Subdomain block_subdomain(int column, int row) const;
};

DomainGeometry build_interdigitated_domain(const CellDimensions& dims);

/// Layered-mesh controls. Base counts are per block column (5 entries) and
/// per block row (3 entries) of the interdigitated decomposition.
struct MeshSpec {
  std::vector<int> base_x{2, 2, 12, 2, 2};
  std::vector<int> base_y{2, 2, 2};
  int layers = 4;
  double grading = 0.5;
  int degree = 3;
  int normal_degree = 4;
  double max_aspect_ratio = 500.0;

  void validate() const;
  /// Coarse settings for fast runs and tests.
  static MeshSpec coarse();
};

struct MeshEdge {
  std::array<int, 2> v{-1, -1};  // v[0] < v[1]
  EdgeKind kind = EdgeKind::Interior;
  BoundaryPart part = BoundaryPart::Bottom;  // meaningful for boundary edges
  // For interface edges elem[0] is the electrode element, elem[1] the
  // electrolyte element.
  std::array<int, 2> elem{-1, -1};
  std::array<int, 2> local{-1, -1};
};

/// Conforming quadrilateral mesh. Local vertex order is counter-clockwise
/// starting at reference (-1,-1); local edges are bottom, right, top, left.
struct Mesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 4>> quads;
  std::vector<Subdomain> subdomain;
  std::vector<std::array<int, 2>> degree;  // per reference direction (xi, eta)
  std::vector<MeshEdge> edges;
  std::vector<std::array<int, 4>> element_edges;
  double length_unit = 1.0;  // meters per coordinate unit

  int num_elements() const { return static_cast<int>(quads.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  /// Builds edges, adjacency and tags. Exterior edges are assigned to the
  /// boundary part of the bounding-box side they lie on.
  static Mesh from_quads(std::vector<Point> nodes, std::vector<std::array<int, 4>> quads,
                         std::vector<Subdomain> subdomain,
                         std::vector<std::array<int, 2>> degree, double length_unit = 1.0);

  /// Vertex ids of local edge `e` of element `k`, ordered by increasing
  /// local coordinate.
  std::array<int, 2> local_edge_vertices(int k, int e) const;
  /// Polynomial degree of element `k` along its local edge `e`.
  int edge_degree(int k, int e) const;
  double element_area(int k) const;
  double subdomain_area(Subdomain s) const;
};

/// Generates the layered anisotropic mesh. Output coordinates are divided by
/// `length_unit` (meters per internal unit).
Mesh generate_layered_mesh(const DomainGeometry& geom, const MeshSpec& spec,
                           double length_unit = 1.0);

/// Uniform nx x ny mesh of [0,width] x [0,height] with a single subdomain tag.
Mesh make_rectangle_mesh(double width, double height, int nx, int ny, int degree,
                         Subdomain tag = Subdomain::Anode);

struct QualityReport {
  double min_jacobian = 0.0;
  double max_aspect_ratio = 0.0;
  int interior_edges = 0;
  int interface_edges = 0;
  std::array<int, 4> boundary_edges{};  // indexed by BoundaryPart
  std::array<int, 3> elements{};        // indexed by Subdomain
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

QualityReport validate_mesh(const Mesh& mesh, double max_aspect_ratio = 500.0);

/// Largest element thickness measured normal to an interface edge, over all
/// elements adjacent to the interface.
double max_interface_normal_thickness(const Mesh& mesh);

}  // namespace voltacell
