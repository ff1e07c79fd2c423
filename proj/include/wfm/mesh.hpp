// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace wfm {

using Point3 = Eigen::Vector3d;
using Tetra = std::array<int, 4>;
using FaceKey = std::array<int, 3>;
using EdgeKey = std::array<int, 2>;

/// Local edge numbering of a tetrahedron, shared by connectivity and DOF code.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Local face i is opposite local vertex i; its vertices are listed in
/// ascending local order.
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

/// Axis-aligned box [lo, hi].
struct Box {
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};

  static Box cube(double a, double b) { return Box{{a, a, a}, {b, b, b}}; }

  double extent(int axis) const { return hi[axis] - lo[axis]; }
  double max_extent() const;
  double volume() const { return extent(0) * extent(1) * extent(2); }
  /// Absolute tolerance for deciding that a coordinate lies on a box plane.
  double plane_tolerance() const { return 1e-12 * max_extent(); }
  bool operator==(const Box&) const = default;
};

double signed_volume(const Point3& a, const Point3& b, const Point3& c, const Point3& d);
double triangle_area(const Point3& a, const Point3& b, const Point3& c);

/// Derived face/edge structure of a tetrahedral mesh. Keys are sorted vertex
/// tuples and the lists are in lexicographic key order.
struct Connectivity {
  std::vector<FaceKey> faces;
  /// Incident tets per face; second entry is -1 for boundary faces.
  std::vector<std::array<int, 2>> face_tets;
  std::vector<EdgeKey> edges;
  /// Face opposite each local vertex.
  std::vector<std::array<int, 4>> tet_faces;
  /// Edges in kTetEdges order.
  std::vector<std::array<int, 6>> tet_edges;
  std::vector<bool> boundary_face;
  std::vector<bool> boundary_edge;
  std::vector<bool> boundary_vertex;

  std::size_t num_interior_faces() const;
  std::size_t num_boundary_faces() const;
};

/// Builds unique faces and edges with adjacency. Throws NonManifoldMesh when a
/// face is shared by more than two tets.
Connectivity derive_connectivity(int num_vertices, std::span<const Tetra> tets);

/// Immutable tetrahedral mesh of an axis-aligned box domain.
///
/// Tets are reoriented on construction so that every signed volume is
/// positive (swap of the last two vertices). The domain defaults to the
/// bounding box of the vertices.
class Mesh {
 public:
  Mesh(std::vector<Point3> vertices, std::vector<Tetra> tets, std::optional<Box> domain = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_tets() const { return static_cast<int>(tets_.size()); }
  int num_faces() const { return static_cast<int>(conn_.faces.size()); }
  int num_edges() const { return static_cast<int>(conn_.edges.size()); }

  const std::vector<Point3>& vertices() const { return vertices_; }
  const std::vector<Tetra>& tets() const { return tets_; }
  const Point3& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Tetra& tet(int t) const { return tets_[static_cast<std::size_t>(t)]; }
  std::array<Point3, 4> tet_points(int t) const;
  double tet_volume(int t) const;
  double total_volume() const;

  const Connectivity& connectivity() const { return conn_; }
  const Box& domain() const { return domain_; }

  /// Index of a face/edge by sorted key, or -1.
  int find_face(FaceKey key) const;
  int find_edge(EdgeKey key) const;

  /// V - E + F - T.
  long euler_characteristic() const;

 private:
  std::vector<Point3> vertices_;
  std::vector<Tetra> tets_;
  Box domain_;
  Connectivity conn_;
};

Box bounding_box(std::span<const Point3> points);

/// Structured mesh: n^3 subcubes, each split into the 6 tets around its main
/// diagonal. Vertex (i, j, k) has index i + (n+1)(j + (n+1)k).
Mesh build_box_mesh(const Box& box, int n);

enum class VertexClass { Corner, BoundaryEdge, BoundaryFaceInterior, Interior };

struct PointClass {
  VertexClass kind = VertexClass::Interior;
  /// Outward unit normals of the box planes containing the point.
  std::vector<Eigen::Vector3d> normals;
};

/// Locates a point relative to the box features. Throws GeometryInconsistency
/// for points outside the box.
PointClass classify_point(const Box& box, const Point3& p);

struct BoundaryVertexClasses {
  std::vector<PointClass> per_vertex;
  std::size_t count(VertexClass kind) const;
};

/// Throws GeometryInconsistency when a topologically boundary vertex lies on
/// no box plane, or an interior vertex lies on one.
BoundaryVertexClasses classify_boundary_vertices(const Mesh& mesh);

struct TetQuality {
  double diameter = 0.0;        // h_T
  double inball_diameter = 0.0;  // rho_T
  double ratio = 0.0;           // h_T / rho_T
};

TetQuality tet_quality(const std::array<Point3, 4>& p);

struct MeshQuality {
  std::vector<TetQuality> per_tet;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double max_diameter = 0.0;
};

MeshQuality mesh_quality(const Mesh& mesh);

}  // namespace wfm
