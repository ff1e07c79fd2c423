// SPDX-License-Identifier: Apache-2.0
#include "wfm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include <Eigen/Geometry>

#include "wfm/error.hpp"

namespace wfm {

double Box::max_extent() const { return std::max({extent(0), extent(1), extent(2)}); }

double signed_volume(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

double triangle_area(const Point3& a, const Point3& b, const Point3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

std::size_t Connectivity::num_interior_faces() const {
  return static_cast<std::size_t>(
      std::count_if(face_tets.begin(), face_tets.end(), [](const auto& ft) { return ft[1] >= 0; }));
}

std::size_t Connectivity::num_boundary_faces() const { return faces.size() - num_interior_faces(); }

namespace {

template <std::size_t N>
std::array<int, N> sorted_key(std::array<int, N> key) {
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

Connectivity derive_connectivity(int num_vertices, std::span<const Tetra> tets) {
  Connectivity conn;
  const auto nt = tets.size();

  struct FaceSlot {
    FaceKey key;
    int tet;
    int local;
  };
  std::vector<FaceSlot> face_slots;
  face_slots.reserve(4 * nt);
  struct EdgeSlot {
    EdgeKey key;
    int tet;
    int local;
  };
  std::vector<EdgeSlot> edge_slots;
  edge_slots.reserve(6 * nt);

  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tv = tets[t];
    for (int v : tv) {
      if (v < 0 || v >= num_vertices) {
        throw Error(ErrorKind::InvalidArgument,
                    "tet " + std::to_string(t) + " references vertex " + std::to_string(v));
      }
    }
    for (int f = 0; f < 4; ++f) {
      const auto& lf = kTetFaces[static_cast<std::size_t>(f)];
      face_slots.push_back({sorted_key(FaceKey{tv[lf[0]], tv[lf[1]], tv[lf[2]]}),
                            static_cast<int>(t), f});
    }
    for (int e = 0; e < 6; ++e) {
      const auto& le = kTetEdges[static_cast<std::size_t>(e)];
      edge_slots.push_back({sorted_key(EdgeKey{tv[le[0]], tv[le[1]]}), static_cast<int>(t), e});
    }
  }

  auto by_key = [](const auto& a, const auto& b) {
    return std::tie(a.key, a.tet, a.local) < std::tie(b.key, b.tet, b.local);
  };
  std::sort(face_slots.begin(), face_slots.end(), by_key);
  std::sort(edge_slots.begin(), edge_slots.end(), by_key);

  conn.tet_faces.assign(nt, {-1, -1, -1, -1});
  conn.tet_edges.assign(nt, {-1, -1, -1, -1, -1, -1});

  for (std::size_t i = 0; i < face_slots.size();) {
    std::size_t j = i;
    while (j < face_slots.size() && face_slots[j].key == face_slots[i].key) ++j;
    if (j - i > 2) {
      const auto& k = face_slots[i].key;
      throw Error(ErrorKind::NonManifoldMesh, "face (" + std::to_string(k[0]) + "," +
                                                  std::to_string(k[1]) + "," + std::to_string(k[2]) +
                                                  ") has " + std::to_string(j - i) + " incident tets");
    }
    const int id = static_cast<int>(conn.faces.size());
    conn.faces.push_back(face_slots[i].key);
    conn.face_tets.push_back({face_slots[i].tet, j - i == 2 ? face_slots[i + 1].tet : -1});
    for (std::size_t s = i; s < j; ++s) {
      conn.tet_faces[static_cast<std::size_t>(face_slots[s].tet)][static_cast<std::size_t>(face_slots[s].local)] = id;
    }
    i = j;
  }

  for (std::size_t i = 0; i < edge_slots.size();) {
    std::size_t j = i;
    while (j < edge_slots.size() && edge_slots[j].key == edge_slots[i].key) ++j;
    const int id = static_cast<int>(conn.edges.size());
    conn.edges.push_back(edge_slots[i].key);
    for (std::size_t s = i; s < j; ++s) {
      conn.tet_edges[static_cast<std::size_t>(edge_slots[s].tet)][static_cast<std::size_t>(edge_slots[s].local)] = id;
    }
    i = j;
  }

  conn.boundary_face.assign(conn.faces.size(), false);
  conn.boundary_edge.assign(conn.edges.size(), false);
  conn.boundary_vertex.assign(static_cast<std::size_t>(num_vertices), false);
  for (std::size_t f = 0; f < conn.faces.size(); ++f) {
    if (conn.face_tets[f][1] >= 0) continue;
    conn.boundary_face[f] = true;
    for (int v : conn.faces[f]) conn.boundary_vertex[static_cast<std::size_t>(v)] = true;
  }
  // An edge is on the boundary iff it bounds some boundary face.
  for (std::size_t t = 0; t < nt; ++t) {
    for (int lf = 0; lf < 4; ++lf) {
      const int f = conn.tet_faces[t][static_cast<std::size_t>(lf)];
      if (!conn.boundary_face[static_cast<std::size_t>(f)]) continue;
      for (int e = 0; e < 6; ++e) {
        const auto& le = kTetEdges[static_cast<std::size_t>(e)];
        if (le[0] != lf && le[1] != lf) {
          conn.boundary_edge[static_cast<std::size_t>(conn.tet_edges[t][static_cast<std::size_t>(e)])] = true;
        }
      }
    }
  }
  return conn;
}

Box bounding_box(std::span<const Point3> points) {
  Box box{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
           std::numeric_limits<double>::max()},
          {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
           std::numeric_limits<double>::lowest()}};
  for (const auto& p : points) {
    for (int a = 0; a < 3; ++a) {
      box.lo[a] = std::min(box.lo[a], p[a]);
      box.hi[a] = std::max(box.hi[a], p[a]);
    }
  }
  return box;
}

Mesh::Mesh(std::vector<Point3> vertices, std::vector<Tetra> tets, std::optional<Box> domain)
    : vertices_(std::move(vertices)), tets_(std::move(tets)) {
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (!vertices_[v].allFinite()) {
      throw Error(ErrorKind::InvalidArgument, "vertex " + std::to_string(v) + " is not finite");
    }
  }
  const int nv = num_vertices();
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    auto& tv = tets_[t];
    for (int v : tv) {
      if (v < 0 || v >= nv) {
        throw Error(ErrorKind::InvalidArgument,
                    "tet " + std::to_string(t) + " references vertex " + std::to_string(v));
      }
    }
    auto s = sorted_key(tv);
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw Error(ErrorKind::InvalidArgument, "tet " + std::to_string(t) + " repeats a vertex");
    }
    const auto p = tet_points(static_cast<int>(t));
    const double vol = signed_volume(p[0], p[1], p[2], p[3]);
    double h = 0.0;
    for (const auto& e : kTetEdges) h = std::max(h, (p[e[0]] - p[e[1]]).norm());
    if (!(std::abs(vol) > 1e-14 * h * h * h)) {
      throw Error(ErrorKind::DegenerateElement, "tet " + std::to_string(t) + " has zero volume");
    }
    if (vol < 0.0) std::swap(tv[2], tv[3]);
  }
  domain_ = domain ? *domain : bounding_box(vertices_);
  conn_ = derive_connectivity(nv, tets_);
}

std::array<Point3, 4> Mesh::tet_points(int t) const {
  const auto& tv = tet(t);
  return {vertex(tv[0]), vertex(tv[1]), vertex(tv[2]), vertex(tv[3])};
}

double Mesh::tet_volume(int t) const {
  const auto p = tet_points(t);
  return signed_volume(p[0], p[1], p[2], p[3]);
}

double Mesh::total_volume() const {
  double sum = 0.0;
  for (int t = 0; t < num_tets(); ++t) sum += tet_volume(t);
  return sum;
}

int Mesh::find_face(FaceKey key) const {
  key = sorted_key(key);
  auto it = std::lower_bound(conn_.faces.begin(), conn_.faces.end(), key);
  return (it != conn_.faces.end() && *it == key) ? static_cast<int>(it - conn_.faces.begin()) : -1;
}

int Mesh::find_edge(EdgeKey key) const {
  key = sorted_key(key);
  auto it = std::lower_bound(conn_.edges.begin(), conn_.edges.end(), key);
  return (it != conn_.edges.end() && *it == key) ? static_cast<int>(it - conn_.edges.begin()) : -1;
}

long Mesh::euler_characteristic() const {
  return static_cast<long>(num_vertices()) - num_edges() + num_faces() - num_tets();
}

Mesh build_box_mesh(const Box& box, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "subdivisions must be >= 1");
  for (int a = 0; a < 3; ++a) {
    if (!(box.extent(a) > 0.0) || !std::isfinite(box.extent(a))) {
      throw Error(ErrorKind::InvalidArgument, "box must have positive finite extent in every axis");
    }
  }
  const int m = n + 1;
  auto vid = [m](int i, int j, int k) { return i + m * (j + m * k); };

  std::vector<Point3> vertices;
  vertices.reserve(static_cast<std::size_t>(m) * m * m);
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) {
        // Endpoints are set exactly so boundary coordinates carry no rounding.
        auto coord = [&](int axis, int idx) {
          if (idx == n) return box.hi[axis];
          return box.lo[axis] + box.extent(axis) * static_cast<double>(idx) / n;
        };
        vertices.emplace_back(coord(0, i), coord(1, j), coord(2, k));
      }
    }
  }

  // Each tet follows a monotone lattice path from the subcube's low corner to
  // its high corner; the axis permutation selects the path.
  static constexpr std::array<std::array<int, 3>, 6> kPaths = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<Tetra> tets;
  tets.reserve(6 * static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (const auto& path : kPaths) {
          std::array<int, 3> c{i, j, k};
          Tetra t{};
          t[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[static_cast<std::size_t>(path[static_cast<std::size_t>(s)])];
            t[static_cast<std::size_t>(s + 1)] = vid(c[0], c[1], c[2]);
          }
          tets.push_back(t);
        }
      }
    }
  }
  return Mesh(std::move(vertices), std::move(tets), box);
}

PointClass classify_point(const Box& box, const Point3& p) {
  const double tol = box.plane_tolerance();
  PointClass pc;
  for (int a = 0; a < 3; ++a) {
    if (p[a] < box.lo[a] - tol || p[a] > box.hi[a] + tol) {
      throw Error(ErrorKind::GeometryInconsistency, "point lies outside the box domain");
    }
    if (std::abs(p[a] - box.lo[a]) <= tol) pc.normals.push_back(-Eigen::Vector3d::Unit(a));
    if (std::abs(p[a] - box.hi[a]) <= tol) pc.normals.push_back(Eigen::Vector3d::Unit(a));
  }
  switch (pc.normals.size()) {
    case 0: pc.kind = VertexClass::Interior; break;
    case 1: pc.kind = VertexClass::BoundaryFaceInterior; break;
    case 2: pc.kind = VertexClass::BoundaryEdge; break;
    case 3: pc.kind = VertexClass::Corner; break;
    default:
      throw Error(ErrorKind::GeometryInconsistency, "point matches opposite box planes");
  }
  return pc;
}

std::size_t BoundaryVertexClasses::count(VertexClass kind) const {
  return static_cast<std::size_t>(std::count_if(per_vertex.begin(), per_vertex.end(),
                                                [kind](const PointClass& c) { return c.kind == kind; }));
}

BoundaryVertexClasses classify_boundary_vertices(const Mesh& mesh) {
  BoundaryVertexClasses out;
  out.per_vertex.reserve(static_cast<std::size_t>(mesh.num_vertices()));
  const auto& on_boundary = mesh.connectivity().boundary_vertex;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    auto pc = classify_point(mesh.domain(), mesh.vertex(v));
    const bool topo = on_boundary[static_cast<std::size_t>(v)];
    if (topo != (pc.kind != VertexClass::Interior)) {
      throw Error(ErrorKind::GeometryInconsistency,
                  "vertex " + std::to_string(v) +
                      (topo ? " is on the mesh boundary but on no box plane"
                            : " is interior to the mesh but lies on a box plane"));
    }
    out.per_vertex.push_back(std::move(pc));
  }
  return out;
}

TetQuality tet_quality(const std::array<Point3, 4>& p) {
  TetQuality q;
  for (const auto& e : kTetEdges) q.diameter = std::max(q.diameter, (p[e[0]] - p[e[1]]).norm());
  const double vol = std::abs(signed_volume(p[0], p[1], p[2], p[3]));
  if (!(vol > 1e-14 * q.diameter * q.diameter * q.diameter)) {
    throw Error(ErrorKind::DegenerateElement, "tet has non-positive volume");
  }
  double area = 0.0;
  for (const auto& f : kTetFaces) area += triangle_area(p[f[0]], p[f[1]], p[f[2]]);
  q.inball_diameter = 6.0 * vol / area;
  q.ratio = q.diameter / q.inball_diameter;
  return q;
}

MeshQuality mesh_quality(const Mesh& mesh) {
  MeshQuality mq;
  mq.per_tet.reserve(static_cast<std::size_t>(mesh.num_tets()));
  mq.min_ratio = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.num_tets(); ++t) {
    auto q = tet_quality(mesh.tet_points(t));
    mq.max_ratio = std::max(mq.max_ratio, q.ratio);
    mq.min_ratio = std::min(mq.min_ratio, q.ratio);
    mq.max_diameter = std::max(mq.max_diameter, q.diameter);
    mq.per_tet.push_back(q);
  }
  if (mq.per_tet.empty()) mq.min_ratio = 0.0;
  return mq;
}

}  // namespace wfm
