// SPDX-License-Identifier: Apache-2.0
#include "wfm/wf_refine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include <Eigen/Geometry>

#include "wfm/error.hpp"

namespace wfm {

namespace {

constexpr double kInteriorBarycentricTol = 1e-12;

// Barycentric coordinates of p with respect to triangle (a, b, c), using the
// projection onto the triangle's plane.
std::array<double, 3> triangle_barycentric(const Point3& a, const Point3& b, const Point3& c,
                                           const Point3& p) {
  const Eigen::Vector3d n = (b - a).cross(c - a);
  const double area2 = n.squaredNorm();
  const double la = n.dot((c - b).cross(p - b)) / area2;
  const double lb = n.dot((a - c).cross(p - c)) / area2;
  return {la, lb, 1.0 - la - lb};
}

}  // namespace

Point3 incenter(const std::array<Point3, 4>& p) {
  double h = 0.0;
  for (const auto& e : kTetEdges) h = std::max(h, (p[e[0]] - p[e[1]]).norm());
  const double vol = std::abs(signed_volume(p[0], p[1], p[2], p[3]));
  if (!(vol >= 1e-14 * h * h * h) || h == 0.0) {
    throw Error(ErrorKind::DegenerateElement, "incenter of a flat tetrahedron");
  }
  Point3 z = Point3::Zero();
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& f = kTetFaces[static_cast<std::size_t>(i)];
    const double a = triangle_area(p[f[0]], p[f[1]], p[f[2]]);
    z += a * p[static_cast<std::size_t>(i)];
    total += a;
  }
  return z / total;
}

Point3 face_split_point(const std::array<Point3, 3>& face, std::span<const Point3> incenters) {
  const auto& [a, b, c] = face;
  if (incenters.size() == 1) return (a + b + c) / 3.0;
  if (incenters.size() != 2) {
    throw Error(ErrorKind::InvalidArgument, "a face has one or two incident tets");
  }
  const Eigen::Vector3d n = (b - a).cross(c - a).normalized();
  const Eigen::Vector3d d = incenters[1] - incenters[0];
  const double denom = n.dot(d);
  if (std::abs(denom) <= 1e-14 * d.norm()) {
    throw Error(ErrorKind::InvalidSplit, "incenter segment is parallel to the shared face");
  }
  const double s = n.dot(a - incenters[0]) / denom;
  const Point3 m = incenters[0] + s * d;
  const auto bary = triangle_barycentric(a, b, c, m);
  if (s <= 0.0 || s >= 1.0 || *std::min_element(bary.begin(), bary.end()) < kInteriorBarycentricTol) {
    throw Error(ErrorKind::InvalidSplit, "incenter segment does not cross the open face interior");
  }
  return m;
}

WorseyFarinMesh worsey_farin_refine(const Mesh& mesh) {
  const auto& conn = mesh.connectivity();
  const int nv = mesh.num_vertices();
  const int nt = mesh.num_tets();
  const int nf = mesh.num_faces();

  std::vector<Point3> incenters;
  incenters.reserve(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) incenters.push_back(incenter(mesh.tet_points(t)));

  std::vector<Point3> face_points;
  face_points.reserve(static_cast<std::size_t>(nf));
  for (int f = 0; f < nf; ++f) {
    const auto& key = conn.faces[static_cast<std::size_t>(f)];
    const auto& adj = conn.face_tets[static_cast<std::size_t>(f)];
    const std::array<Point3, 3> tri{mesh.vertex(key[0]), mesh.vertex(key[1]), mesh.vertex(key[2])};
    if (adj[1] < 0) {
      const std::array<Point3, 1> z{incenters[static_cast<std::size_t>(adj[0])]};
      face_points.push_back(face_split_point(tri, z));
    } else {
      const std::array<Point3, 2> z{incenters[static_cast<std::size_t>(adj[0])],
                                    incenters[static_cast<std::size_t>(adj[1])]};
      face_points.push_back(face_split_point(tri, z));
    }
  }

  std::vector<Point3> vertices = mesh.vertices();
  vertices.insert(vertices.end(), incenters.begin(), incenters.end());
  vertices.insert(vertices.end(), face_points.begin(), face_points.end());

  std::vector<Tetra> tets;
  tets.reserve(12 * static_cast<std::size_t>(nt));
  std::vector<std::array<int, 12>> children(static_cast<std::size_t>(nt));
  std::vector<std::array<FaceKey, 3>> face_children(static_cast<std::size_t>(nf));

  for (int t = 0; t < nt; ++t) {
    const auto& tv = mesh.tet(t);
    const int z = nv + t;
    for (int lf = 0; lf < 4; ++lf) {
      const auto& local = kTetFaces[static_cast<std::size_t>(lf)];
      const int f = conn.tet_faces[static_cast<std::size_t>(t)][static_cast<std::size_t>(lf)];
      const int m = nv + nt + f;
      std::array<int, 3> fv{tv[local[0]], tv[local[1]], tv[local[2]]};
      for (int sector = 0; sector < 3; ++sector) {
        std::array<int, 3> sub = fv;
        sub[static_cast<std::size_t>(sector)] = m;
        children[static_cast<std::size_t>(t)][static_cast<std::size_t>(3 * lf + sector)] =
            static_cast<int>(tets.size());
        tets.push_back({z, sub[0], sub[1], sub[2]});
        FaceKey key{sub[0], sub[1], sub[2]};
        std::sort(key.begin(), key.end());
        face_children[static_cast<std::size_t>(f)][static_cast<std::size_t>(sector)] = key;
      }
    }
  }

  // Face children are recorded from every incident tet; the canonical order
  // is by sorted key so both sides agree.
  for (auto& fc : face_children) std::sort(fc.begin(), fc.end());

  Mesh fine(std::move(vertices), std::move(tets), mesh.domain());
  return WorseyFarinMesh{mesh,
                         std::move(fine),
                         std::move(incenters),
                         std::move(face_points),
                         std::move(children),
                         std::move(face_children)};
}

bool WfValidationReport::ok() const {
  return conforming && child_count_ok && vertex_count_ok && positive_volumes &&
         max_child_volume_residual <= 1e-12 && total_volume_residual <= 1e-12 &&
         min_face_point_barycentric >= kInteriorBarycentricTol;
}

WfValidationReport validate_refinement(const Mesh& macro, std::span<const Point3> fine_vertices,
                                       std::span<const Tetra> fine_tets,
                                       std::span<const std::array<int, 12>> children_of,
                                       std::span<const Point3> face_point_of) {
  WfValidationReport r;
  const auto nfv = static_cast<long>(fine_vertices.size());

  r.vertex_count_ok =
      nfv == static_cast<long>(macro.num_vertices()) + macro.num_tets() + macro.num_faces();
  r.child_count_ok = static_cast<int>(children_of.size()) == macro.num_tets() &&
                     fine_tets.size() == 12 * children_of.size();
  // Every fine tet must be the child of exactly one macro tet.
  std::vector<int> owners(fine_tets.size(), 0);
  for (const auto& children : children_of) {
    for (int c : children) {
      if (c < 0 || static_cast<std::size_t>(c) >= owners.size()) {
        r.child_count_ok = false;
      } else {
        ++owners[static_cast<std::size_t>(c)];
      }
    }
  }
  if (std::any_of(owners.begin(), owners.end(), [](int k) { return k != 1; })) r.child_count_ok = false;

  bool indices_ok = true;
  r.positive_volumes = true;
  r.min_shape_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> volumes(fine_tets.size(), 0.0);
  for (std::size_t t = 0; t < fine_tets.size(); ++t) {
    const auto& tv = fine_tets[t];
    if (std::any_of(tv.begin(), tv.end(), [nfv](int v) { return v < 0 || v >= nfv; })) {
      indices_ok = false;
      r.positive_volumes = false;
      continue;
    }
    const std::array<Point3, 4> p{fine_vertices[static_cast<std::size_t>(tv[0])],
                                  fine_vertices[static_cast<std::size_t>(tv[1])],
                                  fine_vertices[static_cast<std::size_t>(tv[2])],
                                  fine_vertices[static_cast<std::size_t>(tv[3])]};
    volumes[t] = signed_volume(p[0], p[1], p[2], p[3]);
    if (!(volumes[t] > 0.0)) {
      r.positive_volumes = false;
      continue;
    }
    try {
      const auto q = tet_quality(p);
      r.min_shape_ratio = std::min(r.min_shape_ratio, q.ratio);
      r.max_shape_ratio = std::max(r.max_shape_ratio, q.ratio);
    } catch (const Error&) {
      r.positive_volumes = false;
    }
  }
  if (fine_tets.empty()) r.min_shape_ratio = 0.0;

  for (std::size_t t = 0; t < children_of.size() && t < static_cast<std::size_t>(macro.num_tets()); ++t) {
    double sum = 0.0;
    for (int c : children_of[t]) {
      if (c >= 0 && static_cast<std::size_t>(c) < volumes.size()) sum += volumes[static_cast<std::size_t>(c)];
    }
    const double parent = macro.tet_volume(static_cast<int>(t));
    r.max_child_volume_residual = std::max(r.max_child_volume_residual, std::abs(sum - parent) / parent);
  }
  double total = 0.0;
  for (double v : volumes) total += v;
  const double macro_volume = macro.total_volume();
  r.total_volume_residual = std::abs(total - macro_volume) / macro_volume;

  // Conformity: every face is shared by at most two tets, and faces seen once
  // lie on the macro boundary.
  std::map<FaceKey, int> incidence;
  if (indices_ok) {
    for (const auto& tv : fine_tets) {
      for (const auto& lf : kTetFaces) {
        FaceKey key{tv[lf[0]], tv[lf[1]], tv[lf[2]]};
        std::sort(key.begin(), key.end());
        ++incidence[key];
      }
    }
  }
  // A fine face seen once must be {m_F, a, b} with F a macro boundary face and
  // a, b vertices of F (fine numbering: macro vertices, incenters, face points).
  const auto& conn = macro.connectivity();
  const int first_face_point = macro.num_vertices() + macro.num_tets();
  for (const auto& [key, count] : incidence) {
    if (count > 2) {
      ++r.overloaded_faces;
    } else if (count == 1) {
      const int f = key[2] - first_face_point;
      bool on_boundary = f >= 0 && f < macro.num_faces() && key[1] < macro.num_vertices() &&
                         conn.boundary_face[static_cast<std::size_t>(f)];
      if (on_boundary) {
        const auto& fk = conn.faces[static_cast<std::size_t>(f)];
        for (int i = 0; i < 2; ++i) {
          on_boundary = on_boundary && std::find(fk.begin(), fk.end(), key[static_cast<std::size_t>(i)]) != fk.end();
        }
      }
      if (!on_boundary) ++r.unmatched_interior_faces;
    }
  }
  r.conforming = indices_ok && r.positive_volumes && r.overloaded_faces == 0 &&
                 r.unmatched_interior_faces == 0 && r.total_volume_residual <= 1e-12;

  r.min_face_point_barycentric = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < face_point_of.size() && f < conn.faces.size(); ++f) {
    const auto& k = conn.faces[f];
    const auto bary = triangle_barycentric(macro.vertex(k[0]), macro.vertex(k[1]), macro.vertex(k[2]),
                                           face_point_of[f]);
    r.min_face_point_barycentric =
        std::min(r.min_face_point_barycentric, *std::min_element(bary.begin(), bary.end()));
  }
  if (face_point_of.empty()) r.min_face_point_barycentric = 1.0 / 3.0;
  return r;
}

WfValidationReport validate_wf(const WorseyFarinMesh& wf) {
  return validate_refinement(wf.macro, wf.fine.vertices(), wf.fine.tets(), wf.children_of,
                             wf.face_point_of);
}

void write_report(std::ostream& out, const WfValidationReport& r) {
  auto line = [&out](const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    out << key << ": " << buf << '\n';
  };
  out << "conforming: " << (r.conforming ? "pass" : "fail") << '\n';
  out << "child_count: " << (r.child_count_ok ? "pass" : "fail") << '\n';
  out << "vertex_count: " << (r.vertex_count_ok ? "pass" : "fail") << '\n';
  out << "positive_volumes: " << (r.positive_volumes ? "pass" : "fail") << '\n';
  line("max_child_volume_residual", r.max_child_volume_residual);
  line("total_volume_residual", r.total_volume_residual);
  out << "unmatched_interior_faces: " << r.unmatched_interior_faces << '\n';
  out << "overloaded_faces: " << r.overloaded_faces << '\n';
  line("min_shape_ratio", r.min_shape_ratio);
  line("max_shape_ratio", r.max_shape_ratio);
  line("min_face_point_barycentric", r.min_face_point_barycentric);
  out << "status: " << (r.ok() ? "pass" : "fail") << '\n';
}

}  // namespace wfm
