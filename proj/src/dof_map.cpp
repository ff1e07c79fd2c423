// SPDX-License-Identifier: Apache-2.0
#include "wfm/dof_map.hpp"

#include <algorithm>

#include "wfm/error.hpp"

namespace wfm {

namespace {

// Rank of (i, j, k - i - j), all parts >= 1, in the enumeration i = k-2..1,
// j = k-1-i..1 used by ReferenceBasis for face nodes.
int face_interior_rank(int k, int i, int j) {
  int rank = 0;
  for (int a = k - 2; a >= 1; --a) {
    for (int b = k - 1 - a; b >= 1; --b) {
      if (a == i && b == j) return rank;
      ++rank;
    }
  }
  return -1;
}

}  // namespace

DofMap build_dof_map(const Mesh& mesh, int k) {
  if (k < 1 || k > 4) throw Error(ErrorKind::UnsupportedDegree, "Lagrange degree must lie in [1, 4]");
  const ReferenceBasis basis(k);
  const auto& conn = mesh.connectivity();
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_edges();
  const int nf = mesh.num_faces();
  const int nt = mesh.num_tets();
  const int per_edge = k - 1;
  const int per_face = (k - 1) * (k - 2) / 2;
  const int per_tet = (k - 1) * (k - 2) * (k - 3) / 6;
  const int edge_base = nv;
  const int face_base = edge_base + per_edge * ne;
  const int tet_base = face_base + per_face * nf;

  DofMap dm;
  dm.degree = k;
  dm.num_scalar = tet_base + per_tet * nt;
  dm.nodes_per_tet = basis.size();
  dm.tet_nodes.assign(static_cast<std::size_t>(nt) * static_cast<std::size_t>(basis.size()), -1);
  dm.node_positions.assign(static_cast<std::size_t>(dm.num_scalar), Point3::Zero());
  dm.node_on_boundary.assign(static_cast<std::size_t>(dm.num_scalar), false);
  std::vector<bool> placed(static_cast<std::size_t>(dm.num_scalar), false);

  for (int t = 0; t < nt; ++t) {
    const auto& tv = mesh.tet(t);
    const auto pts = mesh.tet_points(t);
    const auto& tf = conn.tet_faces[static_cast<std::size_t>(t)];
    const auto& te = conn.tet_edges[static_cast<std::size_t>(t)];
    int interior_rank = 0;
    for (int local = 0; local < basis.size(); ++local) {
      const auto& alpha = basis.nodes()[static_cast<std::size_t>(local)];
      std::vector<int> support;
      for (int b = 0; b < 4; ++b) {
        if (alpha[static_cast<std::size_t>(b)] > 0) support.push_back(b);
      }
      int id = -1;
      bool boundary = false;
      switch (support.size()) {
        case 1:
          id = tv[support[0]];
          boundary = conn.boundary_vertex[static_cast<std::size_t>(id)];
          break;
        case 2: {
          int le = 0;
          while (!(kTetEdges[static_cast<std::size_t>(le)][0] == support[0] &&
                   kTetEdges[static_cast<std::size_t>(le)][1] == support[1])) {
            ++le;
          }
          const int e = te[static_cast<std::size_t>(le)];
          const int a = tv[support[0]], b = tv[support[1]];
          const int at_low = a < b ? alpha[static_cast<std::size_t>(support[0])]
                                   : alpha[static_cast<std::size_t>(support[1])];
          id = edge_base + per_edge * e + (k - 1 - at_low);
          boundary = conn.boundary_edge[static_cast<std::size_t>(e)];
          break;
        }
        case 3: {
          int missing = 0 + 1 + 2 + 3 - support[0] - support[1] - support[2];
          const int f = tf[static_cast<std::size_t>(missing)];
          std::array<std::pair<int, int>, 3> gv{};
          for (int s = 0; s < 3; ++s) {
            gv[static_cast<std::size_t>(s)] = {tv[support[static_cast<std::size_t>(s)]],
                                               alpha[static_cast<std::size_t>(support[static_cast<std::size_t>(s)])]};
          }
          std::sort(gv.begin(), gv.end());
          id = face_base + per_face * f + face_interior_rank(k, gv[0].second, gv[1].second);
          boundary = conn.boundary_face[static_cast<std::size_t>(f)];
          break;
        }
        default:
          id = tet_base + per_tet * t + interior_rank++;
          break;
      }
      dm.tet_nodes[static_cast<std::size_t>(t * basis.size() + local)] = id;
      if (!placed[static_cast<std::size_t>(id)]) {
        Point3 x = Point3::Zero();
        for (int b = 0; b < 4; ++b) x += alpha[static_cast<std::size_t>(b)] * pts[static_cast<std::size_t>(b)];
        dm.node_positions[static_cast<std::size_t>(id)] =
            support.size() == 1 ? pts[static_cast<std::size_t>(support[0])] : Point3(x / k);
        dm.node_on_boundary[static_cast<std::size_t>(id)] = boundary;
        placed[static_cast<std::size_t>(id)] = true;
      }
    }
  }
  return dm;
}

Eigen::VectorXd interpolate(const DofMap& dofs,
                            const std::function<Eigen::Vector3d(const Point3&)>& field) {
  Eigen::VectorXd out(dofs.num_vector());
  for (int s = 0; s < dofs.num_scalar; ++s) {
    out.segment<3>(3 * s) = field(dofs.node_positions[static_cast<std::size_t>(s)]);
  }
  return out;
}

}  // namespace wfm
