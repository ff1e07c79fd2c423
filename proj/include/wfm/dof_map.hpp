// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "wfm/mesh.hpp"
#include "wfm/reference_basis.hpp"

namespace wfm {

/// Continuous degree-k scalar node numbering.
///
/// Global scalar ids: mesh vertices first (id = vertex id), then k-1 nodes per
/// edge, C(k-1,2) per face, C(k-1,3) per tet, each block in entity order.
/// Vector DOF of component c at scalar node s is 3 s + c.
struct DofMap {
  int degree = 0;
  int num_scalar = 0;
  int nodes_per_tet = 0;
  /// Row-major num_tets x nodes_per_tet, local order of ReferenceBasis.
  std::vector<int> tet_nodes;
  std::vector<Point3> node_positions;
  /// True when the node lies on a boundary vertex, edge or face of the mesh.
  std::vector<bool> node_on_boundary;

  int num_vector() const { return 3 * num_scalar; }
  int node(int tet, int local) const {
    return tet_nodes[static_cast<std::size_t>(tet * nodes_per_tet + local)];
  }
  static int vector_dof(int scalar, int component) { return 3 * scalar + component; }
};

DofMap build_dof_map(const Mesh& mesh, int k);

/// Nodal interpolant of a vector field, interleaved by node.
Eigen::VectorXd interpolate(const DofMap& dofs,
                            const std::function<Eigen::Vector3d(const Point3&)>& field);

}  // namespace wfm
