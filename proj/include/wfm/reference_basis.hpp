// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

namespace wfm {

/// Degree-k Lagrange basis on the reference tet, nodes on the equispaced
/// barycentric lattice.
///
/// A node is identified by its multi-index alpha (alpha_0 + ... + alpha_3 = k)
/// with barycentric coordinates alpha / k, where lambda_0 = 1 - x - y - z and
/// lambda_i = x_i. Nodes are ordered vertices, edges (kTetEdges order), faces
/// (kTetFaces order), interior.
class ReferenceBasis {
 public:
  explicit ReferenceBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<std::array<int, 4>>& nodes() const { return nodes_; }
  Eigen::Vector3d node_point(int i) const;

  /// Basis values at a reference point.
  Eigen::VectorXd values(const Eigen::Vector3d& xi) const;
  /// size() x 3 reference gradients.
  Eigen::MatrixXd gradients(const Eigen::Vector3d& xi) const;

 private:
  int degree_;
  std::vector<std::array<int, 4>> nodes_;
};

/// Throws UnsupportedDegree unless 1 <= k <= 4.
ReferenceBasis reference_basis(int k);

/// Number of lattice nodes, (k+1)(k+2)(k+3)/6.
int lagrange_dimension(int k);

}  // namespace wfm
