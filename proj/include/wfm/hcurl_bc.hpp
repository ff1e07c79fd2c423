// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wfm/dof_map.hpp"
#include "wfm/mesh.hpp"
#include "wfm/sparse.hpp"

namespace wfm {

/// Orthonormal split of R^3 at one scalar node into directions the field may
/// take (free) and directions that must vanish (constrained).
struct NodeConstraint {
  int node = -1;
  VertexClass location = VertexClass::Interior;
  int num_free = 3;
  /// Columns 0..num_free-1 are free, the rest constrained.
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();

  auto free_directions() const { return frame.leftCols(num_free); }
  auto constrained_directions() const { return frame.rightCols(3 - num_free); }
};

struct ConstraintSet {
  std::vector<NodeConstraint> nodes;
  /// (3 N_s) x reduced_dim, orthonormal columns, ordered by node then frame column.
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> reduction;

  int reduced_dim() const { return static_cast<int>(reduction.cols()); }
};

/// u x n = 0 on the box boundary, nodewise.
///
/// The free subspace at a node is the intersection of span{n_F} over the box
/// planes through it: R^3 inside, the normal line on an open face, and {0}
/// on edges and corners, where two independent normals meet.
ConstraintSet build_tangential_constraints(const Mesh& mesh, const DofMap& dofs);

/// R = identity; the unconstrained problem.
ConstraintSet build_free_constraints(const DofMap& dofs);

/// (R^T K R, R^T M R).
std::pair<SymmetricSparseMatrix, SymmetricSparseMatrix> apply_constraints(
    const SymmetricSparseMatrix& stiffness, const SymmetricSparseMatrix& mass,
    const ConstraintSet& constraints);

/// R^T A R for a single matrix.
SymmetricSparseMatrix restrict_matrix(const SymmetricSparseMatrix& a, const ConstraintSet& constraints);

}  // namespace wfm
