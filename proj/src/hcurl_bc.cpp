// SPDX-License-Identifier: Apache-2.0
#include "wfm/hcurl_bc.hpp"

#include <string>

#include <Eigen/Geometry>

#include "wfm/error.hpp"

namespace wfm {

namespace {

constexpr double kParallelTol = 1e-10;

// Completes an orthonormal set of `free` vectors to a basis of R^3 by
// Gram-Schmidt against the coordinate axes.
Eigen::Matrix3d complete_frame(const std::vector<Eigen::Vector3d>& free) {
  Eigen::Matrix3d frame = Eigen::Matrix3d::Zero();
  int filled = 0;
  for (const auto& v : free) frame.col(filled++) = v;
  for (int axis = 0; axis < 3 && filled < 3; ++axis) {
    Eigen::Vector3d c = Eigen::Vector3d::Unit(axis);
    for (int i = 0; i < filled; ++i) c -= frame.col(i).dot(c) * frame.col(i);
    for (int i = 0; i < filled; ++i) c -= frame.col(i).dot(c) * frame.col(i);
    if (c.norm() > 0.5) frame.col(filled++) = c.normalized();
  }
  return frame;
}

NodeConstraint node_constraint(int node, const PointClass& pc) {
  NodeConstraint nc;
  nc.node = node;
  nc.location = pc.kind;
  // Intersect the admissible subspaces span{n} over all planes through the node.
  std::vector<Eigen::Vector3d> free{Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(),
                                    Eigen::Vector3d::UnitZ()};
  for (const auto& n : pc.normals) {
    if (free.size() == 3) {
      free = {n.normalized()};
    } else if (free.size() == 1 && free[0].cross(n).norm() > kParallelTol) {
      free.clear();
    }
  }
  nc.num_free = static_cast<int>(free.size());
  nc.frame = complete_frame(free);
  return nc;
}

ConstraintSet finish(std::vector<NodeConstraint> nodes, int num_vector) {
  ConstraintSet cs;
  std::vector<Eigen::Triplet<double, int>> entries;
  int col = 0;
  for (const auto& nc : nodes) {
    for (int f = 0; f < nc.num_free; ++f, ++col) {
      for (int c = 0; c < 3; ++c) {
        const double v = nc.frame(c, f);
        if (v != 0.0) entries.emplace_back(DofMap::vector_dof(nc.node, c), col, v);
      }
    }
  }
  cs.reduction.resize(num_vector, col);
  cs.reduction.setFromTriplets(entries.begin(), entries.end());
  cs.reduction.makeCompressed();
  cs.nodes = std::move(nodes);
  return cs;
}

}  // namespace

ConstraintSet build_tangential_constraints(const Mesh& mesh, const DofMap& dofs) {
  std::vector<NodeConstraint> nodes;
  nodes.reserve(static_cast<std::size_t>(dofs.num_scalar));
  for (int s = 0; s < dofs.num_scalar; ++s) {
    const auto pc = classify_point(mesh.domain(), dofs.node_positions[static_cast<std::size_t>(s)]);
    const bool topo = dofs.node_on_boundary[static_cast<std::size_t>(s)];
    if (topo != (pc.kind != VertexClass::Interior)) {
      throw Error(ErrorKind::GeometryInconsistency,
                  "node " + std::to_string(s) +
                      (topo ? " is on the mesh boundary but matches no box feature"
                            : " is interior to the mesh but lies on a box plane"));
    }
    nodes.push_back(node_constraint(s, pc));
  }
  return finish(std::move(nodes), dofs.num_vector());
}

ConstraintSet build_free_constraints(const DofMap& dofs) {
  std::vector<NodeConstraint> nodes(static_cast<std::size_t>(dofs.num_scalar));
  for (int s = 0; s < dofs.num_scalar; ++s) nodes[static_cast<std::size_t>(s)].node = s;
  return finish(std::move(nodes), dofs.num_vector());
}

SymmetricSparseMatrix restrict_matrix(const SymmetricSparseMatrix& a, const ConstraintSet& constraints) {
  const auto& r = constraints.reduction;
  if (a.dim() != r.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix dimension " + std::to_string(a.dim()) +
                                                  " differs from constraint rows " +
                                                  std::to_string(r.rows()));
  }
  using Sparse = SymmetricSparseMatrix::Storage;
  const Sparse full = a.full();
  const Sparse ar = full * r;
  const Sparse rt = r.transpose();
  const Sparse reduced = rt * ar;
  return SymmetricSparseMatrix(reduced);
}

std::pair<SymmetricSparseMatrix, SymmetricSparseMatrix> apply_constraints(
    const SymmetricSparseMatrix& stiffness, const SymmetricSparseMatrix& mass,
    const ConstraintSet& constraints) {
  if (stiffness.dim() != mass.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "stiffness and mass dimensions differ");
  }
  return {restrict_matrix(stiffness, constraints), restrict_matrix(mass, constraints)};
}

}  // namespace wfm
