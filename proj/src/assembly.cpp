// SPDX-License-Identifier: Apache-2.0
#include "wfm/assembly.hpp"

#include <string>

#include <Eigen/LU>

#include "wfm/error.hpp"

namespace wfm {

namespace {

struct Tabulation {
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::MatrixXd> gradients;
};

Tabulation tabulate(const ReferenceBasis& basis, const QuadratureRule& quad) {
  Tabulation tab;
  for (const auto& x : quad.points) {
    tab.values.push_back(basis.values(x));
    tab.gradients.push_back(basis.gradients(x));
  }
  return tab;
}

void check_inputs(const Mesh& mesh, const DofMap& dofs, const ReferenceBasis& basis,
                  const QuadratureRule& quad, int required_degree) {
  if (dofs.degree != basis.degree() || dofs.nodes_per_tet != basis.size()) {
    throw Error(ErrorKind::InvalidArgument, "DOF map and basis degrees differ");
  }
  if (static_cast<std::size_t>(mesh.num_tets()) * static_cast<std::size_t>(dofs.nodes_per_tet) !=
      dofs.tet_nodes.size()) {
    throw Error(ErrorKind::InvalidArgument, "DOF map was built for a different mesh");
  }
  if (quad.degree < required_degree) {
    throw Error(ErrorKind::InvalidArgument,
                "quadrature degree " + std::to_string(quad.degree) + " below required " +
                    std::to_string(required_degree));
  }
}

// Returns J^{-1} and |det J| of the affine map from the reference tet.
std::pair<Eigen::Matrix3d, double> affine_map(const Mesh& mesh, int t) {
  const auto p = mesh.tet_points(t);
  Eigen::Matrix3d jac;
  jac.col(0) = p[1] - p[0];
  jac.col(1) = p[2] - p[0];
  jac.col(2) = p[3] - p[0];
  const double det = jac.determinant();
  if (!(det > 0.0)) {
    throw Error(ErrorKind::DegenerateElement, "tet " + std::to_string(t) + " has non-positive Jacobian");
  }
  return {jac.inverse(), det};
}

// Element matrices are scattered in ascending (tet, local row, local col)
// order; that order fixes the floating-point summation.
template <typename LocalKernel>
SymmetricSparseMatrix assemble(const Mesh& mesh, const DofMap& dofs, LocalKernel&& kernel) {
  const int nb = dofs.nodes_per_tet;
  const int nl = 3 * nb;
  std::vector<SymmetricSparseMatrix::Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_tets()) * static_cast<std::size_t>(nl * (nl + 1) / 2 + nl));
  Eigen::MatrixXd local(nl, nl);
  for (int t = 0; t < mesh.num_tets(); ++t) {
    local.setZero();
    kernel(t, local);
    for (int i = 0; i < nl; ++i) {
      const int gi = DofMap::vector_dof(dofs.node(t, i / 3), i % 3);
      for (int j = 0; j < nl; ++j) {
        const int gj = DofMap::vector_dof(dofs.node(t, j / 3), j % 3);
        if (gi <= gj && local(i, j) != 0.0) triplets.emplace_back(gi, gj, local(i, j));
      }
    }
  }
  auto m = SymmetricSparseMatrix::from_triplets(dofs.num_vector(), triplets);
  m.set_contributions(mesh.num_tets());
  return m;
}

}  // namespace

SymmetricSparseMatrix assemble_curl_curl(const Mesh& mesh, const DofMap& dofs,
                                         const ReferenceBasis& basis, const QuadratureRule& quad) {
  check_inputs(mesh, dofs, basis, quad, 2 * (basis.degree() - 1));
  const auto tab = tabulate(basis, quad);
  const int nb = basis.size();
  return assemble(mesh, dofs, [&](int t, Eigen::MatrixXd& local) {
    const auto [inv_jac, det] = affine_map(mesh, t);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Eigen::MatrixXd g = tab.gradients[q] * inv_jac;  // physical gradients, nb x 3
      const double w = quad.weights[q] * det;
      const Eigen::MatrixXd gram = g * g.transpose();
      // (grad phi_i x e_c) . (grad phi_j x e_d) = delta_cd g_i.g_j - g_i[d] g_j[c]
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j) {
          for (int c = 0; c < 3; ++c) {
            for (int d = 0; d < 3; ++d) {
              double v = -g(i, d) * g(j, c);
              if (c == d) v += gram(i, j);
              local(3 * i + c, 3 * j + d) += w * v;
            }
          }
        }
      }
    }
  });
}

SymmetricSparseMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs, const ReferenceBasis& basis,
                                    const QuadratureRule& quad) {
  check_inputs(mesh, dofs, basis, quad, 2 * basis.degree());
  const auto tab = tabulate(basis, quad);
  const int nb = basis.size();
  return assemble(mesh, dofs, [&](int t, Eigen::MatrixXd& local) {
    const double det = affine_map(mesh, t).second;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double w = quad.weights[q] * det;
      const auto& phi = tab.values[q];
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j) {
          const double v = w * phi(i) * phi(j);
          for (int c = 0; c < 3; ++c) local(3 * i + c, 3 * j + c) += v;
        }
      }
    }
  });
}

}  // namespace wfm
