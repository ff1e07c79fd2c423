// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

namespace wfm {

/// Quadrature on the reference tet {x, y, z >= 0, x + y + z <= 1}.
struct QuadratureRule {
  int degree = 0;
  /// Reference (x, y, z) coordinates.
  std::vector<Eigen::Vector3d> points;
  /// Sum to 1/6.
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// Gauss-Jacobi nodes and weights on [0, 1] for the weight (1 - u)^alpha.
void gauss_jacobi(int npoints, int alpha, std::vector<double>& nodes, std::vector<double>& weights);

/// Conical-product (collapsed Gauss-Jacobi) rule exact for total degree d,
/// 0 <= d <= 10.
QuadratureRule quadrature(int d);

}  // namespace wfm
