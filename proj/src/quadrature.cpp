// SPDX-License-Identifier: Apache-2.0
#include "wfm/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "wfm/error.hpp"

namespace wfm {

// Golub-Welsch on the Jacobi recurrence for (1 - t)^alpha on [-1, 1], then
// mapped to [0, 1].
void gauss_jacobi(int npoints, int alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  const double a = alpha;
  const double b = 0.0;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(npoints, npoints);
  for (int i = 0; i < npoints; ++i) {
    const double s = 2.0 * i + a + b;
    jacobi(i, i) = (i == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (i + 1 < npoints) {
      const double n = i + 1.0;
      const double sn = 2.0 * n + a + b;
      const double beta = 4.0 * n * (n + a) * (n + b) * (n + a + b) /
                          (sn * sn * (sn + 1.0) * (sn - 1.0));
      jacobi(i, i + 1) = jacobi(i + 1, i) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  // mu0 = int_{-1}^{1} (1-t)^a dt = 2^(a+1)/(a+1); the [0,1] map scales by 2^-(a+1).
  const double mu0_unit = 1.0 / (a + 1.0);
  nodes.resize(static_cast<std::size_t>(npoints));
  weights.resize(static_cast<std::size_t>(npoints));
  for (int i = 0; i < npoints; ++i) {
    nodes[static_cast<std::size_t>(i)] = 0.5 * (eig.eigenvalues()(i) + 1.0);
    const double v0 = eig.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = mu0_unit * v0 * v0;
  }
}

QuadratureRule quadrature(int d) {
  if (d < 0 || d > 10) {
    throw Error(ErrorKind::UnsupportedDegree, "quadrature degree must lie in [0, 10]");
  }
  const int q = (d + 2) / 2;  // ceil((d + 1) / 2)
  std::vector<double> u1, w1, u2, w2, u3, w3;
  gauss_jacobi(q, 2, u1, w1);
  gauss_jacobi(q, 1, u2, w2);
  gauss_jacobi(q, 0, u3, w3);

  // x = u1, y = (1-u1) u2, z = (1-u1)(1-u2) u3; the Jacobian
  // (1-u1)^2 (1-u2) is absorbed in the Jacobi weights.
  QuadratureRule rule;
  rule.degree = d;
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      for (int k = 0; k < q; ++k) {
        const double a = u1[static_cast<std::size_t>(i)];
        const double b = u2[static_cast<std::size_t>(j)];
        const double c = u3[static_cast<std::size_t>(k)];
        rule.points.emplace_back(a, (1.0 - a) * b, (1.0 - a) * (1.0 - b) * c);
        rule.weights.push_back(w1[static_cast<std::size_t>(i)] * w2[static_cast<std::size_t>(j)] *
                               w3[static_cast<std::size_t>(k)]);
      }
    }
  }
  return rule;
}

}  // namespace wfm
