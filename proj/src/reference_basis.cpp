// SPDX-License-Identifier: Apache-2.0
#include "wfm/reference_basis.hpp"

#include <algorithm>

#include "wfm/error.hpp"
#include "wfm/mesh.hpp"

namespace wfm {

namespace {

// P_m(s) = prod_{j<m} (k s - j) / (j + 1), and its derivative.
void silvester(int k, int m, double s, double& value, double& deriv) {
  value = 1.0;
  deriv = 0.0;
  for (int j = 0; j < m; ++j) {
    const double f = (k * s - j) / (j + 1.0);
    const double df = k / (j + 1.0);
    deriv = deriv * f + value * df;
    value *= f;
  }
}

}  // namespace

int lagrange_dimension(int k) { return (k + 1) * (k + 2) * (k + 3) / 6; }

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree) {
  if (degree < 1 || degree > 4) {
    throw Error(ErrorKind::UnsupportedDegree, "Lagrange degree must lie in [1, 4]");
  }
  const int k = degree;
  for (int v = 0; v < 4; ++v) {
    std::array<int, 4> a{};
    a[static_cast<std::size_t>(v)] = k;
    nodes_.push_back(a);
  }
  for (const auto& e : kTetEdges) {
    for (int i = k - 1; i >= 1; --i) {
      std::array<int, 4> a{};
      a[static_cast<std::size_t>(e[0])] = i;
      a[static_cast<std::size_t>(e[1])] = k - i;
      nodes_.push_back(a);
    }
  }
  for (const auto& f : kTetFaces) {
    for (int i = k - 2; i >= 1; --i) {
      for (int j = k - 1 - i; j >= 1; --j) {
        std::array<int, 4> a{};
        a[static_cast<std::size_t>(f[0])] = i;
        a[static_cast<std::size_t>(f[1])] = j;
        a[static_cast<std::size_t>(f[2])] = k - i - j;
        nodes_.push_back(a);
      }
    }
  }
  for (int i = k - 3; i >= 1; --i) {
    for (int j = k - 2 - i; j >= 1; --j) {
      for (int l = k - 1 - i - j; l >= 1; --l) {
        nodes_.push_back({i, j, l, k - i - j - l});
      }
    }
  }
}

Eigen::Vector3d ReferenceBasis::node_point(int i) const {
  const auto& a = nodes_[static_cast<std::size_t>(i)];
  return Eigen::Vector3d(a[1], a[2], a[3]) / degree_;
}

Eigen::VectorXd ReferenceBasis::values(const Eigen::Vector3d& xi) const {
  const std::array<double, 4> lambda{1.0 - xi.sum(), xi[0], xi[1], xi[2]};
  Eigen::VectorXd out(size());
  for (int n = 0; n < size(); ++n) {
    double v = 1.0;
    for (int b = 0; b < 4; ++b) {
      double p = 0.0, dp = 0.0;
      silvester(degree_, nodes_[static_cast<std::size_t>(n)][static_cast<std::size_t>(b)],
                lambda[static_cast<std::size_t>(b)], p, dp);
      v *= p;
    }
    out(n) = v;
  }
  return out;
}

Eigen::MatrixXd ReferenceBasis::gradients(const Eigen::Vector3d& xi) const {
  const std::array<double, 4> lambda{1.0 - xi.sum(), xi[0], xi[1], xi[2]};
  Eigen::MatrixXd out(size(), 3);
  for (int n = 0; n < size(); ++n) {
    std::array<double, 4> p{}, dp{};
    for (int b = 0; b < 4; ++b) {
      silvester(degree_, nodes_[static_cast<std::size_t>(n)][static_cast<std::size_t>(b)],
                lambda[static_cast<std::size_t>(b)], p[static_cast<std::size_t>(b)],
                dp[static_cast<std::size_t>(b)]);
    }
    // d/dlambda_b of the product
    std::array<double, 4> dl{};
    for (int b = 0; b < 4; ++b) {
      double prod = dp[static_cast<std::size_t>(b)];
      for (int c = 0; c < 4; ++c) {
        if (c != b) prod *= p[static_cast<std::size_t>(c)];
      }
      dl[static_cast<std::size_t>(b)] = prod;
    }
    for (int d = 0; d < 3; ++d) out(n, d) = dl[static_cast<std::size_t>(d + 1)] - dl[0];
  }
  return out;
}

ReferenceBasis reference_basis(int k) { return ReferenceBasis(k); }

}  // namespace wfm
