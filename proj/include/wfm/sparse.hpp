// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace wfm {

/// Symmetric matrix stored as its upper triangle (row <= col).
class SymmetricSparseMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
  using Triplet = Eigen::Triplet<double, int>;

  SymmetricSparseMatrix() = default;
  /// Entries below the diagonal are dropped.
  explicit SymmetricSparseMatrix(const Storage& any);
  /// Duplicates are summed in triplet order; entries with row > col are dropped.
  static SymmetricSparseMatrix from_triplets(int dim, const std::vector<Triplet>& triplets);

  int dim() const { return static_cast<int>(upper_.rows()); }
  const Storage& upper() const { return upper_; }
  Storage full() const;
  Eigen::MatrixXd dense() const;

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  double quadratic_form(const Eigen::VectorXd& x) const;
  double frobenius_norm() const;
  /// Number of element contributions summed during assembly.
  long contributions() const { return contributions_; }
  void set_contributions(long n) { contributions_ = n; }

  /// Coordinate list "i j value", upper triangle, sorted by (i, j), %.16e.
  void write_coordinates(std::ostream& out) const;

 private:
  Storage upper_;
  long contributions_ = 0;
};

}  // namespace wfm
